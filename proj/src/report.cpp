#include "kdv/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "kdv/error.hpp"

namespace kdv {

using ojson = nlohmann::ordered_json;

std::string report_to_json(const EvaluationReport& report) {
  ojson doc;
  ojson dataset;
  dataset["users"] = report.dataset.users;
  dataset["sessions"] = report.dataset.sessions;
  dataset["events"] = report.dataset.events;
  dataset["keystrokes"] = report.dataset.keystrokes;
  ojson platforms = ojson::object();
  for (const auto& [name, p] : report.dataset.platforms) {
    platforms[name] = {{"users", p.users},
                       {"sessions", p.sessions},
                       {"events", p.events},
                       {"keystrokes", p.keystrokes}};
  }
  dataset["platforms"] = std::move(platforms);
  doc["dataset"] = std::move(dataset);
  doc["config"] = {{"similarity_mode", report.similarity_mode},
                   {"absolute_threshold", report.absolute_threshold},
                   {"feature_kinds", report.feature_kinds},
                   {"k_max", report.k_max}};
  ojson scenarios = ojson::array();
  for (const auto& s : report.scenarios) {
    ojson scorers = ojson::array();
    for (const auto& r : s.scorers) {
      scorers.push_back({{"scorer", r.scorer}, {"accuracies", r.accuracies}});
    }
    scenarios.push_back({{"scenario", s.scenario},
                         {"kind", std::string(to_string(s.kind))},
                         {"n_users", s.n_users},
                         {"excluded_users", s.excluded_users},
                         {"scorers", std::move(scorers)}});
  }
  doc["scenarios"] = std::move(scenarios);
  return doc.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    EvaluationReport report;
    const auto& ds = doc.at("dataset");
    report.dataset.users = ds.at("users").get<std::size_t>();
    report.dataset.sessions = ds.at("sessions").get<std::size_t>();
    report.dataset.events = ds.at("events").get<std::size_t>();
    report.dataset.keystrokes = ds.at("keystrokes").get<std::size_t>();
    for (const auto& [name, p] : ds.at("platforms").items()) {
      report.dataset.platforms[name] = {p.at("users").get<std::size_t>(),
                                        p.at("sessions").get<std::size_t>(),
                                        p.at("events").get<std::size_t>(),
                                        p.at("keystrokes").get<std::size_t>()};
    }
    const auto& cfg = doc.at("config");
    report.similarity_mode = cfg.at("similarity_mode").get<std::string>();
    report.absolute_threshold = cfg.at("absolute_threshold").get<double>();
    report.feature_kinds = cfg.at("feature_kinds").get<std::string>();
    report.k_max = cfg.at("k_max").get<int>();
    for (const auto& s : doc.at("scenarios")) {
      ScenarioResult r;
      r.scenario = s.at("scenario").get<std::string>();
      r.kind = parse_scenario_kind(s.at("kind").get<std::string>());
      r.n_users = s.at("n_users").get<std::size_t>();
      r.excluded_users = s.at("excluded_users").get<std::vector<std::string>>();
      for (const auto& sc : s.at("scorers")) {
        r.scorers.push_back({sc.at("scorer").get<std::string>(),
                             sc.at("accuracies").get<std::vector<double>>()});
      }
      report.scenarios.push_back(std::move(r));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("report JSON: ") + e.what());
  }
}

std::string report_to_csv(const EvaluationReport& report) {
  std::string out = "scenario,scorer,k,accuracy\n";
  char buf[32];
  for (const auto& s : report.scenarios) {
    for (const auto& r : s.scorers) {
      for (std::size_t k = 0; k < r.accuracies.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.accuracies[k]);
        out += s.scenario + "," + r.scorer + "," + std::to_string(k + 1) + "," + buf + "\n";
      }
    }
  }
  return out;
}

std::string render_table(const EvaluationReport& report) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-10s %-8s %5s", "scenario", "scorer", "n");
  out += buf;
  for (int k = 1; k <= report.k_max; ++k) {
    std::snprintf(buf, sizeof(buf), "  k=%-4d", k);
    out += buf;
  }
  out += '\n';
  for (const auto& s : report.scenarios) {
    for (const auto& r : s.scorers) {
      std::snprintf(buf, sizeof(buf), "%-10s %-8s %5zu", s.scenario.c_str(), r.scorer.c_str(),
                    s.n_users);
      out += buf;
      for (double a : r.accuracies) {
        std::snprintf(buf, sizeof(buf), "  %5.1f%%", 100.0 * a);
        out += buf;
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace kdv
