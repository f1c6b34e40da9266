// kdv: keystroke-dynamics profile linking from the command line.
//
//   kdv extract  <logs...> --out-dir profiles/
//   kdv score    <logs...> --scenario F-T --scorer FMean --out matrix.csv
//   kdv evaluate <logs...> --out-dir report/
//   kdv synth    --users 26 --separation 2 --out-dir corpus/
//   kdv report   report/report.json
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kdv/error.hpp"
#include "kdv/evaluation.hpp"
#include "kdv/features.hpp"
#include "kdv/ingest.hpp"
#include "kdv/matrix.hpp"
#include "kdv/profile_io.hpp"
#include "kdv/report.hpp"
#include "kdv/synth.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kdv::Error(kdv::ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kdv::Error(kdv::ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Options shared by score and evaluate.
struct ScoringOptions {
  std::string similarity_mode = "as-published";
  double threshold = kdv::kDefaultAbsoluteThreshold;
  std::string features = "all";
  bool strict = false;

  kdv::VerifierConfig verifier() const {
    if (!(threshold > 1.0)) throw UsageError("--threshold must exceed 1");
    return {kdv::parse_similarity_mode(similarity_mode), threshold};
  }
};

void add_scoring_options(CLI::App* cmd, ScoringOptions& o) {
  cmd->add_option("--similarity-mode", o.similarity_mode,
                  "Similarity verifier counting rule: as-published | corrected")
      ->capture_default_str();
  cmd->add_option("--threshold", o.threshold, "Absolute verifier ratio threshold (> 1)")
      ->capture_default_str();
  cmd->add_option("--features", o.features,
                  "Feature kinds to score: all, or a list of unigraph,digraph,word")
      ->capture_default_str();
  cmd->add_flag("--strict", o.strict, "Fail on the first malformed log row");
}

bool has_extension(const fs::path& p, const char* ext) { return p.extension() == ext; }

// Raw logs (*.csv) or extracted per-session profiles (*.json), never both.
struct LoadedInput {
  std::optional<kdv::Corpus> corpus;
  std::vector<kdv::FeatureDictionary> profiles;
};

LoadedInput load_inputs(const std::vector<std::string>& inputs, bool strict) {
  std::vector<fs::path> json_files;
  std::vector<fs::path> log_paths;
  for (const auto& in : inputs) {
    const fs::path p(in);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      bool any_json = false;
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && has_extension(entry.path(), ".json")) {
          found.push_back(entry.path());
          any_json = true;
        }
      }
      if (any_json) {
        std::sort(found.begin(), found.end());
        json_files.insert(json_files.end(), found.begin(), found.end());
      } else {
        log_paths.push_back(p);
      }
    } else if (fs::is_regular_file(p, ec)) {
      (has_extension(p, ".json") ? json_files : log_paths).push_back(p);
    } else {
      throw kdv::Error(kdv::ErrorCode::kIo, "cannot read '" + in + "'");
    }
  }
  if (!json_files.empty() && !log_paths.empty()) {
    throw UsageError("inputs mix raw logs and profile documents");
  }

  LoadedInput loaded;
  if (!json_files.empty()) {
    for (const auto& f : json_files) {
      try {
        loaded.profiles.push_back(kdv::profile_from_json(read_file(f)));
      } catch (const kdv::Error& e) {
        throw kdv::Error(e.code(), f.string() + ": " + e.what());
      }
    }
    return loaded;
  }
  auto result = kdv::load_corpus(log_paths, kdv::ParseOptions{strict});
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  loaded.corpus = std::move(result.corpus);
  return loaded;
}

kdv::SessionFeatureStore make_store(LoadedInput& input, kdv::FeatureKinds kinds, unsigned jobs) {
  if (input.corpus) return kdv::SessionFeatureStore(*input.corpus, kinds, jobs);
  return kdv::SessionFeatureStore(std::move(input.profiles));
}

kdv::DatasetSummary summary_of(const LoadedInput& input) {
  if (input.corpus) return kdv::summarize(*input.corpus);
  kdv::DatasetSummary s;
  std::set<std::string> users;
  for (const auto& p : input.profiles) {
    users.insert(p.provenance().user_id);
    ++s.sessions;
  }
  s.users = users.size();
  return s;
}

// "F" -> same-platform, "F-T" -> cross, "FI-T" or "F+I-T" -> combined.
kdv::Scenario parse_scenario_name(const std::string& name) {
  const auto dash = name.find('-');
  if (dash == std::string::npos) return kdv::same_platform_scenario(name);
  const std::string train = name.substr(0, dash);
  const std::string test = name.substr(dash + 1);
  if (train.find('+') != std::string::npos) {
    return kdv::combined_cross_scenario(split_list(train, '+'), test);
  }
  if (train.size() == 2) {
    return kdv::combined_cross_scenario({train.substr(0, 1), train.substr(1, 1)}, test);
  }
  return kdv::cross_platform_scenario(train, test);
}

void print_summary(const kdv::DatasetSummary& s) {
  std::printf("users: %zu  sessions: %zu  events: %zu  keystrokes: %zu\n", s.users, s.sessions,
              s.events, s.keystrokes);
  for (const auto& [platform, p] : s.platforms) {
    std::printf("  %-4s users: %3zu  sessions: %4zu  keystrokes: %7zu  (%.1f per session)\n",
                platform.c_str(), p.users, p.sessions, p.keystrokes,
                p.sessions ? static_cast<double>(p.keystrokes) / static_cast<double>(p.sessions)
                           : 0.0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keystroke-dynamics verification: link posting histories to the same typist"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML-style key = value file supplying option defaults");
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  app.add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Random seed (synth)")->capture_default_str();

  // extract
  auto* extract = app.add_subcommand("extract", "Extract per-session feature profiles from logs");
  std::vector<std::string> extract_inputs;
  std::string extract_out;
  std::string extract_features = "all";
  bool extract_strict = false;
  extract->add_option("inputs", extract_inputs, "Log files or directories")->required();
  extract->add_option("-o,--out-dir", extract_out, "Directory for profile JSON documents")->required();
  extract->add_option("--features", extract_features, "Feature kinds")->capture_default_str();
  extract->add_flag("--strict", extract_strict, "Fail on the first malformed log row");

  // score
  auto* score = app.add_subcommand("score", "Build one score matrix for a scenario");
  std::vector<std::string> score_inputs;
  std::string score_scenario = "F";
  std::string score_scorer = "FMean";
  std::string score_out;
  ScoringOptions score_opts;
  score->add_option("inputs", score_inputs, "Log files, profile documents or directories")->required();
  score->add_option("--scenario", score_scenario, "F | F-T | FI-T")->capture_default_str();
  score->add_option("--scorer", score_scorer, "SIM | ABS | ITAD | FMean | FMedian | FMin | FMax")
      ->capture_default_str();
  score->add_option("-o,--out", score_out, "Output matrix (.csv or .json); stdout if omitted");
  add_scoring_options(score, score_opts);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Run every scenario and report k-rank accuracy");
  std::vector<std::string> eval_inputs;
  std::string eval_out = "report";
  std::string eval_scorers = "all";
  std::string eval_scenarios = "same,cross,combined";
  std::string eval_platforms;
  std::string eval_formats = "json,csv";
  int k_max = 5;
  ScoringOptions eval_opts;
  evaluate->add_option("inputs", eval_inputs, "Log files, profile documents or directories")
      ->required();
  evaluate->add_option("-o,--out-dir", eval_out, "Report directory")->capture_default_str();
  evaluate->add_option("--scorers", eval_scorers, "all, or a list of SIM,ABS,ITAD,FMean,...")
      ->capture_default_str();
  evaluate->add_option("--scenarios", eval_scenarios, "List of same,cross,combined")
      ->capture_default_str();
  evaluate->add_option("--platforms", eval_platforms, "Restrict to these platforms (default: all)");
  evaluate->add_option("--k-max", k_max, "Largest rank k")->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_option("--formats", eval_formats, "Report formats: json,csv")->capture_default_str();
  add_scoring_options(evaluate, eval_opts);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic typist corpus");
  kdv::SynthSpec spec;
  std::string synth_out;
  std::string synth_platforms = "F,I,T";
  synth->add_option("--users", spec.n_users, "Number of users")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--separation", spec.separation, "Inter-user parameter spread (>= 0)")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  synth->add_option("--sessions", spec.sessions, "Sessions per platform")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--platforms", synth_platforms, "Platform labels")->capture_default_str();
  synth->add_option("-o,--out-dir", synth_out, "Directory for one CSV log per user")->required();

  // report
  auto* report = app.add_subcommand("report", "Print a stored evaluation report");
  std::string report_in;
  std::string report_format = "table";
  report->add_option("report", report_in, "report.json written by evaluate")->required();
  report->add_option("--format", report_format, "table | csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*extract) {
      const auto kinds = kdv::parse_feature_kinds(extract_features);
      auto input = load_inputs(extract_inputs, extract_strict);
      if (!input.corpus) throw UsageError("extract needs raw logs");
      const kdv::Corpus& corpus = *input.corpus;
      fs::create_directories(extract_out);
      for (const auto& [key, log] : corpus.logs()) {
        const auto dict = kdv::extract_session(log, kinds);
        write_file(fs::path(extract_out) /
                       (key.user_id + "_" + key.platform + "_" + std::to_string(key.session_id) + ".json"),
                   kdv::profile_to_json(dict) + "\n");
      }
      print_summary(kdv::summarize(corpus));
      std::printf("wrote %zu profiles to %s\n", corpus.size(), extract_out.c_str());
    } else if (*score) {
      const auto verifier = score_opts.verifier();
      const auto kinds = kdv::parse_feature_kinds(score_opts.features);
      auto input = load_inputs(score_inputs, score_opts.strict);
      const auto store = make_store(input, kinds, jobs);
      const kdv::Scenario scenario = parse_scenario_name(score_scenario);
      kdv::ScenarioData data = kdv::build_scenario(store, scenario);
      for (const auto& u : data.excluded_users) {
        std::cerr << "warning: " << u << " excluded from " << scenario.name << " (missing sessions)\n";
      }
      for (auto* side : {&data.enroll, &data.probe}) {
        for (auto& [_, p] : *side) p = p.restricted_to(kinds);
      }
      kdv::BenchmarkConfig cfg;
      cfg.verifier = verifier;
      cfg.scorers = {kdv::parse_scorer(score_scorer)};
      cfg.jobs = jobs;
      const kdv::ScoreMatrix m = kdv::score_scenario(data, cfg).front();
      const bool json = has_extension(score_out, ".json");
      const std::string text = json ? kdv::matrix_to_json(m, 2) + "\n" : kdv::matrix_to_csv(m);
      if (score_out.empty()) {
        std::cout << text;
      } else {
        write_file(score_out, text);
      }
    } else if (*evaluate) {
      kdv::BenchmarkConfig cfg;
      cfg.verifier = eval_opts.verifier();
      cfg.feature_kinds = kdv::parse_feature_kinds(eval_opts.features);
      cfg.k_max = k_max;
      cfg.jobs = jobs;
      if (eval_scorers != "all") {
        cfg.scorers.clear();
        for (const auto& s : split_list(eval_scorers)) cfg.scorers.push_back(kdv::parse_scorer(s));
      }
      cfg.scenario_kinds.clear();
      for (const auto& s : split_list(eval_scenarios)) {
        cfg.scenario_kinds.insert(kdv::parse_scenario_kind(s));
      }
      for (const auto& p : split_list(eval_platforms)) cfg.platforms.insert(kdv::canonical_platform(p));
      const auto formats = split_list(eval_formats);
      for (const auto& f : formats) {
        if (f != "json" && f != "csv") throw UsageError("unknown report format '" + f + "'");
      }

      auto input = load_inputs(eval_inputs, eval_opts.strict);
      const auto dataset = summary_of(input);
      const auto store = make_store(input, cfg.feature_kinds, jobs);
      const kdv::EvaluationReport rep = kdv::run_benchmark(store, dataset, cfg);
      for (const auto& s : rep.scenarios) {
        for (const auto& u : s.excluded_users) {
          std::cerr << "warning: " << u << " excluded from " << s.scenario << " (missing sessions)\n";
        }
      }
      fs::create_directories(eval_out);
      for (const auto& f : formats) {
        const fs::path path = fs::path(eval_out) / ("report." + f);
        write_file(path, f == "json" ? kdv::report_to_json(rep) : kdv::report_to_csv(rep));
        std::printf("wrote %s\n", path.string().c_str());
      }
      std::cout << kdv::render_table(rep);
    } else if (*synth) {
      spec.seed = seed;
      spec.jobs = jobs;
      spec.platforms.clear();
      for (const auto& p : split_list(synth_platforms)) spec.platforms.push_back(kdv::canonical_platform(p));
      const kdv::Corpus corpus = kdv::generate_corpus(spec);
      std::map<std::string, kdv::Corpus> per_user;
      for (const auto& [key, log] : corpus.logs()) per_user[key.user_id].add(log);
      for (const auto& [user, c] : per_user) {
        write_file(fs::path(synth_out) / (user + ".csv"), kdv::serialize(c));
      }
      std::printf("wrote %zu session logs for %zu users to %s\n", corpus.size(), per_user.size(),
                  synth_out.c_str());
    } else if (*report) {
      const auto rep = kdv::report_from_json(read_file(report_in));
      if (report_format == "csv") {
        std::cout << kdv::report_to_csv(rep);
      } else if (report_format == "table") {
        print_summary(rep.dataset);
        std::printf("similarity mode: %s  threshold: %g  features: %s\n\n",
                    rep.similarity_mode.c_str(), rep.absolute_threshold, rep.feature_kinds.c_str());
        std::cout << kdv::render_table(rep);
      } else {
        throw UsageError("unknown format '" + report_format + "'");
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const kdv::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == kdv::ErrorCode::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
