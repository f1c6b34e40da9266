#include "kdv/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "kdv/error.hpp"
#include "kdv/ingest.hpp"

namespace kdv {

std::string_view to_string(FusionRule rule) {
  switch (rule) {
    case FusionRule::kMean: return "FMean";
    case FusionRule::kMedian: return "FMedian";
    case FusionRule::kMin: return "FMin";
    case FusionRule::kMax: return "FMax";
  }
  return "F?";
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> roster, std::string scorer, std::string scenario)
    : roster_(std::move(roster)),
      values_(roster_.size() * roster_.size(), 0.0),
      scorer_(std::move(scorer)),
      scenario_(std::move(scenario)) {}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<PreparedProfile> prepare_profiles(const ProfileMap& profiles, unsigned jobs) {
  std::vector<const Profile*> ordered;
  ordered.reserve(profiles.size());
  for (const auto& [_, p] : profiles) ordered.push_back(&p);
  std::vector<PreparedProfile> out(ordered.size());
  parallel_for(ordered.size(), jobs, [&](std::size_t i) { out[i] = PreparedProfile(*ordered[i]); });
  return out;
}

ScoreMatrix build_score_matrix(const std::vector<std::string>& roster,
                               std::span<const PreparedProfile> enroll,
                               std::span<const PreparedProfile> probe, Verifier verifier,
                               const VerifierConfig& config, unsigned jobs) {
  if (enroll.size() != roster.size() || probe.size() != roster.size()) {
    throw Error(ErrorCode::kRosterMismatch, "profile count differs from roster size");
  }
  ScoreMatrix m(roster, std::string(to_string(verifier)));
  const std::size_t n = roster.size();
  parallel_for(n * n, jobs, [&](std::size_t cell) {
    const std::size_t i = cell / n;
    const std::size_t j = cell % n;
    m.at(i, j) = score(verifier, enroll[j], probe[i], config).value;
  });
  return m;
}

ScoreMatrix build_score_matrix(const ProfileMap& enroll, const ProfileMap& probe,
                               Verifier verifier, const VerifierConfig& config, unsigned jobs) {
  std::vector<std::string> roster;
  roster.reserve(enroll.size());
  for (const auto& [user, _] : enroll) roster.push_back(user);
  const bool same_users =
      enroll.size() == probe.size() &&
      std::equal(enroll.begin(), enroll.end(), probe.begin(),
                 [](const auto& a, const auto& b) { return a.first == b.first; });
  if (!same_users) throw Error(ErrorCode::kRosterMismatch, "enroll and probe users differ");

  const auto prepared_enroll = prepare_profiles(enroll, jobs);
  const auto prepared_probe = prepare_profiles(probe, jobs);
  return build_score_matrix(roster, prepared_enroll, prepared_probe, verifier, config, jobs);
}

ScoreMatrix fuse(std::span<const ScoreMatrix> matrices, FusionRule rule) {
  if (matrices.size() < 2) {
    throw Error(ErrorCode::kShapeMismatch, "fusion needs at least two matrices");
  }
  const ScoreMatrix& first = matrices.front();
  for (const auto& m : matrices) {
    if (m.size() != first.size()) throw Error(ErrorCode::kShapeMismatch, "matrix sizes differ");
    if (m.roster() != first.roster()) throw Error(ErrorCode::kRosterMismatch, "rosters differ");
  }

  ScoreMatrix out(first.roster(), std::string(to_string(rule)), first.scenario());
  const std::size_t k = matrices.size();
  std::vector<double> cell(k);
  for (std::size_t idx = 0; idx < first.values().size(); ++idx) {
    for (std::size_t m = 0; m < k; ++m) cell[m] = matrices[m].values()[idx];
    // Sorting first makes every rule independent of the input order.
    std::sort(cell.begin(), cell.end());
    double v = 0.0;
    switch (rule) {
      case FusionRule::kMean:
        for (double c : cell) v += c;
        v /= static_cast<double>(k);
        break;
      case FusionRule::kMedian:
        v = k % 2 == 1 ? cell[k / 2] : (cell[k / 2 - 1] + cell[k / 2]) / 2.0;
        break;
      case FusionRule::kMin: v = cell.front(); break;
      case FusionRule::kMax: v = cell.back(); break;
    }
    out.at(idx / first.size(), idx % first.size()) = v;
  }
  return out;
}

std::string matrix_to_csv(const ScoreMatrix& m) {
  std::string out = "probe";
  for (const auto& u : m.roster()) out += "," + u;
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.roster()[i];
    for (double v : m.row(i)) out += "," + format_ms(v);
    out += '\n';
  }
  return out;
}

std::string matrix_to_json(const ScoreMatrix& m, int indent) {
  nlohmann::ordered_json doc;
  doc["scorer"] = m.scorer();
  doc["scenario"] = m.scenario();
  doc["rows"] = "probe";
  doc["columns"] = "enroll";
  doc["roster"] = m.roster();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  doc["values"] = std::move(rows);
  return doc.dump(indent);
}

}  // namespace kdv
