#pragma once

// n x n score matrices over a user roster. Rows index probe users, columns
// index enrollment users, both in roster order.

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdv/verifiers.hpp"

namespace kdv {

enum class FusionRule { kMean, kMedian, kMin, kMax };

std::string_view to_string(FusionRule rule);  // "FMean", "FMedian", ...

class ScoreMatrix {
 public:
  ScoreMatrix() = default;
  ScoreMatrix(std::vector<std::string> roster, std::string scorer, std::string scenario = {});

  std::size_t size() const { return roster_.size(); }
  const std::vector<std::string>& roster() const { return roster_; }

  double& at(std::size_t probe, std::size_t enroll) { return values_[probe * size() + enroll]; }
  double at(std::size_t probe, std::size_t enroll) const { return values_[probe * size() + enroll]; }
  std::span<const double> row(std::size_t probe) const {
    return std::span<const double>(values_).subspan(probe * size(), size());
  }
  const std::vector<double>& values() const { return values_; }

  const std::string& scorer() const { return scorer_; }
  const std::string& scenario() const { return scenario_; }
  void set_scenario(std::string scenario) { scenario_ = std::move(scenario); }

  bool operator==(const ScoreMatrix&) const = default;

 private:
  std::vector<std::string> roster_;
  std::vector<double> values_;
  std::string scorer_;
  std::string scenario_;
};

using ProfileMap = std::map<std::string, Profile>;

// Profiles prepared once, in roster order.
std::vector<PreparedProfile> prepare_profiles(const ProfileMap& profiles, unsigned jobs = 1);

// values[i][j] = verifier(enroll[roster[j]], probe[roster[i]]). Cells are
// computed on `jobs` threads; the result does not depend on `jobs`.
// Throws ROSTER_MISMATCH when the two maps cover different users.
ScoreMatrix build_score_matrix(const ProfileMap& enroll, const ProfileMap& probe,
                               Verifier verifier, const VerifierConfig& config = {},
                               unsigned jobs = 1);

ScoreMatrix build_score_matrix(const std::vector<std::string>& roster,
                               std::span<const PreparedProfile> enroll,
                               std::span<const PreparedProfile> probe, Verifier verifier,
                               const VerifierConfig& config = {}, unsigned jobs = 1);

// Element-wise combination of at least two matrices with identical rosters.
ScoreMatrix fuse(std::span<const ScoreMatrix> matrices, FusionRule rule);

// Header row "probe,<roster...>", then one row per probe user.
std::string matrix_to_csv(const ScoreMatrix& m);
std::string matrix_to_json(const ScoreMatrix& m, int indent = -1);

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace kdv
