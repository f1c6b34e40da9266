#pragma once

// Evaluation protocols (same-platform session split, cross-platform,
// combined-cross-platform), rank-k identification accuracy and the
// benchmark driver that runs every scenario against every scorer.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kdv/features.hpp"
#include "kdv/ingest.hpp"
#include "kdv/matrix.hpp"
#include "kdv/verifiers.hpp"

namespace kdv {

enum class ScenarioKind { kSamePlatform, kCrossPlatform, kCombinedCross };

std::string_view to_string(ScenarioKind kind);  // "same", "cross", "combined"
ScenarioKind parse_scenario_kind(std::string_view text);

// Which sessions of which platforms are merged into one side of a comparison.
struct ProfileSpec {
  std::vector<std::string> platforms;
  std::set<int> sessions;
};

struct Scenario {
  std::string name;  // "F", "F-T", "FI-T"
  ScenarioKind kind = ScenarioKind::kSamePlatform;
  ProfileSpec enroll;
  ProfileSpec probe;
};

inline constexpr int kSessionsPerPlatform = 6;

// Enrollment from the first half of the sessions, probe from the second half.
Scenario same_platform_scenario(const std::string& platform,
                                int sessions_per_platform = kSessionsPerPlatform);
// Throws SAME_PLATFORM when train == test.
Scenario cross_platform_scenario(const std::string& train, const std::string& test,
                                 int sessions_per_platform = kSessionsPerPlatform);
// Throws OVERLAPPING_PLATFORMS when test is one of the train platforms, and
// INVALID_ARGUMENT unless train holds two distinct platforms.
Scenario combined_cross_scenario(const std::vector<std::string>& train, const std::string& test,
                                 int sessions_per_platform = kSessionsPerPlatform);

// 1 same-platform scenario per platform, every ordered pair for cross and
// every (unordered pair, remaining platform) for combined-cross.
std::vector<Scenario> enumerate_scenarios(const std::set<std::string>& platforms,
                                          const std::set<ScenarioKind>& kinds,
                                          int sessions_per_platform = kSessionsPerPlatform);

// Per-session feature dictionaries, extracted once and shared by all scenarios.
class SessionFeatureStore {
 public:
  SessionFeatureStore(const Corpus& corpus, FeatureKinds kinds = FeatureKinds::kAll,
                      unsigned jobs = 1);
  // From per-session dictionaries (e.g. loaded profile documents). Each must
  // name exactly one platform and one session; throws INVALID_ARGUMENT
  // otherwise and DUPLICATE_SESSION on repeats.
  explicit SessionFeatureStore(std::vector<FeatureDictionary> sessions);

  std::set<std::string> platforms() const;
  std::size_t size() const { return dicts_.size(); }

  const FeatureDictionary* find(const SessionKey& key) const;
  std::vector<std::string> roster() const;

 private:
  std::map<SessionKey, FeatureDictionary> dicts_;
};

struct ScenarioData {
  Scenario scenario;
  ProfileMap enroll;
  ProfileMap probe;
  std::vector<std::string> excluded_users;  // missing at least one required session
};

// Users lacking any required session are excluded. Throws NO_ELIGIBLE_USERS
// when nobody remains.
ScenarioData build_scenario(const SessionFeatureStore& store, const Scenario& scenario);

ScenarioData split_same_platform(const Corpus& corpus, const std::string& platform);
ScenarioData build_cross_platform(const Corpus& corpus, const std::string& train,
                                  const std::string& test);
ScenarioData build_combined_cross(const Corpus& corpus, const std::vector<std::string>& train,
                                  const std::string& test);

// Fraction of probe rows whose genuine column is among the k best. Ties are
// broken by ascending roster index. Throws K_OUT_OF_RANGE unless 1 <= k <= n.
double k_rank_accuracy(const ScoreMatrix& m, int k);

enum class Scorer { kSimilarity, kAbsolute, kItad, kFusionMean, kFusionMedian, kFusionMin, kFusionMax };

std::string_view to_string(Scorer scorer);  // SIM, ABS, ITAD, FMean, FMedian, FMin, FMax
Scorer parse_scorer(std::string_view text);  // case-insensitive
const std::vector<Scorer>& all_scorers();

struct BenchmarkConfig {
  VerifierConfig verifier;
  FeatureKinds feature_kinds = FeatureKinds::kAll;
  std::vector<Scorer> scorers = all_scorers();
  std::set<ScenarioKind> scenario_kinds = {ScenarioKind::kSamePlatform,
                                           ScenarioKind::kCrossPlatform,
                                           ScenarioKind::kCombinedCross};
  // Empty: every platform present in the corpus.
  std::set<std::string> platforms;
  int sessions_per_platform = kSessionsPerPlatform;
  int k_max = 5;
  unsigned jobs = 1;
};

struct ScorerResult {
  std::string scorer;
  std::vector<double> accuracies;  // index k-1
};

struct ScenarioResult {
  std::string scenario;
  ScenarioKind kind = ScenarioKind::kSamePlatform;
  std::size_t n_users = 0;
  std::vector<std::string> excluded_users;
  std::vector<ScorerResult> scorers;  // sorted by name
};

struct PlatformSummary {
  std::size_t users = 0;
  std::size_t sessions = 0;
  std::size_t events = 0;
  std::size_t keystrokes = 0;  // paired press/release
};

struct DatasetSummary {
  std::size_t users = 0;
  std::size_t sessions = 0;
  std::size_t events = 0;
  std::size_t keystrokes = 0;
  std::map<std::string, PlatformSummary> platforms;
};

DatasetSummary summarize(const Corpus& corpus);

struct EvaluationReport {
  DatasetSummary dataset;
  std::string similarity_mode;
  double absolute_threshold = kDefaultAbsoluteThreshold;
  std::string feature_kinds;
  int k_max = 5;
  std::vector<ScenarioResult> scenarios;  // sorted by name

  const ScenarioResult* find(std::string_view scenario) const;
  // nullptr if absent.
  const ScorerResult* find(std::string_view scenario, std::string_view scorer) const;
};

// Per-scenario verifier and fusion matrices for the configured scorers.
std::vector<ScoreMatrix> score_scenario(const ScenarioData& data, const BenchmarkConfig& config);

EvaluationReport run_benchmark(const Corpus& corpus, const BenchmarkConfig& config);
// Runs on already-extracted sessions; config.feature_kinds filters them.
EvaluationReport run_benchmark(const SessionFeatureStore& store, const DatasetSummary& dataset,
                               const BenchmarkConfig& config);

}  // namespace kdv
