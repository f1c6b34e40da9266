#include "kdv/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "kdv/error.hpp"

namespace kdv {
namespace {

std::set<int> session_range(int first, int last) {
  std::set<int> out;
  for (int s = first; s <= last; ++s) out.insert(s);
  return out;
}

void check_sessions(int sessions_per_platform) {
  if (sessions_per_platform < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two sessions per platform");
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kSamePlatform: return "same";
    case ScenarioKind::kCrossPlatform: return "cross";
    case ScenarioKind::kCombinedCross: return "combined";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  const std::string t = lower(text);
  if (t == "same") return ScenarioKind::kSamePlatform;
  if (t == "cross") return ScenarioKind::kCrossPlatform;
  if (t == "combined") return ScenarioKind::kCombinedCross;
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario kind '" + std::string(text) + "'");
}

Scenario same_platform_scenario(const std::string& platform, int sessions_per_platform) {
  check_sessions(sessions_per_platform);
  const int half = sessions_per_platform / 2;
  return Scenario{platform,
                  ScenarioKind::kSamePlatform,
                  {{platform}, session_range(1, half)},
                  {{platform}, session_range(half + 1, sessions_per_platform)}};
}

Scenario cross_platform_scenario(const std::string& train, const std::string& test,
                                 int sessions_per_platform) {
  check_sessions(sessions_per_platform);
  if (train == test) throw Error(ErrorCode::kSamePlatform, train + "-" + test);
  const auto all = session_range(1, sessions_per_platform);
  return Scenario{train + "-" + test, ScenarioKind::kCrossPlatform, {{train}, all}, {{test}, all}};
}

Scenario combined_cross_scenario(const std::vector<std::string>& train, const std::string& test,
                                 int sessions_per_platform) {
  check_sessions(sessions_per_platform);
  if (std::find(train.begin(), train.end(), test) != train.end()) {
    throw Error(ErrorCode::kOverlappingPlatforms, "test platform " + test + " is also trained on");
  }
  std::vector<std::string> sorted = train;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() != 2 || sorted[0] == sorted[1]) {
    throw Error(ErrorCode::kInvalidArgument, "combined-cross needs two distinct train platforms");
  }
  const auto all = session_range(1, sessions_per_platform);
  return Scenario{sorted[0] + sorted[1] + "-" + test,
                  ScenarioKind::kCombinedCross,
                  {sorted, all},
                  {{test}, all}};
}

std::vector<Scenario> enumerate_scenarios(const std::set<std::string>& platforms,
                                          const std::set<ScenarioKind>& kinds,
                                          int sessions_per_platform) {
  const std::vector<std::string> ps(platforms.begin(), platforms.end());
  std::vector<Scenario> out;
  if (kinds.contains(ScenarioKind::kSamePlatform)) {
    for (const auto& p : ps) out.push_back(same_platform_scenario(p, sessions_per_platform));
  }
  if (kinds.contains(ScenarioKind::kCrossPlatform)) {
    for (const auto& a : ps) {
      for (const auto& b : ps) {
        if (a != b) out.push_back(cross_platform_scenario(a, b, sessions_per_platform));
      }
    }
  }
  if (kinds.contains(ScenarioKind::kCombinedCross)) {
    for (const auto& test : ps) {
      for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
          if (ps[i] == test || ps[j] == test) continue;
          out.push_back(combined_cross_scenario({ps[i], ps[j]}, test, sessions_per_platform));
        }
      }
    }
  }
  return out;
}

SessionFeatureStore::SessionFeatureStore(const Corpus& corpus, FeatureKinds kinds, unsigned jobs) {
  std::vector<const SessionLog*> logs;
  logs.reserve(corpus.size());
  for (const auto& [_, log] : corpus.logs()) logs.push_back(&log);
  std::vector<FeatureDictionary> dicts(logs.size());
  parallel_for(logs.size(), jobs, [&](std::size_t i) { dicts[i] = extract_session(*logs[i], kinds); });
  for (std::size_t i = 0; i < logs.size(); ++i) dicts_.emplace(logs[i]->key(), std::move(dicts[i]));
}

SessionFeatureStore::SessionFeatureStore(std::vector<FeatureDictionary> sessions) {
  for (auto& d : sessions) {
    const Provenance& p = d.provenance();
    if (p.platforms.size() != 1 || p.sessions.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "profile for '" + p.user_id + "' spans more than one session");
    }
    SessionKey key{p.user_id, *p.platforms.begin(), *p.sessions.begin()};
    if (dicts_.contains(key)) throw Error(ErrorCode::kDuplicateSession, to_string(key));
    dicts_.emplace(std::move(key), std::move(d));
  }
}

std::set<std::string> SessionFeatureStore::platforms() const {
  std::set<std::string> out;
  for (const auto& [key, _] : dicts_) out.insert(key.platform);
  return out;
}

const FeatureDictionary* SessionFeatureStore::find(const SessionKey& key) const {
  const auto it = dicts_.find(key);
  return it == dicts_.end() ? nullptr : &it->second;
}

std::vector<std::string> SessionFeatureStore::roster() const {
  std::set<std::string> users;
  for (const auto& [key, _] : dicts_) users.insert(key.user_id);
  return {users.begin(), users.end()};
}

namespace {

// Merged profile for one side, or nullopt if any required session is missing.
std::optional<Profile> assemble(const SessionFeatureStore& store, const std::string& user,
                                const ProfileSpec& spec) {
  std::vector<FeatureDictionary> parts;
  for (const auto& platform : spec.platforms) {
    for (int session : spec.sessions) {
      const FeatureDictionary* d = store.find({user, platform, session});
      if (d == nullptr) return std::nullopt;
      parts.push_back(*d);
    }
  }
  return merge(parts);
}

}  // namespace

ScenarioData build_scenario(const SessionFeatureStore& store, const Scenario& scenario) {
  ScenarioData data{scenario, {}, {}, {}};
  for (const auto& user : store.roster()) {
    auto enroll = assemble(store, user, scenario.enroll);
    auto probe = enroll ? assemble(store, user, scenario.probe) : std::nullopt;
    if (!enroll || !probe) {
      data.excluded_users.push_back(user);
      continue;
    }
    data.enroll.emplace(user, std::move(*enroll));
    data.probe.emplace(user, std::move(*probe));
  }
  if (data.enroll.empty()) {
    throw Error(ErrorCode::kNoEligibleUsers, "scenario " + scenario.name);
  }
  return data;
}

ScenarioData split_same_platform(const Corpus& corpus, const std::string& platform) {
  return build_scenario(SessionFeatureStore(corpus), same_platform_scenario(platform));
}

ScenarioData build_cross_platform(const Corpus& corpus, const std::string& train,
                                  const std::string& test) {
  const Scenario scenario = cross_platform_scenario(train, test);
  return build_scenario(SessionFeatureStore(corpus), scenario);
}

ScenarioData build_combined_cross(const Corpus& corpus, const std::vector<std::string>& train,
                                  const std::string& test) {
  const Scenario scenario = combined_cross_scenario(train, test);
  return build_scenario(SessionFeatureStore(corpus), scenario);
}

double k_rank_accuracy(const ScoreMatrix& m, int k) {
  const std::size_t n = m.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error(ErrorCode::kKOutOfRange,
                "k=" + std::to_string(k) + " with n=" + std::to_string(n));
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    const double genuine = row[i];
    // Columns ranked ahead of the genuine one: higher score, or equal score
    // with a smaller roster index.
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] > genuine || (row[j] == genuine && j < i)) ++ahead;
    }
    if (ahead < static_cast<std::size_t>(k)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

std::string_view to_string(Scorer scorer) {
  switch (scorer) {
    case Scorer::kSimilarity: return "SIM";
    case Scorer::kAbsolute: return "ABS";
    case Scorer::kItad: return "ITAD";
    case Scorer::kFusionMean: return "FMean";
    case Scorer::kFusionMedian: return "FMedian";
    case Scorer::kFusionMin: return "FMin";
    case Scorer::kFusionMax: return "FMax";
  }
  return "?";
}

Scorer parse_scorer(std::string_view text) {
  const std::string t = lower(text);
  for (Scorer s : all_scorers()) {
    if (lower(to_string(s)) == t) return s;
  }
  if (t == "similarity") return Scorer::kSimilarity;
  if (t == "absolute") return Scorer::kAbsolute;
  throw Error(ErrorCode::kInvalidArgument, "unknown scorer '" + std::string(text) + "'");
}

const std::vector<Scorer>& all_scorers() {
  static const std::vector<Scorer> scorers = {
      Scorer::kSimilarity,   Scorer::kAbsolute,  Scorer::kItad,     Scorer::kFusionMean,
      Scorer::kFusionMedian, Scorer::kFusionMin, Scorer::kFusionMax};
  return scorers;
}

DatasetSummary summarize(const Corpus& corpus) {
  DatasetSummary s;
  std::map<std::string, std::set<std::string>> users_per_platform;
  for (const auto& [key, log] : corpus.logs()) {
    const std::size_t keystrokes = pair_events(log).pairs.size();
    PlatformSummary& p = s.platforms[key.platform];
    ++p.sessions;
    p.events += log.events.size();
    p.keystrokes += keystrokes;
    users_per_platform[key.platform].insert(key.user_id);
    ++s.sessions;
    s.events += log.events.size();
    s.keystrokes += keystrokes;
  }
  for (auto& [platform, p] : s.platforms) p.users = users_per_platform[platform].size();
  s.users = corpus.roster().size();
  return s;
}

const ScenarioResult* EvaluationReport::find(std::string_view scenario) const {
  for (const auto& s : scenarios) {
    if (s.scenario == scenario) return &s;
  }
  return nullptr;
}

const ScorerResult* EvaluationReport::find(std::string_view scenario,
                                           std::string_view scorer) const {
  const ScenarioResult* s = find(scenario);
  if (s == nullptr) return nullptr;
  for (const auto& r : s->scorers) {
    if (r.scorer == scorer) return &r;
  }
  return nullptr;
}

std::vector<ScoreMatrix> score_scenario(const ScenarioData& data, const BenchmarkConfig& config) {
  std::vector<std::string> roster;
  for (const auto& [user, _] : data.enroll) roster.push_back(user);
  const auto enroll = prepare_profiles(data.enroll, config.jobs);
  const auto probe = prepare_profiles(data.probe, config.jobs);

  const auto wants = [&](Scorer s) {
    return std::find(config.scorers.begin(), config.scorers.end(), s) != config.scorers.end();
  };
  const bool any_fusion = wants(Scorer::kFusionMean) || wants(Scorer::kFusionMedian) ||
                          wants(Scorer::kFusionMin) || wants(Scorer::kFusionMax);

  // Fusion always combines the full (ABS, SIM, ITAD) triple.
  std::vector<ScoreMatrix> base;
  std::vector<ScoreMatrix> out;
  const std::pair<Scorer, Verifier> verifiers[] = {{Scorer::kAbsolute, Verifier::kAbsolute},
                                                   {Scorer::kSimilarity, Verifier::kSimilarity},
                                                   {Scorer::kItad, Verifier::kItad}};
  for (const auto& [scorer, verifier] : verifiers) {
    if (!wants(scorer) && !any_fusion) continue;
    ScoreMatrix m = build_score_matrix(roster, enroll, probe, verifier, config.verifier, config.jobs);
    m.set_scenario(data.scenario.name);
    if (any_fusion) base.push_back(m);
    if (wants(scorer)) out.push_back(std::move(m));
  }
  const std::pair<Scorer, FusionRule> rules[] = {{Scorer::kFusionMean, FusionRule::kMean},
                                                 {Scorer::kFusionMedian, FusionRule::kMedian},
                                                 {Scorer::kFusionMin, FusionRule::kMin},
                                                 {Scorer::kFusionMax, FusionRule::kMax}};
  for (const auto& [scorer, rule] : rules) {
    if (wants(scorer)) out.push_back(fuse(base, rule));
  }
  return out;
}

EvaluationReport run_benchmark(const Corpus& corpus, const BenchmarkConfig& config) {
  if (corpus.empty()) throw Error(ErrorCode::kNoEligibleUsers, "corpus is empty");
  const SessionFeatureStore store(corpus, config.feature_kinds, config.jobs);
  return run_benchmark(store, summarize(corpus), config);
}

EvaluationReport run_benchmark(const SessionFeatureStore& store, const DatasetSummary& dataset,
                               const BenchmarkConfig& config) {
  if (config.k_max < 1) throw Error(ErrorCode::kKOutOfRange, "k_max must be >= 1");
  if (config.scorers.empty()) throw Error(ErrorCode::kInvalidArgument, "no scorers selected");
  if (config.scenario_kinds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no scenarios selected");
  }
  if (store.size() == 0) throw Error(ErrorCode::kNoEligibleUsers, "no sessions");

  EvaluationReport report;
  report.dataset = dataset;
  report.similarity_mode = std::string(to_string(config.verifier.similarity_mode));
  report.absolute_threshold = config.verifier.absolute_threshold;
  report.feature_kinds = to_string(config.feature_kinds);
  report.k_max = config.k_max;

  const std::set<std::string> platforms =
      config.platforms.empty() ? store.platforms() : config.platforms;

  for (const Scenario& scenario :
       enumerate_scenarios(platforms, config.scenario_kinds, config.sessions_per_platform)) {
    ScenarioData data = build_scenario(store, scenario);
    if (config.feature_kinds != FeatureKinds::kAll) {
      for (auto* side : {&data.enroll, &data.probe}) {
        for (auto& [_, profile] : *side) profile = profile.restricted_to(config.feature_kinds);
      }
    }
    ScenarioResult result;
    result.scenario = scenario.name;
    result.kind = scenario.kind;
    result.n_users = data.enroll.size();
    result.excluded_users = data.excluded_users;
    const int k_top = std::min<int>(config.k_max, static_cast<int>(result.n_users));
    for (const ScoreMatrix& m : score_scenario(data, config)) {
      ScorerResult r{m.scorer(), {}};
      for (int k = 1; k <= k_top; ++k) r.accuracies.push_back(k_rank_accuracy(m, k));
      result.scorers.push_back(std::move(r));
    }
    std::sort(result.scorers.begin(), result.scorers.end(),
              [](const ScorerResult& a, const ScorerResult& b) { return a.scorer < b.scorer; });
    report.scenarios.push_back(std::move(result));
  }
  std::sort(report.scenarios.begin(), report.scenarios.end(),
            [](const ScenarioResult& a, const ScenarioResult& b) { return a.scenario < b.scenario; });
  return report;
}

}  // namespace kdv
