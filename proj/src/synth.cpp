#include "kdv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kdv/error.hpp"
#include "kdv/matrix.hpp"

namespace kdv {
namespace {

constexpr std::uint32_t kPopulationStream = 0x9e3779b9u;
constexpr std::uint32_t kModelStream = 1;
constexpr std::uint32_t kSessionStream = 2;

const std::vector<std::string>& base_vocabulary() {
  static const std::vector<std::string> words = {
      "the",   "and",    "to",     "of",    "a",      "i",      "it",     "is",    "that",
      "this",  "was",    "for",    "you",   "so",     "with",   "on",     "but",   "my",
      "me",    "they",   "be",     "have",  "not",    "are",    "just",   "what",  "like",
      "video", "really", "think",  "about", "people", "how",    "all",    "can",   "when",
      "more",  "one",    "funny",  "love",  "good",   "great",  "would",  "there", "very",
      "at",    "it's",   "if",     "do",    "did",    "get",    "know",   "time",  "make",
      "their", "out",    "we",     "he",    "she",    "him",    "his",    "her",   "them",
      "from",  "some",   "no",     "yes",   "wow",    "lol",    "cute",   "dog",   "cat",
      "food",  "watch",  "seen",   "new",   "best",   "ever",   "much",   "too",   "why",
      "who",   "could",  "never",  "always", "again", "made",   "other",  "well",  "only",
      "those", "thing",  "want",   "see",   "look",   "here",   "because", "also", "amazing",
      "world", "wish",   "day",    "life",  "happy",  "nice",   "agree",  "true",  "way",
  };
  return words;
}

const std::vector<std::string>& key_alphabet() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (char c = 'a'; c <= 'z'; ++c) k.emplace_back(1, c);
    k.emplace_back("'");
    k.emplace_back(".");
    k.emplace_back("COMMA");
    k.emplace_back("SPACE");
    return k;
  }();
  return keys;
}

std::vector<std::string> word_keys(const std::string& word) {
  std::vector<std::string> keys;
  for (char c : word) keys.emplace_back(1, c);
  return keys;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::initializer_list<std::uint32_t> stream) {
  std::vector<std::uint32_t> material = {static_cast<std::uint32_t>(seed),
                                         static_cast<std::uint32_t>(seed >> 32)};
  material.insert(material.end(), stream.begin(), stream.end());
  std::seed_seq seq(material.begin(), material.end());
  return std::mt19937_64(seq);
}

double default_verbosity(const std::string& platform) {
  if (platform == "F") return 420.0;
  if (platform == "I") return 260.0;
  if (platform == "T") return 200.0;
  return 250.0;
}

TypistModel population_model(const SynthSpec& spec) {
  auto rng = make_rng(spec.seed, {kPopulationStream});
  std::normal_distribution<double> z(0.0, 1.0);
  TypistModel m;
  for (const auto& k : key_alphabet()) {
    m.hold[k] = {std::log(95.0) + 0.12 * z(rng), 0.22};
  }
  for (const auto& a : key_alphabet()) {
    for (const auto& b : key_alphabet()) {
      m.flight[a + "|" + b] = {110.0 + 35.0 * z(rng), 45.0};
    }
  }
  m.vocabulary = base_vocabulary();
  // Zipf-like word frequencies.
  for (std::size_t i = 0; i < m.vocabulary.size(); ++i) {
    m.word_weights.push_back(1.0 / static_cast<double>(i + 1));
  }
  for (const auto& p : spec.platforms) m.verbosity[p] = default_verbosity(p);
  return m;
}

TypistModel personalize(const TypistModel& base, const SynthSpec& spec, int user) {
  auto rng = make_rng(spec.seed, {kModelStream, static_cast<std::uint32_t>(user)});
  std::normal_distribution<double> z(0.0, 1.0);
  const double s = spec.separation;

  TypistModel m = base;
  const double hold_shift = 0.20 * s * z(rng);
  const double hold_spread = std::exp(0.06 * s * z(rng));
  for (auto& [_, h] : m.hold) {
    h.location += hold_shift + 0.12 * s * z(rng);
    h.scale *= hold_spread;
  }
  const double speed = std::exp(0.25 * s * z(rng));
  const double flight_spread = std::exp(0.08 * s * z(rng));
  for (auto& [_, f] : m.flight) {
    f.mean = f.mean * speed + 25.0 * s * z(rng);
    f.std *= flight_spread * std::exp(0.04 * s * z(rng));
  }
  for (double& w : m.word_weights) w *= std::exp(0.5 * s * z(rng));
  for (auto& [_, v] : m.verbosity) v = std::max(1.0, v * std::exp(0.2 * s * z(rng)));
  return m;
}

double round_us(double ms) { return std::round(ms * 1000.0) / 1000.0; }

SessionLog generate_session(const TypistModel& model, const SynthSpec& spec, int user,
                            std::size_t platform_index, int session) {
  const std::string& platform = spec.platforms[platform_index];
  auto rng = make_rng(spec.seed, {kSessionStream, static_cast<std::uint32_t>(user),
                                  static_cast<std::uint32_t>(platform_index),
                                  static_cast<std::uint32_t>(session)});
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::discrete_distribution<std::size_t> pick_word(model.word_weights.begin(),
                                                    model.word_weights.end());

  // Later sessions produce somewhat fewer keystrokes.
  const double decline = 1.0 - 0.05 * static_cast<double>(session - 1);
  const double target = std::max(
      1.0, model.verbosity.at(platform) * std::max(0.5, decline) * (0.8 + 0.4 * unit(rng)));

  std::vector<std::string> keys;
  while (static_cast<double>(keys.size()) < target) {
    if (!keys.empty()) keys.emplace_back("SPACE");
    const auto w = word_keys(model.vocabulary[pick_word(rng)]);
    keys.insert(keys.end(), w.begin(), w.end());
    const double punct = unit(rng);
    if (punct < 0.06) {
      keys.emplace_back("COMMA");
    } else if (punct < 0.10) {
      keys.emplace_back(".");
    }
  }

  SessionLog log{synth_user_id(user, spec.n_users), platform, session, {}};
  log.events.reserve(keys.size() * 2);
  std::map<std::string, double> last_release;
  double prev_press = 0.0;
  double prev_release = 0.0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::string& key = keys[i];
    const LogNormalParams& h = model.hold.at(key);
    const double hold = std::max(5.0, std::exp(h.location + h.scale * z(rng)));
    double press;
    if (i == 0) {
      press = 1000.0 * unit(rng);
    } else {
      const NormalParams& f = model.flight.at(keys[i - 1] + "|" + key);
      press = prev_release + f.mean + f.std * z(rng);
      // Presses stay in typing order and never overlap a held copy of the same key.
      press = std::max(press, prev_press + 10.0);
      if (const auto it = last_release.find(key); it != last_release.end()) {
        press = std::max(press, it->second + 5.0);
      }
    }
    press = round_us(press);
    const double release = round_us(press + hold);
    log.events.push_back({key, Action::kPress, press});
    log.events.push_back({key, Action::kRelease, release});
    last_release[key] = release;
    prev_press = press;
    prev_release = release;
  }
  std::stable_sort(log.events.begin(), log.events.end(),
                   [](const KeyEvent& a, const KeyEvent& b) { return a.time_ms < b.time_ms; });
  return log;
}

void check_spec(const SynthSpec& spec) {
  if (spec.n_users < 1) throw Error(ErrorCode::kInvalidArgument, "n_users must be >= 1");
  if (spec.sessions < 1) throw Error(ErrorCode::kInvalidArgument, "sessions must be >= 1");
  if (spec.platforms.empty()) throw Error(ErrorCode::kInvalidArgument, "no platforms");
  if (!(spec.separation >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "separation must be >= 0");
}

}  // namespace

std::string synth_user_id(int index, int n_users) {
  const std::size_t width = std::max<std::size_t>(2, std::to_string(n_users).size());
  std::string digits = std::to_string(index + 1);
  return "u" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::vector<TypistModel> sample_models(const SynthSpec& spec) {
  check_spec(spec);
  const TypistModel base = population_model(spec);
  std::vector<TypistModel> models(static_cast<std::size_t>(spec.n_users));
  parallel_for(models.size(), spec.jobs, [&](std::size_t u) {
    models[u] = personalize(base, spec, static_cast<int>(u));
  });
  return models;
}

Corpus generate_corpus(const SynthSpec& spec) {
  const auto models = sample_models(spec);
  const std::size_t per_user = spec.platforms.size() * static_cast<std::size_t>(spec.sessions);
  std::vector<SessionLog> logs(models.size() * per_user);
  parallel_for(models.size(), spec.jobs, [&](std::size_t u) {
    for (std::size_t p = 0; p < spec.platforms.size(); ++p) {
      for (int s = 1; s <= spec.sessions; ++s) {
        logs[u * per_user + p * static_cast<std::size_t>(spec.sessions) +
             static_cast<std::size_t>(s - 1)] =
            generate_session(models[u], spec, static_cast<int>(u), p, s);
      }
    }
  });
  Corpus corpus;
  for (auto& log : logs) corpus.add(std::move(log));
  return corpus;
}

double mean_pairwise_distance(const std::vector<TypistModel>& models) {
  if (models.size() < 2) return 0.0;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < models.size(); ++a) {
    for (std::size_t b = a + 1; b < models.size(); ++b) {
      double d = 0.0;
      std::size_t n = 0;
      for (const auto& [key, h] : models[a].hold) {
        d += std::abs(h.location - models[b].hold.at(key).location);
        ++n;
      }
      for (const auto& [key, f] : models[a].flight) {
        // Flight means are in ms; scale to be comparable with log-ms holds.
        d += std::abs(f.mean - models[b].flight.at(key).mean) / 100.0;
        ++n;
      }
      total += d / static_cast<double>(n);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace kdv
