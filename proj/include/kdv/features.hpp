#pragma once

// Timing features: unigraph hold times, release-to-press digraph latencies and
// word hold times, stored per feature key as lists of millisecond durations.

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kdv/ingest.hpp"

namespace kdv {

enum class FeatureKind : std::uint8_t { kUnigraph, kDigraph, kWordHold };

// Bit mask over FeatureKind.
enum class FeatureKinds : std::uint8_t {
  kNone = 0,
  kUnigraph = 1,
  kDigraph = 2,
  kWordHold = 4,
  kAll = 7,
};

constexpr FeatureKinds operator|(FeatureKinds a, FeatureKinds b) {
  return static_cast<FeatureKinds>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}

constexpr bool contains(FeatureKinds set, FeatureKind kind) {
  return (static_cast<std::uint8_t>(set) & (1u << static_cast<std::uint8_t>(kind))) != 0;
}

// Parses "all" or a comma/plus separated list of {unigraph, digraph, word}.
FeatureKinds parse_feature_kinds(std::string_view text);
std::string to_string(FeatureKinds kinds);

struct FeatureKey {
  FeatureKind kind = FeatureKind::kUnigraph;
  // Unigraph: key label. Digraph: "first|second". Word hold: the word text.
  std::string label;

  static FeatureKey unigraph(std::string key) { return {FeatureKind::kUnigraph, std::move(key)}; }
  static FeatureKey digraph(std::string_view first, std::string_view second) {
    return {FeatureKind::kDigraph, std::string(first) + "|" + std::string(second)};
  }
  static FeatureKey word(std::string text) { return {FeatureKind::kWordHold, std::move(text)}; }

  auto operator<=>(const FeatureKey&) const = default;
};

// "U:a", "D:a|b", "W:hi"
std::string to_string(const FeatureKey& key);
// Inverse of to_string; throws INVALID_ARGUMENT on an unknown prefix.
FeatureKey parse_feature_key(std::string_view text);

struct Provenance {
  std::string user_id;
  std::set<std::string> platforms;
  std::set<int> sessions;

  bool operator==(const Provenance&) const = default;
};

using FeatureMap = std::map<FeatureKey, std::vector<double>>;

// Every stored value list is non-empty; `add` is the only way values get in.
class FeatureDictionary {
 public:
  FeatureDictionary() = default;
  explicit FeatureDictionary(Provenance provenance) : provenance_(std::move(provenance)) {}

  void add(const FeatureKey& key, double value_ms) { entries_[key].push_back(value_ms); }
  void add(const FeatureKey& key, std::span<const double> values);

  const FeatureMap& entries() const { return entries_; }
  const Provenance& provenance() const { return provenance_; }
  Provenance& provenance() { return provenance_; }

  // Empty span if the key is absent.
  std::span<const double> values(const FeatureKey& key) const;
  bool contains(const FeatureKey& key) const { return entries_.contains(key); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t value_count() const;

  // Copy holding only the selected kinds.
  FeatureDictionary restricted_to(FeatureKinds kinds) const;

  bool operator==(const FeatureDictionary&) const = default;

 private:
  FeatureMap entries_;
  Provenance provenance_;
};

// An enrollment or probe profile: a dictionary merged over one or more sessions.
using Profile = FeatureDictionary;

FeatureDictionary extract_unigraphs(std::span<const PairedKeystroke> pairs);
FeatureDictionary extract_digraphs(std::span<const PairedKeystroke> pairs);
FeatureDictionary extract_wordholds(std::span<const PairedKeystroke> pairs);

// Pairs the log's events and extracts the selected kinds into one dictionary
// whose provenance is the session itself.
FeatureDictionary extract_session(const SessionLog& log, FeatureKinds kinds = FeatureKinds::kAll);

// Concatenates value lists in input order; provenance is the union.
// Throws MIXED_USER when the inputs name different users.
FeatureDictionary merge(std::span<const FeatureDictionary> dicts);

std::vector<FeatureKey> common_features(const FeatureDictionary& a, const FeatureDictionary& b);

}  // namespace kdv
