#pragma once

// Statistical keystroke verifiers. Each compares an enrollment profile A
// against a probe profile B over their common feature keys and returns a
// match score in [0, 1]. Features present in only one profile are ignored.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kdv/features.hpp"

namespace kdv {

enum class Verifier { kSimilarity, kAbsolute, kItad };

// The similarity verifier's counting condition. kAsPublished counts a feature
// when at most half of B's values fall inside A's median +/- std band, which
// scores identical profiles 0. kCorrected counts the complement.
enum class SimilarityMode { kAsPublished, kCorrected };

std::string_view to_string(Verifier v);
std::string_view to_string(SimilarityMode m);
SimilarityMode parse_similarity_mode(std::string_view text);

struct MatchScore {
  double value = 0.0;
  Verifier verifier = Verifier::kSimilarity;
  SimilarityMode mode = SimilarityMode::kAsPublished;  // meaningful for kSimilarity only
};

inline constexpr double kDefaultAbsoluteThreshold = 1.5;

struct VerifierConfig {
  SimilarityMode similarity_mode = SimilarityMode::kAsPublished;
  double absolute_threshold = kDefaultAbsoluteThreshold;
};

// Middle element of the sorted values; mean of the two middle ones for even
// sizes. Throws EMPTY_LIST.
double median(std::span<const double> xs);

// n-1 denominator; nullopt when fewer than two values.
std::optional<double> sample_std(std::span<const double> xs);

// Fraction of X that is <= y. Throws EMPTY_LIST.
double ecdf(std::span<const double> xs, double y);

// Per-feature summary reused across many comparisons.
struct FeatureStats {
  std::vector<double> sorted;
  double median = 0.0;
  std::optional<double> std_dev;
};

// A profile with every value list sorted and summarized once. Building a
// score matrix prepares each profile a single time instead of per pair.
class PreparedProfile {
 public:
  PreparedProfile() = default;
  explicit PreparedProfile(const FeatureDictionary& dict);

  const std::vector<std::pair<FeatureKey, FeatureStats>>& features() const { return features_; }
  const Provenance& provenance() const { return provenance_; }

 private:
  std::vector<std::pair<FeatureKey, FeatureStats>> features_;  // sorted by key
  Provenance provenance_;
};

MatchScore similarity_score(const PreparedProfile& enroll, const PreparedProfile& probe,
                            SimilarityMode mode = SimilarityMode::kAsPublished);
MatchScore absolute_score(const PreparedProfile& enroll, const PreparedProfile& probe,
                          double threshold = kDefaultAbsoluteThreshold);
MatchScore itad_score(const PreparedProfile& enroll, const PreparedProfile& probe);

MatchScore similarity_score(const Profile& enroll, const Profile& probe,
                            SimilarityMode mode = SimilarityMode::kAsPublished);
MatchScore absolute_score(const Profile& enroll, const Profile& probe,
                          double threshold = kDefaultAbsoluteThreshold);
MatchScore itad_score(const Profile& enroll, const Profile& probe);

MatchScore score(Verifier verifier, const PreparedProfile& enroll, const PreparedProfile& probe,
                 const VerifierConfig& config = {});

}  // namespace kdv
