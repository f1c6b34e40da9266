#include "kdv/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kdv/error.hpp"

namespace kdv {
namespace {

double median_of_sorted(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double ecdf_of_sorted(std::span<const double> sorted, double y) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), y);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

// Visits (enroll stats, probe stats) for each common feature key.
template <typename Fn>
std::size_t for_each_common(const PreparedProfile& a, const PreparedProfile& b, Fn&& fn) {
  const auto& fa = a.features();
  const auto& fb = b.features();
  std::size_t common = 0;
  auto ia = fa.begin();
  auto ib = fb.begin();
  while (ia != fa.end() && ib != fb.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      fn(ia->second, ib->second);
      ++common;
      ++ia;
      ++ib;
    }
  }
  return common;
}

// Median ratio test. Medians of digraph latencies can be zero or negative,
// where a max/min ratio stops meaning "within a factor of T".
bool medians_match(double a, double b, double threshold) {
  if (a > 0.0 && b > 0.0) return std::max(a, b) / std::min(a, b) <= threshold;
  if (a == 0.0 && b == 0.0) return true;
  if (a == 0.0 || b == 0.0) return false;
  if ((a < 0.0) != (b < 0.0)) return false;
  const double hi = std::max(std::abs(a), std::abs(b));
  const double lo = std::min(std::abs(a), std::abs(b));
  return hi / lo <= threshold;
}

}  // namespace

std::string_view to_string(Verifier v) {
  switch (v) {
    case Verifier::kSimilarity: return "SIM";
    case Verifier::kAbsolute: return "ABS";
    case Verifier::kItad: return "ITAD";
  }
  return "?";
}

std::string_view to_string(SimilarityMode m) {
  return m == SimilarityMode::kAsPublished ? "as-published" : "corrected";
}

SimilarityMode parse_similarity_mode(std::string_view text) {
  if (text == "as-published" || text == "as_published") return SimilarityMode::kAsPublished;
  if (text == "corrected") return SimilarityMode::kCorrected;
  throw Error(ErrorCode::kInvalidArgument, "unknown similarity mode '" + std::string(text) + "'");
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::kEmptyList, "median of empty list");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return median_of_sorted(sorted);
}

std::optional<double> sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

double ecdf(std::span<const double> xs, double y) {
  if (xs.empty()) throw Error(ErrorCode::kEmptyList, "ECDF of empty list");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return ecdf_of_sorted(sorted, y);
}

PreparedProfile::PreparedProfile(const FeatureDictionary& dict) : provenance_(dict.provenance()) {
  features_.reserve(dict.size());
  for (const auto& [key, values] : dict.entries()) {
    FeatureStats stats;
    // Std over the stored order, before sorting, so it matches sample_std bit for bit.
    stats.std_dev = sample_std(values);
    stats.sorted = values;
    std::sort(stats.sorted.begin(), stats.sorted.end());
    stats.median = median_of_sorted(stats.sorted);
    features_.emplace_back(key, std::move(stats));
  }
}

MatchScore similarity_score(const PreparedProfile& enroll, const PreparedProfile& probe,
                            SimilarityMode mode) {
  std::size_t counted = 0;
  const std::size_t total = for_each_common(enroll, probe, [&](const FeatureStats& a,
                                                               const FeatureStats& b) {
    // A lone enrollment value has no std; a quarter of the value stands in.
    const double sigma = a.std_dev ? *a.std_dev : a.sorted.front() / 4.0;
    const double lo = a.median - sigma;
    const double hi = a.median + sigma;
    std::size_t inside = 0;
    for (double e : b.sorted) {
      if (lo < e && e < hi) ++inside;
    }
    const double ratio = static_cast<double>(inside) / static_cast<double>(b.sorted.size());
    const bool counts = mode == SimilarityMode::kAsPublished ? ratio <= 0.5 : ratio > 0.5;
    if (counts) ++counted;
  });
  const double value = total == 0 ? 0.0 : static_cast<double>(counted) / static_cast<double>(total);
  return {value, Verifier::kSimilarity, mode};
}

MatchScore absolute_score(const PreparedProfile& enroll, const PreparedProfile& probe,
                          double threshold) {
  if (!(threshold > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "absolute threshold must exceed 1");
  }
  std::size_t matches = 0;
  const std::size_t total =
      for_each_common(enroll, probe, [&](const FeatureStats& a, const FeatureStats& b) {
        if (medians_match(a.median, b.median, threshold)) ++matches;
      });
  const double value = total == 0 ? 0.0 : static_cast<double>(matches) / static_cast<double>(total);
  return {value, Verifier::kAbsolute, SimilarityMode::kAsPublished};
}

MatchScore itad_score(const PreparedProfile& enroll, const PreparedProfile& probe) {
  // Q is kept as a running sum and count; every probe value weighs the same,
  // so features with long probe lists dominate.
  double sum = 0.0;
  std::size_t count = 0;
  for_each_common(enroll, probe, [&](const FeatureStats& a, const FeatureStats& b) {
    for (double y : b.sorted) {
      const double p = ecdf_of_sorted(a.sorted, y);
      sum += y <= a.median ? p : 1.0 - p;
      ++count;
    }
  });
  const double value = count == 0 ? 0.0 : sum / static_cast<double>(count);
  return {value, Verifier::kItad, SimilarityMode::kAsPublished};
}

MatchScore similarity_score(const Profile& enroll, const Profile& probe, SimilarityMode mode) {
  return similarity_score(PreparedProfile(enroll), PreparedProfile(probe), mode);
}

MatchScore absolute_score(const Profile& enroll, const Profile& probe, double threshold) {
  return absolute_score(PreparedProfile(enroll), PreparedProfile(probe), threshold);
}

MatchScore itad_score(const Profile& enroll, const Profile& probe) {
  return itad_score(PreparedProfile(enroll), PreparedProfile(probe));
}

MatchScore score(Verifier verifier, const PreparedProfile& enroll, const PreparedProfile& probe,
                 const VerifierConfig& config) {
  switch (verifier) {
    case Verifier::kSimilarity: return similarity_score(enroll, probe, config.similarity_mode);
    case Verifier::kAbsolute: return absolute_score(enroll, probe, config.absolute_threshold);
    case Verifier::kItad: return itad_score(enroll, probe);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown verifier");
}

}  // namespace kdv
