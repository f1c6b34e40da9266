#include "kdv/verifiers.hpp"

#include <random>

#include "gtest/gtest.h"
#include "kdv/error.hpp"
#include "oracle.hpp"

namespace kdv {
namespace {

FeatureDictionary dict(std::initializer_list<std::pair<const char*, std::vector<double>>> items) {
  FeatureDictionary d(Provenance{"u", {"F"}, {1}});
  for (const auto& [key, values] : items) d.add(parse_feature_key(key), values);
  return d;
}

TEST(Median, OddEvenSingle) {
  EXPECT_EQ(median(std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_EQ(median(std::vector<double>{1, 2, 3, 4}), 2.5);
  EXPECT_EQ(median(std::vector<double>{5}), 5.0);
  EXPECT_EQ(median(std::vector<double>{3, 1, 2}), 2.0);
}

TEST(Median, EmptyList) {
  try {
    median(std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyList);
  }
}

TEST(SampleStd, Values) {
  EXPECT_EQ(sample_std(std::vector<double>{100, 110, 120}), 10.0);
  EXPECT_FALSE(sample_std(std::vector<double>{7}).has_value());
  EXPECT_FALSE(sample_std(std::vector<double>{}).has_value());
  EXPECT_EQ(sample_std(std::vector<double>{3, 3, 3}), 0.0);
}

TEST(Ecdf, Counting) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(ecdf(x, 2), 2.0 / 3.0);
  EXPECT_EQ(ecdf(x, 0), 0.0);
  EXPECT_EQ(ecdf(x, 5), 1.0);
  EXPECT_THROW(ecdf(std::vector<double>{}, 1.0), Error);
}

TEST(Similarity, OverlapScoresZeroAsPublishedOneCorrected) {
  const auto a = dict({{"U:a", {100, 110, 120}}});
  const auto b = dict({{"U:a", {105, 115}}});
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kAsPublished).value, 0.0);
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kCorrected).value, 1.0);
}

TEST(Similarity, OutsideBand) {
  const auto a = dict({{"U:a", {100, 110, 120}}});
  const auto b = dict({{"U:a", {150}}});
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kAsPublished).value, 1.0);
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kCorrected).value, 0.0);
}

TEST(Similarity, BandBoundsAreExclusive) {
  // Band is (100, 120); both bounds fall outside.
  const auto a = dict({{"U:a", {100, 110, 120}}});
  const auto b = dict({{"U:a", {100, 120}}});
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kCorrected).value, 0.0);
}

TEST(Similarity, ZeroStdGivesEmptyBand) {
  const auto a = dict({{"U:a", {3, 3, 3}}});
  const auto b = dict({{"U:a", {3}}});
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kAsPublished).value, 1.0);
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kCorrected).value, 0.0);
}

TEST(Similarity, SingleValueUsesQuarterFallback) {
  // sigma = 100 / 4 = 25, band (75, 125).
  const auto a = dict({{"U:a", {100}}});
  EXPECT_EQ(similarity_score(a, dict({{"U:a", {124}}}), SimilarityMode::kCorrected).value, 1.0);
  EXPECT_EQ(similarity_score(a, dict({{"U:a", {126}}}), SimilarityMode::kCorrected).value, 0.0);
}

TEST(Similarity, RatioExactlyHalfCountsAsPublished) {
  const auto a = dict({{"U:a", {100, 110, 120}}});
  const auto b = dict({{"U:a", {110, 500}}});
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kAsPublished).value, 1.0);
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kCorrected).value, 0.0);
}

TEST(Similarity, DisjointIsZero) {
  const auto a = dict({{"U:a", {100}}});
  const auto b = dict({{"U:b", {100}}});
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kAsPublished).value, 0.0);
  EXPECT_EQ(similarity_score(a, b, SimilarityMode::kCorrected).value, 0.0);
}

TEST(Absolute, Identity) {
  const auto a = dict({{"U:a", {100, 120}}, {"D:a|b", {-40, -10}}, {"W:hi", {300}}});
  EXPECT_EQ(absolute_score(a, a).value, 1.0);
}

TEST(Absolute, HandTrace) {
  const auto a = dict({{"U:a", {100}}, {"U:b", {200}}});
  const auto b = dict({{"U:a", {140}}, {"U:b", {350}}});
  EXPECT_EQ(absolute_score(a, b).value, 0.5);
}

TEST(Absolute, EmptyCommonSet) {
  EXPECT_EQ(absolute_score(dict({{"U:a", {1}}}), dict({{"U:b", {1}}})).value, 0.0);
}

TEST(Absolute, SignAndZeroMedians) {
  // Negative medians compare by magnitude.
  EXPECT_EQ(absolute_score(dict({{"D:a|b", {-40}}}), dict({{"D:a|b", {-50}}})).value, 1.0);
  EXPECT_EQ(absolute_score(dict({{"D:a|b", {-40}}}), dict({{"D:a|b", {-70}}})).value, 0.0);
  // Opposite signs never match.
  EXPECT_EQ(absolute_score(dict({{"D:a|b", {-40}}}), dict({{"D:a|b", {40}}})).value, 0.0);
  // One zero median: no match; both zero: match.
  EXPECT_EQ(absolute_score(dict({{"D:a|b", {0}}}), dict({{"D:a|b", {10}}})).value, 0.0);
  EXPECT_EQ(absolute_score(dict({{"D:a|b", {0}}}), dict({{"D:a|b", {0}}})).value, 1.0);
}

TEST(Absolute, ThresholdInclusiveAndValidated) {
  EXPECT_EQ(absolute_score(dict({{"U:a", {100}}}), dict({{"U:a", {150}}})).value, 1.0);
  EXPECT_EQ(absolute_score(dict({{"U:a", {100}}}), dict({{"U:a", {150}}}), 1.2).value, 0.0);
  EXPECT_THROW(absolute_score(dict({{"U:a", {1}}}), dict({{"U:a", {1}}}), 1.0), Error);
}

TEST(Itad, HandTraces) {
  EXPECT_EQ(itad_score(dict({{"U:a", {100, 200}}}), dict({{"U:a", {150}}})).value, 0.5);
  EXPECT_EQ(itad_score(dict({{"U:a", {100}}}), dict({{"U:a", {100}}})).value, 1.0);
  EXPECT_EQ(itad_score(dict({{"U:a", {100}}}), dict({{"U:b", {100}}})).value, 0.0);
}

TEST(Itad, UpperTail) {
  // X = {10, 20, 30}, median 20. y = 25: ecdf 2/3, above median -> 1/3.
  EXPECT_DOUBLE_EQ(itad_score(dict({{"U:a", {10, 20, 30}}}), dict({{"U:a", {25}}})).value,
                   1.0 / 3.0);
}

TEST(Itad, PoolsValuesAcrossFeatures) {
  // U:a contributes 1 value (s=1), U:b contributes 3 values (s=0 each): mean 1/4.
  const auto a = dict({{"U:a", {100}}, {"U:b", {100}}});
  const auto b = dict({{"U:a", {100}}, {"U:b", {50, 50, 50}}});
  EXPECT_DOUBLE_EQ(itad_score(a, b).value, 0.25);
}

TEST(MatchScore, CarriesVerifierAndMode) {
  const auto a = dict({{"U:a", {100}}});
  const auto s = similarity_score(a, a, SimilarityMode::kCorrected);
  EXPECT_EQ(s.verifier, Verifier::kSimilarity);
  EXPECT_EQ(s.mode, SimilarityMode::kCorrected);
  EXPECT_EQ(itad_score(a, a).verifier, Verifier::kItad);
  EXPECT_EQ(absolute_score(a, a).verifier, Verifier::kAbsolute);
}

TEST(Verifiers, MatchOracleOnRandomDictionaries) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto a = oracle::random_dictionary(rng);
    const auto b = oracle::random_dictionary(rng);
    const auto da = oracle::to_dict(a);
    const auto db = oracle::to_dict(b);
    EXPECT_NEAR(similarity_score(a, b, SimilarityMode::kAsPublished).value,
                oracle::similarity(da, db, false), 1e-12);
    EXPECT_NEAR(similarity_score(a, b, SimilarityMode::kCorrected).value,
                oracle::similarity(da, db, true), 1e-12);
    EXPECT_NEAR(absolute_score(a, b).value, oracle::absolute(da, db), 1e-12);
    EXPECT_NEAR(itad_score(a, b).value, oracle::itad(da, db), 1e-12);
  }
}

TEST(Verifiers, RangeAndModeComplement) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto a = oracle::random_dictionary(rng);
    const auto b = oracle::random_dictionary(rng);
    const double pub = similarity_score(a, b, SimilarityMode::kAsPublished).value;
    const double cor = similarity_score(a, b, SimilarityMode::kCorrected).value;
    for (double v : {pub, cor, absolute_score(a, b).value, itad_score(a, b).value}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    if (!common_features(a, b).empty()) EXPECT_DOUBLE_EQ(pub + cor, 1.0);
    EXPECT_EQ(absolute_score(a, b).value, absolute_score(b, a).value);
  }
}

}  // namespace
}  // namespace kdv
