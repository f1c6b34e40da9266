#include "kdv/matrix.hpp"

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "kdv/error.hpp"
#include "kdv/evaluation.hpp"
#include "kdv/synth.hpp"
#include "oracle.hpp"

namespace kdv {
namespace {

ScoreMatrix filled(const std::vector<std::string>& roster, const std::vector<double>& values,
                   const std::string& scorer = "X") {
  ScoreMatrix m(roster, scorer);
  for (std::size_t i = 0; i < values.size(); ++i) m.at(i / roster.size(), i % roster.size()) = values[i];
  return m;
}

ProfileMap random_profiles(std::mt19937_64& rng, int n) {
  ProfileMap out;
  for (int u = 0; u < n; ++u) {
    auto d = oracle::random_dictionary(rng);
    d.provenance().user_id = "u" + std::to_string(u);
    out.emplace(d.provenance().user_id, std::move(d));
  }
  return out;
}

TEST(BuildScoreMatrix, SingleUser) {
  ProfileMap enroll;
  ProfileMap probe;
  FeatureDictionary a(Provenance{"u", {"F"}, {1}});
  a.add(FeatureKey::unigraph("a"), std::vector<double>{100, 200});
  FeatureDictionary b(Provenance{"u", {"F"}, {4}});
  b.add(FeatureKey::unigraph("a"), 150);
  enroll.emplace("u", a);
  probe.emplace("u", b);
  const auto m = build_score_matrix(enroll, probe, Verifier::kItad);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at(0, 0), 0.5);
  EXPECT_EQ(m.scorer(), "ITAD");
}

TEST(BuildScoreMatrix, OrientationRowsAreProbes) {
  std::mt19937_64 rng(5);
  const auto enroll = random_profiles(rng, 4);
  const auto probe = random_profiles(rng, 4);
  const auto m = build_score_matrix(enroll, probe, Verifier::kItad);
  std::size_t i = 0;
  for (const auto& [pu, pp] : probe) {
    std::size_t j = 0;
    for (const auto& [eu, ep] : enroll) {
      EXPECT_EQ(m.at(i, j), itad_score(ep, pp).value) << pu << " vs " << eu;
      ++j;
    }
    ++i;
  }
}

TEST(BuildScoreMatrix, AbsoluteDiagonalIsOneWhenEnrollEqualsProbe) {
  std::mt19937_64 rng(9);
  auto profiles = random_profiles(rng, 6);
  for (auto& [_, p] : profiles) p.add(FeatureKey::unigraph("z"), 80.0);  // |C| >= 1
  const auto m = build_score_matrix(profiles, profiles, Verifier::kAbsolute);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m.at(i, i), 1.0);
}

TEST(BuildScoreMatrix, RosterMismatch) {
  std::mt19937_64 rng(1);
  const auto a = random_profiles(rng, 3);
  auto b = random_profiles(rng, 3);
  b.erase(b.begin());
  try {
    build_score_matrix(a, b, Verifier::kAbsolute);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRosterMismatch);
  }
}

TEST(BuildScoreMatrix, ParallelEqualsSequentialBitForBit) {
  std::mt19937_64 rng(77);
  const auto enroll = random_profiles(rng, 12);
  const auto probe = random_profiles(rng, 12);
  for (Verifier v : {Verifier::kSimilarity, Verifier::kAbsolute, Verifier::kItad}) {
    const auto seq = build_score_matrix(enroll, probe, v, {}, 1);
    const auto par = build_score_matrix(enroll, probe, v, {}, 8);
    EXPECT_EQ(seq, par);
  }
}

TEST(BuildScoreMatrix, WellSeparatedSyntheticUsersWinTheirRow) {
  SynthSpec spec;
  spec.seed = 3;
  spec.n_users = 3;
  spec.platforms = {"F"};
  spec.separation = 4.0;
  const auto data = split_same_platform(generate_corpus(spec), "F");
  const auto m = build_score_matrix(data.enroll, data.probe, Verifier::kItad);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i != j) EXPECT_GT(m.at(i, i), m.at(i, j)) << i << "," << j;
    }
  }
}

TEST(Fuse, MeanOfIdenticalIsIdentity) {
  const auto m = filled({"a", "b"}, {0.1, 0.7, 0.3, 0.9});
  const std::vector<ScoreMatrix> in{m, m, m};
  const auto f = fuse(in, FusionRule::kMean);
  for (std::size_t i = 0; i < m.values().size(); ++i) EXPECT_DOUBLE_EQ(f.values()[i], m.values()[i]);
}

TEST(Fuse, ElementwiseRules) {
  const std::vector<ScoreMatrix> in{filled({"a"}, {0.2}), filled({"a"}, {0.4}),
                                    filled({"a"}, {0.9})};
  EXPECT_DOUBLE_EQ(fuse(in, FusionRule::kMean).at(0, 0), 0.5);
  EXPECT_EQ(fuse(in, FusionRule::kMedian).at(0, 0), 0.4);
  EXPECT_EQ(fuse(in, FusionRule::kMin).at(0, 0), 0.2);
  EXPECT_EQ(fuse(in, FusionRule::kMax).at(0, 0), 0.9);
  EXPECT_EQ(fuse(in, FusionRule::kMean).scorer(), "FMean");
}

TEST(Fuse, EvenCountMedianAveragesMiddle) {
  const std::vector<ScoreMatrix> in{filled({"a"}, {0.2}), filled({"a"}, {0.6})};
  EXPECT_DOUBLE_EQ(fuse(in, FusionRule::kMedian).at(0, 0), 0.4);
}

TEST(Fuse, Errors) {
  const auto a = filled({"a", "b"}, {0, 0, 0, 0});
  const auto b = filled({"a"}, {0});
  const auto c = filled({"a", "c"}, {0, 0, 0, 0});
  auto code = [](std::vector<ScoreMatrix> in) {
    try {
      fuse(in, FusionRule::kMean);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code({a, b}), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code({a, c}), ErrorCode::kRosterMismatch);
  EXPECT_EQ(code({a}), ErrorCode::kShapeMismatch);
}

TEST(Fuse, PermutationInvariantAndBounded) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoreMatrix> in;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> v(9);
      for (double& x : v) x = u(rng);
      in.push_back(filled({"a", "b", "c"}, v));
    }
    std::vector<ScoreMatrix> shuffled = in;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (FusionRule r : {FusionRule::kMean, FusionRule::kMedian, FusionRule::kMin, FusionRule::kMax}) {
      const auto f = fuse(in, r);
      EXPECT_EQ(f.values(), fuse(shuffled, r).values());
      for (double x : f.values()) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
      }
    }
  }
}

TEST(MatrixIo, CsvHasRosterHeader) {
  const auto m = filled({"a", "b"}, {1, 0.5, 0.25, 0});
  EXPECT_EQ(matrix_to_csv(m), "probe,a,b\na,1,0.5\nb,0.25,0\n");
  EXPECT_NE(matrix_to_json(m).find("\"roster\":[\"a\",\"b\"]"), std::string::npos);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 4,
                            [](std::size_t i) {
                              if (i == 7) throw Error(ErrorCode::kInvalidArgument, "boom");
                            }),
               Error);
}

}  // namespace
}  // namespace kdv
