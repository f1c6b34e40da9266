#include "kdv/features.hpp"

#include <random>

#include "gtest/gtest.h"
#include "kdv/error.hpp"
#include "kdv/profile_io.hpp"
#include "kdv/synth.hpp"

namespace kdv {
namespace {

using Pairs = std::vector<PairedKeystroke>;
using Values = std::vector<double>;

Values values_of(const FeatureDictionary& d, const FeatureKey& k) {
  const auto s = d.values(k);
  return {s.begin(), s.end()};
}

TEST(Unigraphs, Basic) {
  const auto d = extract_unigraphs(Pairs{{"a", 0, 50}});
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(values_of(d, FeatureKey::unigraph("a")), (Values{50}));
}

TEST(Unigraphs, RepeatedKeyKeepsOccurrenceOrder) {
  const auto d = extract_unigraphs(Pairs{{"a", 0, 50}, {"a", 100, 140}});
  EXPECT_EQ(values_of(d, FeatureKey::unigraph("a")), (Values{50, 40}));
}

TEST(Unigraphs, Empty) { EXPECT_TRUE(extract_unigraphs(Pairs{}).empty()); }

TEST(Digraphs, ReleaseToPressLatency) {
  const auto d = extract_digraphs(Pairs{{"a", 0, 50}, {"b", 120, 160}});
  EXPECT_EQ(values_of(d, FeatureKey::digraph("a", "b")), (Values{70}));
}

TEST(Digraphs, RolloverIsNegative) {
  const auto d = extract_digraphs(Pairs{{"a", 0, 60}, {"b", 30, 90}});
  EXPECT_EQ(values_of(d, FeatureKey::digraph("a", "b")), (Values{-30}));
}

TEST(Digraphs, SingleKeystrokeHasNone) {
  EXPECT_TRUE(extract_digraphs(Pairs{{"a", 0, 60}}).empty());
}

TEST(WordHolds, WordEndedBySpace) {
  const auto d = extract_wordholds(Pairs{{"h", 0, 80}, {"i", 100, 150}, {"SPACE", 200, 230}});
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(values_of(d, FeatureKey::word("hi")), (Values{150}));
}

TEST(WordHolds, SingleLetterWordEqualsUnigraph) {
  const Pairs pairs{{"a", 10, 60}, {"ENTER", 90, 120}};
  const auto w = extract_wordholds(pairs);
  EXPECT_EQ(values_of(w, FeatureKey::word("a")), (Values{50}));
  EXPECT_EQ(values_of(w, FeatureKey::word("a")),
            values_of(extract_unigraphs(pairs), FeatureKey::unigraph("a")));
}

TEST(WordHolds, TrailingWordEmitted) {
  const auto d = extract_wordholds(Pairs{{"o", 0, 40}, {"SPACE", 60, 80}, {"n", 100, 130}, {"o", 150, 210}});
  EXPECT_EQ(values_of(d, FeatureKey::word("o")), (Values{40}));
  EXPECT_EQ(values_of(d, FeatureKey::word("no")), (Values{110}));
}

TEST(WordHolds, BackspaceEndsWordAsTyped) {
  const auto d = extract_wordholds(
      Pairs{{"c", 0, 50}, {"a", 70, 120}, {"BACKSPACE", 150, 190}, {"t", 200, 260}});
  EXPECT_EQ(values_of(d, FeatureKey::word("ca")), (Values{120}));
  EXPECT_EQ(values_of(d, FeatureKey::word("t")), (Values{60}));
}

TEST(WordHolds, ModifiersAreTransparent) {
  const auto d = extract_wordholds(Pairs{{"SHIFT", 0, 90}, {"h", 40, 100}, {"i", 120, 170}});
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(values_of(d, FeatureKey::word("hi")), (Values{130}));
}

TEST(WordHolds, PunctuationIsPartOfWord) {
  const auto d = extract_wordholds(Pairs{{"h", 0, 50}, {"i", 60, 100}, {"COMMA", 120, 150}});
  EXPECT_EQ(values_of(d, FeatureKey::word("hi,")), (Values{150}));
}

TEST(FeatureKey, KindsNeverCollide) {
  FeatureDictionary d;
  d.add(FeatureKey::unigraph("a"), 1);
  d.add(FeatureKey::word("a"), 2);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_NE(FeatureKey::unigraph("a"), FeatureKey::word("a"));
}

TEST(FeatureKey, StringForm) {
  EXPECT_EQ(to_string(FeatureKey::digraph("a", "b")), "D:a|b");
  EXPECT_EQ(parse_feature_key("D:a|b"), FeatureKey::digraph("a", "b"));
  EXPECT_EQ(parse_feature_key("W:hi"), FeatureKey::word("hi"));
  EXPECT_EQ(parse_feature_key("U:SPACE"), FeatureKey::unigraph("SPACE"));
  EXPECT_THROW(parse_feature_key("X:a"), Error);
  EXPECT_THROW(parse_feature_key("D:ab"), Error);
}

TEST(Merge, ConcatenatesInInputOrder) {
  FeatureDictionary a(Provenance{"u", {"F"}, {1}});
  FeatureDictionary b(Provenance{"u", {"I"}, {2}});
  a.add(FeatureKey::unigraph("a"), 1);
  b.add(FeatureKey::unigraph("a"), 2);
  b.add(FeatureKey::unigraph("b"), 3);
  const std::vector<FeatureDictionary> in{a, b};
  const auto m = merge(in);
  EXPECT_EQ(values_of(m, FeatureKey::unigraph("a")), (Values{1, 2}));
  EXPECT_EQ(values_of(m, FeatureKey::unigraph("b")), (Values{3}));
  EXPECT_EQ(m.provenance(), (Provenance{"u", {"F", "I"}, {1, 2}}));
}

TEST(Merge, MixedUsers) {
  const std::vector<FeatureDictionary> in{FeatureDictionary(Provenance{"u1", {}, {}}),
                                          FeatureDictionary(Provenance{"u2", {}, {}})};
  try {
    merge(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMixedUser);
  }
}

TEST(CommonFeatures, Intersection) {
  FeatureDictionary a;
  FeatureDictionary b;
  a.add(FeatureKey::unigraph("a"), 1);
  a.add(FeatureKey::unigraph("b"), 1);
  b.add(FeatureKey::unigraph("b"), 1);
  b.add(FeatureKey::digraph("a", "b"), 1);
  EXPECT_EQ(common_features(a, b), (std::vector<FeatureKey>{FeatureKey::unigraph("b")}));

  FeatureDictionary c;
  c.add(FeatureKey::word("zz"), 1);
  EXPECT_TRUE(common_features(a, c).empty());

  std::vector<FeatureKey> keys_a;
  for (const auto& [k, _] : a.entries()) keys_a.push_back(k);
  EXPECT_EQ(common_features(a, a), keys_a);
}

TEST(Restrict, KeepsSelectedKinds) {
  FeatureDictionary d;
  d.add(FeatureKey::unigraph("a"), 1);
  d.add(FeatureKey::digraph("a", "b"), 2);
  d.add(FeatureKey::word("ab"), 3);
  EXPECT_EQ(d.restricted_to(FeatureKinds::kDigraph).size(), 1u);
  EXPECT_EQ(d.restricted_to(parse_feature_kinds("unigraph,word")).size(), 2u);
  EXPECT_EQ(d.restricted_to(FeatureKinds::kAll), d);
  EXPECT_EQ(to_string(parse_feature_kinds("digraph+word")), "digraph,word");
}

// Count invariants and per-session extraction properties over synthetic sessions.
TEST(Extraction, SessionInvariants) {
  SynthSpec spec;
  spec.seed = 11;
  spec.n_users = 2;
  spec.sessions = 2;
  const Corpus corpus = generate_corpus(spec);
  std::vector<FeatureDictionary> per_session;
  for (const auto& [key, log] : corpus.logs()) {
    const auto pairs = pair_events(log).pairs;
    const auto uni = extract_unigraphs(pairs);
    const auto di = extract_digraphs(pairs);
    EXPECT_EQ(uni.value_count(), pairs.size());
    EXPECT_EQ(di.value_count(), pairs.empty() ? 0u : pairs.size() - 1);
    for (const auto& [k, v] : uni.entries()) {
      for (double x : v) EXPECT_GE(x, 0.0);
    }
    const auto words = extract_wordholds(pairs);
    for (const auto& [k, v] : words.entries()) {
      for (double x : v) EXPECT_GE(x, 0.0);
    }
    // Deterministic.
    EXPECT_EQ(extract_session(log), extract_session(log));
    if (key.user_id == "u01") per_session.push_back(extract_session(log));
  }
  // Merging per-session dictionaries adds up their value counts exactly.
  const auto merged = merge(per_session);
  std::size_t total = 0;
  for (const auto& d : per_session) total += d.value_count();
  EXPECT_EQ(merged.value_count(), total);
}

TEST(ProfileJson, RoundTrip) {
  FeatureDictionary d(Provenance{"u7", {"F", "T"}, {1, 4}});
  d.add(FeatureKey::unigraph("a"), 50.25);
  d.add(FeatureKey::digraph("a", "COMMA"), -30.5);
  d.add(FeatureKey::word("hi,"), 150);
  const std::string text = profile_to_json(d);
  EXPECT_NE(text.find("\"D:a|COMMA\""), std::string::npos);
  EXPECT_EQ(profile_from_json(text), d);
}

TEST(ProfileJson, RejectsEmptyValueList) {
  EXPECT_THROW(profile_from_json(R"({"user":"u","platforms":[],"sessions":[],"features":{"U:a":[]}})"),
               Error);
  EXPECT_THROW(profile_from_json("not json"), Error);
}

}  // namespace
}  // namespace kdv
