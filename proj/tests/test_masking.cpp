#include <gtest/gtest.h>

#include "cadedit/error.hpp"
#include "cadedit/masking.hpp"
#include "support/test_support.hpp"

namespace cadedit {
namespace {

using masking::MaskedSequence;
using seq::TokenSequence;

MaskedSequence masked(const TokenSequence& t) { return MaskedSequence(t); }

TEST(Lcs, IdenticalSequences) {
  const TokenSequence a{"x", "y", "z"};
  const auto al = masking::lcs(a, a);
  ASSERT_EQ(al.pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(al.pairs[i], std::make_pair(i, i));
}

TEST(Lcs, Disjoint) { EXPECT_TRUE(masking::lcs({"x"}, {"y"}).pairs.empty()); }

TEST(Lcs, ClassicExample) {
  const TokenSequence a{"A", "B", "C", "B", "D", "A", "B"}, b{"B", "D", "C", "A", "B", "A"};
  const auto al = masking::lcs(a, b);
  EXPECT_EQ(al.pairs.size(), 4u);
  EXPECT_EQ(al.pairs.size(), testing::brute_force_lcs(a, b));
  for (const auto& [i, j] : al.pairs) EXPECT_EQ(a[i], b[j]);
}

TEST(Lcs, OracleOnRandomPairs) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_tokens(rng, 12, 4), b = testing::random_tokens(rng, 12, 4);
    const auto al = masking::lcs(a, b);
    ASSERT_EQ(al.pairs.size(), testing::brute_force_lcs(a, b));
    for (std::size_t k = 0; k < al.pairs.size(); ++k) {
      ASSERT_EQ(a[al.pairs[k].first], b[al.pairs[k].second]);
      if (k) {
        ASSERT_LT(al.pairs[k - 1].first, al.pairs[k].first);
        ASSERT_LT(al.pairs[k - 1].second, al.pairs[k].second);
      }
    }
  }
}

TEST(GtMask, IdenticalHasNoMask) {
  const TokenSequence a{"loop", "line", "64", "64"};
  const auto m = masking::make_gt_mask(a, a);
  EXPECT_EQ(m.tokens(), a);
  EXPECT_EQ(m.mask_count(), 0u);
}

TEST(GtMask, TrailingInsertion) {
  const auto m = masking::make_gt_mask({"loop", "line", "64", "64"}, {"loop", "line", "64", "64", "line", "96", "64"});
  EXPECT_EQ(m.tokens(), (TokenSequence{"loop", "line", "64", "64", "<mask>"}));
}

TEST(GtMask, ReplacementMergesWithInsertion) {
  const auto m = masking::make_gt_mask({"line", "64", "160"}, {"line", "96", "160"});
  EXPECT_EQ(m.tokens(), (TokenSequence{"line", "<mask>", "160"}));
  EXPECT_EQ(m.mask_count(), 1u);
}

TEST(GtMask, DisjointIsSingleMask) {
  const auto m = masking::make_gt_mask({"a", "b"}, {"c", "d", "e"});
  EXPECT_EQ(m.tokens(), (TokenSequence{"<mask>"}));
}

TEST(MaskedSequence, MergesAdjacentMasks) {
  const auto m = masked({"a", "<mask>", "<mask>", "b", "<mask>"});
  EXPECT_EQ(m.tokens(), (TokenSequence{"a", "<mask>", "b", "<mask>"}));
  EXPECT_EQ(m.mask_count(), 2u);
  EXPECT_EQ(m.text(), "a <mask> b <mask>");
}

TEST(Consistency, Examples) {
  const TokenSequence orig{"a", "b", "c"};
  EXPECT_TRUE(masking::verify_consistency(orig, masked({"a", "<mask>", "c"})));
  EXPECT_FALSE(masking::verify_consistency(orig, masked({"c", "<mask>", "a"})));
  EXPECT_TRUE(masking::verify_consistency(orig, masked({"a", "<mask>", "b", "<mask>"})));
  EXPECT_TRUE(masking::verify_consistency(orig, masked(orig)));
  EXPECT_FALSE(masking::verify_consistency(orig, masked({"a", "c"})));
  EXPECT_TRUE(masking::verify_consistency(orig, masked({"<mask>"})));
  EXPECT_FALSE(masking::verify_consistency(orig, masked({"a", "b", "c", "d", "<mask>"})));
}

TEST(Realize, Examples) {
  EXPECT_EQ(masking::realize(masked({"a", "<mask>", "c"}), {{"b"}}), (TokenSequence{"a", "b", "c"}));
  EXPECT_EQ(masking::realize(masked({"a", "<mask>"}), {{}}), (TokenSequence{"a"}));
  EXPECT_EQ(masking::realize(masked({"<mask>"}), {{"x", "y"}}), (TokenSequence{"x", "y"}));
  try {
    masking::realize(masked({"a", "<mask>"}), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FillArityMismatch);
  }
}

TEST(Property, RealizabilityOnRandomTokens) {
  Rng rng(77);
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_tokens(rng, 16, 3), b = testing::random_tokens(rng, 16, 3);
    const auto m = masking::make_gt_mask(a, b);
    ASSERT_EQ(masking::realize(m, masking::gt_fills(a, b)), b);
    ASSERT_TRUE(masking::verify_consistency(a, m));
    ASSERT_TRUE(masking::verify_consistency(b, m));
    for (std::size_t k = 1; k < m.tokens().size(); ++k) {
      ASSERT_FALSE(m.tokens()[k] == "<mask>" && m.tokens()[k - 1] == "<mask>");
    }
  }
}

TEST(Property, RealizabilityOnModelSerializations) {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto a = seq::to_tokens(testing::random_model(rng));
    const auto b = seq::to_tokens(testing::random_model(rng));
    const auto m = masking::make_gt_mask(a, b);
    ASSERT_EQ(masking::realize(m, masking::gt_fills(a, b)), b);
    const auto fills = masking::match_fills(b, m);
    ASSERT_TRUE(fills.has_value());
    ASSERT_EQ(masking::realize(m, *fills), b);
  }
}

}  // namespace
}  // namespace cadedit
