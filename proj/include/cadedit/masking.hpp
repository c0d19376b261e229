#pragma once

// LCS-based ground-truth masks: tokens of the original that survive into the
// edit are kept, everything else collapses into single "<mask>" tokens.

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cadedit/cad_seq.hpp"

namespace cadedit::masking {

using seq::TokenSequence;

inline constexpr std::string_view kMaskToken = "<mask>";

/// Matched (orig index, edit index) pairs, strictly increasing in both.
struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Token sequence where runs of adjacent masks are merged on construction.
class MaskedSequence {
 public:
  MaskedSequence() = default;
  explicit MaskedSequence(TokenSequence tokens);

  const TokenSequence& tokens() const { return tokens_; }
  std::size_t mask_count() const { return mask_count_; }
  std::string text() const { return seq::join(tokens_); }

  bool operator==(const MaskedSequence&) const = default;

 private:
  TokenSequence tokens_;
  std::size_t mask_count_ = 0;
};

/// Longest common subsequence. Ties skip the original-sequence token first,
/// which aligns shared prefixes as early as possible.
Alignment lcs(const TokenSequence& a, const TokenSequence& b);

MaskedSequence make_gt_mask(const TokenSequence& orig, const TokenSequence& edit);

/// The edit-side tokens for each mask of make_gt_mask(orig, edit), in order.
std::vector<TokenSequence> gt_fills(const TokenSequence& orig, const TokenSequence& edit);

/// Splits `concrete` into the spans the masks stand for, if `masked` is
/// `concrete` with whole (possibly empty) spans replaced by masks.
std::optional<std::vector<TokenSequence>> match_fills(const TokenSequence& concrete,
                                                      const MaskedSequence& masked);

bool verify_consistency(const TokenSequence& orig, const MaskedSequence& masked);

/// Throws FillArityMismatch unless fills.size() == masked.mask_count().
TokenSequence realize(const MaskedSequence& masked, const std::vector<TokenSequence>& fills);

}  // namespace cadedit::masking
