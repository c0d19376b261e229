#include "cadedit/masking.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "cadedit/error.hpp"

namespace cadedit::masking {

MaskedSequence::MaskedSequence(TokenSequence tokens) {
  for (std::string& t : tokens) {
    const bool is_mask = t == kMaskToken;
    if (is_mask && !tokens_.empty() && tokens_.back() == kMaskToken) continue;
    if (is_mask) ++mask_count_;
    tokens_.push_back(std::move(t));
  }
}

Alignment lcs(const TokenSequence& a, const TokenSequence& b) {
  const std::size_t n = a.size(), m = b.size();
  // suffix[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::uint32_t> suffix((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return suffix[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = a[i] == b[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }
  Alignment out;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      out.pairs.emplace_back(i++, j++);
    } else if (at(i + 1, j) >= at(i, j + 1)) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

namespace {

// Walks the gaps between consecutive matches. For each gap reports the
// original span [oi, oe) and edit span [ei, ee) that fall between matches.
template <typename GapFn, typename MatchFn>
void walk_gaps(const TokenSequence& orig, const TokenSequence& edit, GapFn&& on_gap,
               MatchFn&& on_match) {
  const Alignment al = lcs(orig, edit);
  std::size_t oi = 0, ei = 0;
  for (const auto& [po, pe] : al.pairs) {
    on_gap(oi, po, ei, pe);
    on_match(po);
    oi = po + 1;
    ei = pe + 1;
  }
  on_gap(oi, orig.size(), ei, edit.size());
}

}  // namespace

MaskedSequence make_gt_mask(const TokenSequence& orig, const TokenSequence& edit) {
  TokenSequence out;
  walk_gaps(
      orig, edit,
      [&](std::size_t oi, std::size_t oe, std::size_t ei, std::size_t ee) {
        if (oi < oe || ei < ee) out.emplace_back(kMaskToken);
      },
      [&](std::size_t po) { out.push_back(orig[po]); });
  return MaskedSequence(std::move(out));
}

std::vector<TokenSequence> gt_fills(const TokenSequence& orig, const TokenSequence& edit) {
  std::vector<TokenSequence> fills;
  walk_gaps(
      orig, edit,
      [&](std::size_t oi, std::size_t oe, std::size_t ei, std::size_t ee) {
        if (oi < oe || ei < ee) {
          fills.emplace_back(edit.begin() + static_cast<std::ptrdiff_t>(ei),
                             edit.begin() + static_cast<std::ptrdiff_t>(ee));
        }
      },
      [](std::size_t) {});
  return fills;
}

std::optional<std::vector<TokenSequence>> match_fills(const TokenSequence& concrete,
                                                      const MaskedSequence& masked) {
  std::vector<TokenSequence> segments(1);
  for (const std::string& t : masked.tokens()) {
    if (t == kMaskToken) {
      segments.emplace_back();
    } else {
      segments.back().push_back(t);
    }
  }
  if (segments.size() == 1) {
    if (segments.front() == concrete) return std::vector<TokenSequence>{};
    return std::nullopt;
  }

  const TokenSequence& head = segments.front();
  const TokenSequence& tail = segments.back();
  const std::size_t n = concrete.size();
  if (head.size() + tail.size() > n) return std::nullopt;
  if (!std::equal(head.begin(), head.end(), concrete.begin())) return std::nullopt;
  if (!std::equal(tail.begin(), tail.end(), concrete.end() - static_cast<std::ptrdiff_t>(tail.size()))) {
    return std::nullopt;
  }

  // Middle segments: leftmost occurrence within the window is always safe.
  const auto limit = concrete.begin() + static_cast<std::ptrdiff_t>(n - tail.size());
  auto pos = concrete.begin() + static_cast<std::ptrdiff_t>(head.size());
  std::vector<TokenSequence> fills;
  for (std::size_t s = 1; s + 1 < segments.size(); ++s) {
    const TokenSequence& seg = segments[s];
    const auto hit = std::search(pos, limit, seg.begin(), seg.end());
    if (hit == limit && !seg.empty()) return std::nullopt;
    fills.emplace_back(pos, hit);
    pos = hit + static_cast<std::ptrdiff_t>(seg.size());
  }
  fills.emplace_back(pos, limit);
  return fills;
}

bool verify_consistency(const TokenSequence& orig, const MaskedSequence& masked) {
  return match_fills(orig, masked).has_value();
}

TokenSequence realize(const MaskedSequence& masked, const std::vector<TokenSequence>& fills) {
  if (fills.size() != masked.mask_count()) {
    throw Error(Errc::FillArityMismatch, "expected " + std::to_string(masked.mask_count()) +
                                             " fills, got " + std::to_string(fills.size()));
  }
  TokenSequence out;
  std::size_t k = 0;
  for (const std::string& t : masked.tokens()) {
    if (t == kMaskToken) {
      const TokenSequence& f = fills[k++];
      out.insert(out.end(), f.begin(), f.end());
    } else {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace cadedit::masking
