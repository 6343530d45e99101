#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "gectag/core_types.hpp"
#include "gectag/edit2seq.hpp"
#include "gectag/lexicon.hpp"

namespace gectag {

// ---------------------------------------------------------------------------
// Token alignment
// ---------------------------------------------------------------------------

// Costs are integers in thousandths so ties resolve identically everywhere.
inline constexpr int kInsertCost = 1000;
inline constexpr int kDeleteCost = 1000;
inline constexpr int kSubstituteCost = 1000;
inline constexpr int kJoinCost = 500;  // merge of two source tokens or hyphen split
inline constexpr double kOverlapThreshold = 0.5;

inline std::size_t lcs_length(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// 2*LCS/(|a|+|b|) over bytes.
inline double char_overlap(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  return 2.0 * static_cast<double>(lcs_length(a, b)) / static_cast<double>(a.size() + b.size());
}

// 0 for equal tokens, below 1000 for high-overlap pairs, 1000 otherwise.
inline int substitution_cost(std::string_view a, std::string_view b) {
  if (a == b) return 0;
  const double sim = char_overlap(a, b);
  if (sim >= kOverlapThreshold) return kSubstituteCost - static_cast<int>(std::lround(500.0 * sim));
  return kSubstituteCost;
}

enum class AlignOpKind : std::uint8_t { kMatch, kSubstitute, kDelete, kInsert, kMerge, kSplit };

// One step of the alignment script: source [src_begin, src_end) becomes
// target [tgt_begin, tgt_end).
struct AlignOp {
  AlignOpKind kind;
  std::size_t src_begin, src_end, tgt_begin, tgt_end;
};

inline bool joins_to(std::string_view a, std::string_view b, std::string_view whole) {
  if (whole.size() == a.size() + b.size()) return whole.starts_with(a) && whole.ends_with(b);
  if (whole.size() == a.size() + b.size() + 1)
    return whole.starts_with(a) && whole[a.size()] == '-' && whole.ends_with(b);
  return false;
}

// Minimum-cost monotone alignment. Besides match/substitute/delete/insert
// it knows two join moves: two source tokens that concatenate (directly or
// with a hyphen) to one target token, and one hyphenated source token that
// splits into two target tokens.
inline std::vector<AlignOp> align_script(const Sentence& src, const Sentence& tgt) {
  const std::size_t n = src.size(), m = tgt.size();
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<int> cost((n + 1) * (m + 1), kInf);
  auto at = [&](std::size_t i, std::size_t j) -> int& { return cost[i * (m + 1) + j]; };
  at(0, 0) = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      int best = kInf;
      if (i > 0) best = std::min(best, at(i - 1, j) + kDeleteCost);
      if (j > 0) best = std::min(best, at(i, j - 1) + kInsertCost);
      if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1) + substitution_cost(src[i - 1], tgt[j - 1]));
      if (i > 1 && j > 0 && joins_to(src[i - 2], src[i - 1], tgt[j - 1]))
        best = std::min(best, at(i - 2, j - 1) + kJoinCost);
      if (i > 0 && j > 1 && joins_to(tgt[j - 2], tgt[j - 1], src[i - 1]) &&
          src[i - 1].size() == tgt[j - 2].size() + tgt[j - 1].size() + 1)
        best = std::min(best, at(i - 1, j - 2) + kJoinCost);
      at(i, j) = best;
    }
  }

  // Walk back from the end. Preference on ties: insert, diagonal, join,
  // delete -- insertions land as late as possible, i.e. after the token
  // they follow.
  std::vector<AlignOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int here = at(i, j);
    if (j > 0 && at(i, j - 1) + kInsertCost == here) {
      ops.push_back({AlignOpKind::kInsert, i, i, j - 1, j});
      --j;
    } else if (i > 0 && j > 0 && at(i - 1, j - 1) + substitution_cost(src[i - 1], tgt[j - 1]) == here) {
      auto kind = src[i - 1] == tgt[j - 1] ? AlignOpKind::kMatch : AlignOpKind::kSubstitute;
      ops.push_back({kind, i - 1, i, j - 1, j});
      --i;
      --j;
    } else if (i > 1 && j > 0 && joins_to(src[i - 2], src[i - 1], tgt[j - 1]) &&
               at(i - 2, j - 1) + kJoinCost == here) {
      ops.push_back({AlignOpKind::kMerge, i - 2, i, j - 1, j});
      i -= 2;
      --j;
    } else if (i > 0 && j > 1 && joins_to(tgt[j - 2], tgt[j - 1], src[i - 1]) &&
               src[i - 1].size() == tgt[j - 2].size() + tgt[j - 1].size() + 1 &&
               at(i - 1, j - 2) + kJoinCost == here) {
      ops.push_back({AlignOpKind::kSplit, i - 1, i, j - 2, j});
      --i;
      j -= 2;
    } else {
      ops.push_back({AlignOpKind::kDelete, i - 1, i, j, j});
      --i;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

inline int script_cost(const std::vector<AlignOp>& ops, const Sentence& src, const Sentence& tgt) {
  int c = 0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case AlignOpKind::kMatch: break;
      case AlignOpKind::kSubstitute: c += substitution_cost(src[op.src_begin], tgt[op.tgt_begin]); break;
      case AlignOpKind::kDelete: c += kDeleteCost; break;
      case AlignOpKind::kInsert: c += kInsertCost; break;
      case AlignOpKind::kMerge:
      case AlignOpKind::kSplit: c += kJoinCost; break;
    }
  }
  return c;
}

// Maps every source token to a contiguous target span. Inserted target
// tokens join the span of the preceding source token; insertions before the
// first source token join the first token's span.
inline AlignedPair align(const Sentence& source, const Sentence& target) {
  if (source.empty()) throw DataError("cannot align an empty source sentence");
  AlignedPair p{source, target, std::vector<Span>(source.size())};
  auto ops = align_script(source, target);
  std::size_t cursor = 0;  // next unassigned target position
  for (const auto& op : ops) {
    switch (op.kind) {
      case AlignOpKind::kInsert:
        break;  // absorbed by the neighbouring span below
      case AlignOpKind::kMerge:
        p.alignment[op.src_begin] = {cursor, op.tgt_end};
        p.alignment[op.src_begin + 1] = {op.tgt_end, op.tgt_end};
        cursor = op.tgt_end;
        break;
      default:
        p.alignment[op.src_begin] = {cursor, op.tgt_end};
        cursor = op.tgt_end;
        break;
    }
    if (op.kind == AlignOpKind::kInsert && op.src_begin > 0) {
      p.alignment[op.src_begin - 1].end = op.tgt_end;
      cursor = op.tgt_end;
    }
  }
  // Trailing and leading insertions: stretch the last span to the end.
  p.alignment.back().end = target.size();
  return p;
}

// ---------------------------------------------------------------------------
// Tag identification
// ---------------------------------------------------------------------------

namespace detail {

inline bool produces(const Token& src, const EditTag& tag, const Sentence& want, const Lexicon& lex) {
  auto out = try_apply(src, std::nullopt, tag, lex);
  return out.error.empty() && out.result.tokens == want;
}

inline const std::vector<EditTag>& case_transforms() {
  static const std::vector<EditTag> v = {EditTag::transform("CASE_CAPITAL"),
                                         EditTag::transform("CASE_LOWER"),
                                         EditTag::transform("CASE_UPPER")};
  return v;
}

inline const std::vector<EditTag>& agreement_transforms() {
  static const std::vector<EditTag> v = {EditTag::transform("AGREEMENT_PLURAL"),
                                         EditTag::transform("AGREEMENT_SINGULAR")};
  return v;
}

}  // namespace detail

// Tag turning `src` into `span`, by fixed priority: KEEP, DELETE, case,
// hyphen split, agreement, verb form, literal suffix edit, REPLACE, APPEND,
// then UNKNOWN. Character-level candidates are accepted only when applying
// them reproduces the span exactly. For spans of three or more tokens only
// the first insertion is encoded.
inline EditTag classify_edit(const Token& src, const Sentence& span, const Lexicon& lex,
                             const TagSet& tagset) {
  if (span.size() == 1 && span[0] == src) return EditTag::keep();
  if (span.empty()) return EditTag::del();

  if (span.size() == 1) {
    for (const auto& t : detail::case_transforms())
      if (tagset.contains(t) && detail::produces(src, t, span, lex)) return t;
    for (const auto& t : detail::agreement_transforms())
      if (tagset.contains(t) && detail::produces(src, t, span, lex)) return t;
    for (const auto& t : tagset.tags())
      if (t.is_verb_transform() && detail::produces(src, t, span, lex)) return t;
    for (const auto& t : tagset.tags())
      if (t.family() == TagFamily::kSuffixTransform && detail::produces(src, t, span, lex)) return t;
    if (tagset.has_replace(span[0])) return EditTag::replace(span[0]);
    return EditTag::unknown();
  }

  if (span.size() == 2) {
    static const EditTag split = EditTag::transform("SPLIT_HYPHEN");
    if (tagset.contains(split) && detail::produces(src, split, span, lex)) return split;
  }
  if (span[0] == src && tagset.has_append(span[1])) return EditTag::append(span[1]);
  return EditTag::unknown();
}

// Edit sequence for an already aligned pair. Merges are detected first: if
// tokens i and i+1 join to the first token of their combined spans, token i
// gets a MERGE tag and token i+1 (consumed) gets KEEP.
inline EditSequence seq2edit(const AlignedPair& pair, const Lexicon& lex, const TagSet& tagset) {
  const auto& x = pair.source;
  const std::size_t n = x.size();
  EditSequence e(n, EditTag::unknown());
  static const EditTag merge_space = EditTag::merge("SPACE");
  static const EditTag merge_hyphen = EditTag::merge("HYPHEN");
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) {
      const Span combined{pair.alignment[i].begin, pair.alignment[i + 1].end};
      if (!combined.empty()) {
        const auto& first = pair.target[combined.begin];
        if (first == x[i] + x[i + 1] && tagset.contains(merge_space)) {
          e[i] = merge_space;
          e[i + 1] = EditTag::keep();
          ++i;
          continue;
        }
        if (first == x[i] + "-" + x[i + 1] && tagset.contains(merge_hyphen)) {
          e[i] = merge_hyphen;
          e[i + 1] = EditTag::keep();
          ++i;
          continue;
        }
      }
    }
    e[i] = classify_edit(x[i], pair.span_tokens(i), lex, tagset);
  }
  return e;
}

inline EditSequence seq2edit(const Sentence& source, const Sentence& target, const Lexicon& lex,
                             const TagSet& tagset) {
  return seq2edit(align(source, target), lex, tagset);
}

}  // namespace gectag
