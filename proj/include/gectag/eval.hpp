#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gectag/core_types.hpp"
#include "gectag/seq2edit.hpp"

namespace gectag {

// A source range [start, end) and the text replacing it.
struct SpanEdit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string replacement;

  friend auto operator<=>(const SpanEdit&, const SpanEdit&) = default;
};

using SpanEditSet = std::set<SpanEdit>;

// Maximal runs of non-matching alignment steps, one edit per run.
inline SpanEditSet extract_spans(const Sentence& source, const Sentence& corrected) {
  SpanEditSet out;
  const auto ops = align_script(source, corrected);
  std::size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].kind == AlignOpKind::kMatch) {
      ++k;
      continue;
    }
    SpanEdit e;
    e.start = ops[k].src_begin;
    std::size_t tgt_begin = ops[k].tgt_begin, tgt_end = ops[k].tgt_end;
    e.end = ops[k].src_end;
    while (k < ops.size() && ops[k].kind != AlignOpKind::kMatch) {
      e.end = ops[k].src_end;
      tgt_end = ops[k].tgt_end;
      ++k;
    }
    for (std::size_t j = tgt_begin; j < tgt_end; ++j) {
      if (j > tgt_begin) e.replacement += ' ';
      e.replacement += corrected[j];
    }
    out.insert(std::move(e));
  }
  return out;
}

struct EditCounts {
  std::size_t true_positives = 0;
  std::size_t proposed = 0;  // hypothesis edits
  std::size_t gold = 0;      // reference edits

  EditCounts& operator+=(const EditCounts& o) {
    true_positives += o.true_positives;
    proposed += o.proposed;
    gold += o.gold;
    return *this;
  }
};

struct PRF {
  double precision = 0;
  double recall = 0;
  double f05 = 0;
};

inline double f_beta(double p, double r, double beta = 0.5) {
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  return denom > 0 ? (1 + b2) * p * r / denom : 0.0;
}

// With nothing proposed and nothing expected the score is perfect; an empty
// side against a non-empty one scores zero on that side.
inline PRF score_counts(const EditCounts& c) {
  PRF s;
  if (c.proposed == 0 && c.gold == 0) return {1.0, 1.0, 1.0};
  s.precision = c.proposed ? static_cast<double>(c.true_positives) / static_cast<double>(c.proposed) : 0.0;
  s.recall = c.gold ? static_cast<double>(c.true_positives) / static_cast<double>(c.gold) : 0.0;
  s.f05 = f_beta(s.precision, s.recall, 0.5);
  return s;
}

inline EditCounts count_edits(const SpanEditSet& hyp, const SpanEditSet& ref) {
  EditCounts c;
  c.proposed = hyp.size();
  c.gold = ref.size();
  for (const auto& e : hyp) c.true_positives += ref.count(e);
  return c;
}

inline PRF f_half(const SpanEditSet& hyp, const SpanEditSet& ref) {
  return score_counts(count_edits(hyp, ref));
}

// Corpus F0.5 with counts pooled over sentences. With several references
// per sentence, the one maximising the running corpus score is used (first
// wins ties).
inline PRF f_half_corpus(const std::vector<Sentence>& sources, const std::vector<Sentence>& hyps,
                         const std::vector<std::vector<Sentence>>& refs) {
  if (sources.size() != hyps.size() || sources.size() != refs.size())
    throw DataError("source, hypothesis and reference streams differ in length");
  EditCounts total;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (refs[i].empty()) throw DataError("sentence " + std::to_string(i + 1) + " has no reference");
    const auto hyp = extract_spans(sources[i], hyps[i]);
    EditCounts best;
    double best_f = -1;
    for (const auto& r : refs[i]) {
      auto c = count_edits(hyp, extract_spans(sources[i], r));
      EditCounts trial = total;
      trial += c;
      const double f = score_counts(trial).f05;
      if (f > best_f) {
        best_f = f;
        best = c;
      }
    }
    total += best;
  }
  return score_counts(total);
}

// ---------------------------------------------------------------------------
// GLEU
// ---------------------------------------------------------------------------

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

inline NgramCounts ngram_counts(const Sentence& s, std::size_t n) {
  NgramCounts out;
  if (s.size() < n) return out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++out[Sentence(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return out;
}

// Size of the multiset intersection.
inline std::size_t overlap(const NgramCounts& a, const NgramCounts& b) {
  std::size_t c = 0;
  for (const auto& [g, k] : a)
    if (auto it = b.find(g); it != b.end()) c += std::min(k, it->second);
  return c;
}

// Sufficient statistics for one sentence against one reference:
// {hyp length, ref length, then (matches, possible) per order}.
inline std::vector<double> gleu_stats(const Sentence& src, const Sentence& hyp, const Sentence& ref,
                                      std::size_t n_max = 4) {
  std::vector<double> st = {static_cast<double>(hyp.size()), static_cast<double>(ref.size())};
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto h = ngram_counts(hyp, n), s = ngram_counts(src, n), r = ngram_counts(ref, n);
    // Source n-grams that the reference does not contain at all.
    NgramCounts s_only;
    for (const auto& [g, k] : s)
      if (!r.count(g)) s_only.emplace(g, k);
    const auto good = overlap(h, r), bad = overlap(h, s_only);
    st.push_back(good > bad ? static_cast<double>(good - bad) : 0.0);
    st.push_back(hyp.size() + 1 > n ? static_cast<double>(hyp.size() + 1 - n) : 0.0);
  }
  return st;
}

inline double gleu_from_stats(const std::vector<double>& st, std::size_t n_max = 4) {
  if (std::any_of(st.begin(), st.end(), [](double x) { return x == 0.0; })) return 0.0;
  const double c = st[0], r = st[1];
  double log_prec = 0;
  for (std::size_t n = 0; n < n_max; ++n) log_prec += std::log(st[2 + 2 * n] / st[3 + 2 * n]);
  log_prec /= static_cast<double>(n_max);
  return std::exp(std::min(0.0, 1.0 - r / c) + log_prec);
}

struct GleuOptions {
  std::size_t n_max = 4;
  std::size_t samples = 500;  // reference draws when some sentence has several
  std::uint64_t seed = 0;
};

// Corpus GLEU: statistics are summed over sentences before scoring. With
// multiple references, the score is the mean over seeded draws of one
// reference per sentence.
inline double gleu(const std::vector<Sentence>& sources, const std::vector<Sentence>& hyps,
                   const std::vector<std::vector<Sentence>>& refs, const GleuOptions& opt = {}) {
  if (hyps.empty()) throw DataError("empty hypothesis stream");
  if (sources.size() != hyps.size() || sources.size() != refs.size())
    throw DataError("source, hypothesis and reference streams differ in length");
  bool multi = false;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].empty()) throw DataError("sentence " + std::to_string(i + 1) + " has no reference");
    multi = multi || refs[i].size() > 1;
  }
  const std::size_t width = 2 + 2 * opt.n_max;
  auto corpus_score = [&](auto&& pick) {
    std::vector<double> total(width, 0.0);
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      auto st = gleu_stats(sources[i], hyps[i], refs[i][pick(i)], opt.n_max);
      for (std::size_t k = 0; k < width; ++k) total[k] += st[k];
    }
    return gleu_from_stats(total, opt.n_max);
  };
  if (!multi) return corpus_score([](std::size_t) { return std::size_t{0}; });

  std::mt19937_64 rng(opt.seed);
  double sum = 0;
  for (std::size_t it = 0; it < opt.samples; ++it) {
    std::vector<std::size_t> choice(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
      choice[i] = std::uniform_int_distribution<std::size_t>(0, refs[i].size() - 1)(rng);
    sum += corpus_score([&](std::size_t i) { return choice[i]; });
  }
  return sum / static_cast<double>(opt.samples);
}

}  // namespace gectag
