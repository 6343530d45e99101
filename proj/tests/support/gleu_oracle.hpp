#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gectag/core_types.hpp"

namespace gectag::support {

// Corpus GLEU with one reference per sentence, counted directly over
// space-joined n-gram strings. Shares no code with the library scorer.
inline double oracle_gleu(const std::vector<Sentence>& src, const std::vector<Sentence>& hyp,
                          const std::vector<Sentence>& ref) {
  using Counter = std::map<std::string, int>;
  auto grams = [](const Sentence& s, std::size_t n) {
    Counter c;
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      std::string g;
      for (std::size_t k = i; k < i + n; ++k) g += (k > i ? " " : "") + s[k];
      ++c[g];
    }
    return c;
  };
  auto clipped = [](const Counter& a, const Counter& b) {
    int m = 0;
    for (const auto& [g, k] : a)
      if (auto it = b.find(g); it != b.end()) m += std::min(k, it->second);
    return m;
  };
  double c = 0, r = 0;
  std::vector<double> num(4, 0), den(4, 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    c += static_cast<double>(hyp[i].size());
    r += static_cast<double>(ref[i].size());
    for (std::size_t n = 1; n <= 4; ++n) {
      auto h = grams(hyp[i], n), s = grams(src[i], n), rf = grams(ref[i], n);
      Counter s_minus_r;
      for (const auto& [g, k] : s)
        if (!rf.count(g)) s_minus_r[g] = k;
      num[n - 1] += std::max(0, clipped(h, rf) - clipped(h, s_minus_r));
      den[n - 1] += std::max(0, static_cast<int>(hyp[i].size()) + 1 - static_cast<int>(n));
    }
  }
  if (c == 0) return 0;
  double logp = 0;
  for (int n = 0; n < 4; ++n) {
    if (num[n] == 0 || den[n] == 0) return 0;
    logp += std::log(num[n] / den[n]) / 4;
  }
  return std::exp(std::min(0.0, 1 - r / c) + logp);
}

}  // namespace gectag::support
