#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gectag/core_types.hpp"
#include "gectag/edit2seq.hpp"
#include "gectag/lexicon.hpp"
#include "gectag/multihead_labels.hpp"
#include "gectag/random.hpp"

namespace gectag {

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

// Sparse binary features of one token: hashed indices, repeats allowed
// (a repeated index simply counts twice).
using FeatureVector = std::vector<std::uint32_t>;

inline const std::vector<std::string>& all_feature_templates() {
  static const std::vector<std::string> v = {"token", "lower", "char2", "char3", "prev1",
                                             "prev2", "next1", "next2", "boundary", "bias"};
  return v;
}

class FeatureEncoder {
 public:
  explicit FeatureEncoder(std::uint32_t dim = 1u << 14,
                          std::vector<std::string> templates = all_feature_templates())
      : dim_(dim), templates_(std::move(templates)) {
    if (dim_ == 0) throw DataError("feature dimension must be positive");
    for (const auto& t : templates_) {
      const auto& known = all_feature_templates();
      auto it = std::find(known.begin(), known.end(), t);
      if (it == known.end()) throw DataError("unknown feature template '" + t + "'");
      enabled_[static_cast<std::size_t>(it - known.begin())] = true;
    }
  }

  std::uint32_t dim() const { return dim_; }
  const std::vector<std::string>& templates() const { return templates_; }

  std::vector<FeatureVector> encode(const Sentence& s) const {
    std::vector<FeatureVector> out(s.size());
    auto word = [&](std::ptrdiff_t j) -> std::string_view {
      if (j < 0) return "<s>";
      if (j >= static_cast<std::ptrdiff_t>(s.size())) return "</s>";
      return s[static_cast<std::size_t>(j)];
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto& f = out[i];
      const auto pos = static_cast<std::ptrdiff_t>(i);
      if (on(kToken)) f.push_back(hash(kToken, s[i]));
      if (on(kLower)) f.push_back(hash(kLower, ascii_lower(s[i])));
      if (on(kChar2) || on(kChar3)) {
        const std::string padded = "^" + ascii_lower(s[i]) + "$";
        for (std::size_t n : {2u, 3u}) {
          const auto tmpl = n == 2 ? kChar2 : kChar3;
          if (!on(tmpl)) continue;
          for (std::size_t k = 0; k + n <= padded.size(); ++k)
            f.push_back(hash(tmpl, std::string_view(padded).substr(k, n)));
        }
      }
      if (on(kPrev1)) f.push_back(hash(kPrev1, word(pos - 1)));
      if (on(kPrev2)) f.push_back(hash(kPrev2, word(pos - 2)));
      if (on(kNext1)) f.push_back(hash(kNext1, word(pos + 1)));
      if (on(kNext2)) f.push_back(hash(kNext2, word(pos + 2)));
      if (on(kBoundary)) {
        if (i == 0) f.push_back(hash(kBoundary, "first"));
        if (i + 1 == s.size()) f.push_back(hash(kBoundary, "last"));
      }
      if (on(kBias)) f.push_back(hash(kBias, ""));
    }
    return out;
  }

 private:
  enum Template : std::size_t { kToken, kLower, kChar2, kChar3, kPrev1, kPrev2, kNext1, kNext2, kBoundary, kBias };

  bool on(Template t) const { return enabled_[t]; }

  std::uint32_t hash(Template t, std::string_view value) const {
    std::string key = all_feature_templates()[t];
    key += '\x1f';
    key += value;
    return static_cast<std::uint32_t>(fnv1a64(key) % dim_);
  }

  std::uint32_t dim_;
  std::vector<std::string> templates_;
  std::array<bool, 10> enabled_{};
};

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

enum class HeadKind : std::uint8_t {
  kCorrection,
  kDeletion,
  kInsertion,
  kSubstitution,
  kMerge,
  kTransformation,
  kDetection,
};

inline std::string_view head_name(HeadKind h) {
  static constexpr std::array<std::string_view, 7> names = {
      "correction", "deletion", "insertion", "substitution", "merge", "transformation", "detection"};
  return names[static_cast<std::size_t>(h)];
}

inline std::vector<HeadKind> head_layout(std::size_t count) {
  using H = HeadKind;
  if (count == 7)
    return {H::kCorrection, H::kDeletion, H::kInsertion, H::kSubstitution, H::kMerge, H::kTransformation,
            H::kDetection};
  if (count == 5) return {H::kCorrection, H::kDeletion, H::kInsertion, H::kSubstitution, H::kDetection};
  throw DataError("head count must be 5 or 7, got " + std::to_string(count));
}

// Weights are stored feature-major: row f holds the `classes` logit
// contributions of feature f.
struct Head {
  HeadKind kind;
  std::size_t classes = 0;
  std::vector<double> weights;

  double& w(std::size_t feature, std::size_t cls) { return weights[feature * classes + cls]; }
  double w(std::size_t feature, std::size_t cls) const { return weights[feature * classes + cls]; }
};

struct MultiHeadModel {
  FeatureEncoder encoder;
  TagSet tagset;
  double lambda = 0.5;
  std::vector<Head> heads;

  MultiHeadModel(FeatureEncoder enc, TagSet tags, std::size_t head_count = 7, double lam = 0.5)
      : encoder(std::move(enc)), tagset(std::move(tags)), lambda(lam) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DataError("lambda must be in [0,1]");
    for (auto kind : head_layout(head_count)) {
      Head h{kind, kind == HeadKind::kCorrection ? tagset.size() : 2, {}};
      h.weights.assign(static_cast<std::size_t>(encoder.dim()) * h.classes, 0.0);
      heads.push_back(std::move(h));
    }
  }

  const Head* head(HeadKind k) const {
    for (const auto& h : heads)
      if (h.kind == k) return &h;
    return nullptr;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& h : heads) n += h.weights.size();
    return n;
  }
};

// Per-token probability vectors, one per head in model order.
using TokenDistributions = std::vector<std::vector<double>>;

inline void softmax_inplace(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0;
  for (double& v : z) sum += (v = std::exp(v - m));
  for (double& v : z) v /= sum;
}

inline std::vector<double> head_logits(const Head& h, const FeatureVector& f) {
  std::vector<double> z(h.classes, 0.0);
  for (auto idx : f) {
    const double* row = &h.weights[static_cast<std::size_t>(idx) * h.classes];
    for (std::size_t c = 0; c < h.classes; ++c) z[c] += row[c];
  }
  return z;
}

inline std::vector<TokenDistributions> forward(const MultiHeadModel& m, const std::vector<FeatureVector>& tokens) {
  std::vector<TokenDistributions> out;
  out.reserve(tokens.size());
  for (const auto& f : tokens) {
    for (auto idx : f)
      if (idx >= m.encoder.dim())
        throw DataError("feature index " + std::to_string(idx) + " outside model dimension " +
                        std::to_string(m.encoder.dim()));
    TokenDistributions d;
    for (const auto& h : m.heads) {
      auto z = head_logits(h, f);
      softmax_inplace(z);
      d.push_back(std::move(z));
    }
    out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training data
// ---------------------------------------------------------------------------

// One encoded sentence: features per token and the gold class of every head
// (indexed by HeadKind) per token.
struct EncodedSentence {
  std::vector<FeatureVector> features;
  std::vector<std::array<std::size_t, 7>> gold;
};

// Correction tags outside the model's tagset train towards UNKNOWN.
inline EncodedSentence encode_example(const MultiHeadModel& m, const LabeledExample& ex) {
  EncodedSentence e;
  e.features = m.encoder.encode(ex.tokens);
  const auto& l = ex.labels;
  for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
    std::array<std::size_t, 7> g{};
    g[0] = m.tagset.id(l.correction[i]).value_or(m.tagset.unknown_id());
    g[1] = static_cast<std::size_t>(l.deletion[i]);
    g[2] = static_cast<std::size_t>(l.insertion[i]);
    g[3] = static_cast<std::size_t>(l.substitution[i]);
    g[4] = static_cast<std::size_t>(l.merge[i]);
    g[5] = static_cast<std::size_t>(l.transformation[i]);
    g[6] = static_cast<std::size_t>(l.detection[i]);
    e.gold.push_back(g);
  }
  return e;
}

inline std::vector<EncodedSentence> encode_dataset(const MultiHeadModel& m, const std::vector<LabeledExample>& data) {
  std::vector<EncodedSentence> out;
  out.reserve(data.size());
  for (const auto& ex : data) out.push_back(encode_example(m, ex));
  return out;
}

// ---------------------------------------------------------------------------
// Loss and gradients
// ---------------------------------------------------------------------------

// Mean token cross-entropy of each head over the batch, in model head order.
inline std::vector<double> head_losses(const MultiHeadModel& m, const std::vector<const EncodedSentence*>& batch) {
  std::vector<double> loss(m.heads.size(), 0.0);
  std::size_t tokens = 0;
  for (const auto* s : batch) {
    for (std::size_t t = 0; t < s->features.size(); ++t) {
      ++tokens;
      for (std::size_t k = 0; k < m.heads.size(); ++k) {
        const auto& h = m.heads[k];
        auto z = head_logits(h, s->features[t]);
        const double mx = *std::max_element(z.begin(), z.end());
        double lse = 0;
        for (double v : z) lse += std::exp(v - mx);
        lse = mx + std::log(lse);
        loss[k] += lse - z[s->gold[t][static_cast<std::size_t>(h.kind)]];
      }
    }
  }
  if (tokens == 0) throw DataError("empty batch");
  for (double& v : loss) v /= static_cast<double>(tokens);
  return loss;
}

inline double combine_losses(const MultiHeadModel& m, const std::vector<double>& per_head, double lambda) {
  double total = 0, aux = 0;
  for (std::size_t k = 0; k < m.heads.size(); ++k)
    (m.heads[k].kind == HeadKind::kCorrection ? total : aux) += per_head[k];
  return total + lambda * aux;
}

// l_c + lambda * (sum of auxiliary head losses).
inline double total_loss(const MultiHeadModel& m, const std::vector<const EncodedSentence*>& batch) {
  return combine_losses(m, head_losses(m, batch), m.lambda);
}

inline double total_loss(const MultiHeadModel& m, const std::vector<EncodedSentence>& data) {
  std::vector<const EncodedSentence*> batch;
  for (const auto& s : data) batch.push_back(&s);
  return total_loss(m, batch);
}

// Gradient rows touched by a batch, per head: feature -> d(loss)/d(row).
using SparseGradient = std::vector<std::unordered_map<std::uint32_t, std::vector<double>>>;

inline SparseGradient sparse_gradient(const MultiHeadModel& m, const std::vector<const EncodedSentence*>& batch,
                                      double* loss_out = nullptr) {
  SparseGradient g(m.heads.size());
  std::size_t tokens = 0;
  for (const auto* s : batch) tokens += s->features.size();
  if (tokens == 0) throw DataError("empty batch");
  const double inv = 1.0 / static_cast<double>(tokens);
  double loss = 0;
  for (const auto* s : batch) {
    for (std::size_t t = 0; t < s->features.size(); ++t) {
      for (std::size_t k = 0; k < m.heads.size(); ++k) {
        const auto& h = m.heads[k];
        const double scale = (h.kind == HeadKind::kCorrection ? 1.0 : m.lambda) * inv;
        auto p = head_logits(h, s->features[t]);
        softmax_inplace(p);
        const auto gold = s->gold[t][static_cast<std::size_t>(h.kind)];
        loss += -std::log(std::max(p[gold], std::numeric_limits<double>::min())) * scale;
        if (scale == 0.0) continue;
        p[gold] -= 1.0;
        for (auto idx : s->features[t]) {
          auto& row = g[k][idx];
          if (row.empty()) row.assign(h.classes, 0.0);
          for (std::size_t c = 0; c < h.classes; ++c) row[c] += p[c] * scale;
        }
      }
    }
  }
  if (loss_out) *loss_out = loss;
  return g;
}

// Dense gradient with the same layout as the model's weights.
inline std::vector<std::vector<double>> gradients(const MultiHeadModel& m,
                                                  const std::vector<const EncodedSentence*>& batch) {
  auto sparse = sparse_gradient(m, batch);
  std::vector<std::vector<double>> dense;
  for (std::size_t k = 0; k < m.heads.size(); ++k) {
    dense.emplace_back(m.heads[k].weights.size(), 0.0);
    for (const auto& [f, row] : sparse[k])
      std::copy(row.begin(), row.end(), dense[k].begin() + static_cast<std::ptrdiff_t>(f * m.heads[k].classes));
  }
  return dense;
}

// Largest relative disagreement between the analytic gradient and central
// differences with step h. Denominators are floored at 1e-6 so parameters
// with vanishing gradient compare absolutely.
inline double gradient_check(MultiHeadModel m, const std::vector<const EncodedSentence*>& batch, double h = 1e-5) {
  const auto analytic = gradients(m, batch);
  double worst = 0;
  for (std::size_t k = 0; k < m.heads.size(); ++k) {
    auto& w = m.heads[k].weights;
    for (std::size_t p = 0; p < w.size(); ++p) {
      const double saved = w[p];
      w[p] = saved + h;
      const double up = total_loss(m, batch);
      w[p] = saved - h;
      const double down = total_loss(m, batch);
      w[p] = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic[k][p];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainOptions {
  std::size_t epochs = 10;
  double learning_rate = 0.2;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  double adagrad_epsilon = 1e-8;
};

struct TrainResult {
  std::vector<double> loss_curve;  // full-data total loss before training, then after each epoch
  std::size_t steps = 0;
};

class TrainingDiverged : public Error {
 public:
  TrainingDiverged(std::size_t step, double loss)
      : Error("training diverged at step " + std::to_string(step) + " (loss " + std::to_string(loss) + ")"),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Mini-batch AdaGrad over a seeded shuffle of the data.
inline TrainResult train(MultiHeadModel& m, const std::vector<EncodedSentence>& data, const TrainOptions& opt) {
  if (data.empty()) throw DataError("cannot train on an empty dataset");
  if (opt.batch_size == 0) throw DataError("batch size must be positive");
  TrainResult r;
  r.loss_curve.push_back(total_loss(m, data));
  std::vector<std::vector<double>> accum;
  for (const auto& h : m.heads) accum.emplace_back(h.weights.size(), 0.0);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(opt.seed);
  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t b = 0; b < order.size(); b += opt.batch_size) {
      std::vector<const EncodedSentence*> batch;
      for (std::size_t i = b; i < std::min(order.size(), b + opt.batch_size); ++i) batch.push_back(&data[order[i]]);
      if (std::all_of(batch.begin(), batch.end(), [](auto* s) { return s->features.empty(); })) continue;
      double loss = 0;
      auto g = sparse_gradient(m, batch, &loss);
      ++r.steps;
      if (!std::isfinite(loss)) throw TrainingDiverged(r.steps, loss);
      if (opt.learning_rate == 0.0) continue;
      for (std::size_t k = 0; k < m.heads.size(); ++k) {
        auto& head = m.heads[k];
        for (const auto& [f, row] : g[k]) {
          const std::size_t base = static_cast<std::size_t>(f) * head.classes;
          for (std::size_t c = 0; c < head.classes; ++c) {
            double& a = accum[k][base + c];
            a += row[c] * row[c];
            head.weights[base + c] -= opt.learning_rate * row[c] / (std::sqrt(a) + opt.adagrad_epsilon);
          }
        }
      }
    }
    const double epoch_loss = total_loss(m, data);
    if (!std::isfinite(epoch_loss)) throw TrainingDiverged(r.steps, epoch_loss);
    r.loss_curve.push_back(epoch_loss);
  }
  return r;
}

// Tags observed in the data plus the required KEEP, DELETE and UNKNOWN, in
// the order of `full`. Keeps the correction head small for desk-scale runs.
inline TagSet compact_tagset(const TagSet& full, const std::vector<LabeledExample>& data) {
  std::unordered_map<std::string, bool> seen;
  for (const auto& ex : data)
    for (const auto& t : ex.labels.correction) seen[t.str()] = true;
  return full.filtered([&](const EditTag& t) {
    const auto s = t.str();
    return s == "$KEEP" || s == "$DELETE" || s == "$UNKNOWN" || seen.count(s) != 0;
  });
}

// ---------------------------------------------------------------------------
// Inference
// ---------------------------------------------------------------------------

struct InferenceTweaks {
  double keep_bias = 0.0;       // added to P(KEEP) before renormalising
  double min_error_prob = 0.0;  // sentence-level detection threshold, clamped to [0,1]
};

// Per-token tags. A sentence whose largest detection error probability is
// below the threshold (or any sentence when the threshold is 1) stays
// untouched. Ties in the correction argmax go to KEEP, then to the lower id.
inline EditSequence predict(const MultiHeadModel& m, const Sentence& s, const InferenceTweaks& tw = {}) {
  EditSequence out = all_keep(s.size());
  if (s.empty()) return out;
  const double threshold = std::clamp(tw.min_error_prob, 0.0, 1.0);
  if (threshold >= 1.0) return out;
  const auto dist = forward(m, m.encoder.encode(s));
  std::size_t det = m.heads.size(), corr = m.heads.size();
  for (std::size_t k = 0; k < m.heads.size(); ++k) {
    if (m.heads[k].kind == HeadKind::kDetection) det = k;
    if (m.heads[k].kind == HeadKind::kCorrection) corr = k;
  }
  if (det < m.heads.size() && threshold > 0.0) {
    double max_err = 0;
    for (const auto& d : dist) max_err = std::max(max_err, d[det][1]);
    if (max_err < threshold) return out;
  }
  const std::size_t keep = m.tagset.keep_id();
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto p = dist[i][corr];
    p[keep] += tw.keep_bias;
    const double norm = 1.0 + tw.keep_bias;
    std::size_t best = keep;
    for (std::size_t c = 0; c < p.size(); ++c)
      if (p[c] / norm > p[best] / norm) best = c;
    out[i] = m.tagset.tag(best);
  }
  return out;
}

inline RefineResult predict_refine(const MultiHeadModel& m, const Sentence& s, const Lexicon& lex,
                                   const InferenceTweaks& tw = {}, RefineOptions opt = {}) {
  return refine(s, [&](const Sentence& x) { return predict(m, x, tw); }, lex, opt);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace model_io {

inline constexpr char kMagic[8] = {'G', 'E', 'C', 'T', 'A', 'G', 'M', '\0'};
inline constexpr std::uint32_t kVersion = 1;

inline void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}
inline void put_u32(std::ostream& os, std::uint32_t v) { put_u64(os, v); }
inline void put_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(os, v);
}
inline void put_str(std::ostream& os, const std::string& s) {
  put_u64(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw DataError("model file truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}
inline double get_f64(std::istream& is) {
  const auto v = get_u64(is);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}
inline std::string get_str(std::istream& is) {
  const auto n = get_u64(is);
  if (n > (1u << 20)) throw DataError("model file corrupt: string length " + std::to_string(n));
  std::string s(n, '\0');
  if (!is.read(s.data(), static_cast<std::streamsize>(n))) throw DataError("model file truncated");
  return s;
}

}  // namespace model_io

// Little-endian 64-bit fields throughout; load followed by save reproduces
// the file byte for byte.
inline void save_model(const MultiHeadModel& m, std::ostream& os) {
  using namespace model_io;
  os.write(kMagic, 8);
  put_u32(os, kVersion);
  put_u32(os, m.encoder.dim());
  put_f64(os, m.lambda);
  put_u64(os, m.encoder.templates().size());
  for (const auto& t : m.encoder.templates()) put_str(os, t);
  put_u64(os, m.tagset.size());
  for (const auto& t : m.tagset.tags()) put_str(os, t.str());
  put_u64(os, m.heads.size());
  for (const auto& h : m.heads) {
    put_u32(os, static_cast<std::uint32_t>(h.kind));
    put_u64(os, h.classes);
    for (double w : h.weights) put_f64(os, w);
  }
  if (!os) throw IoError("failed writing model");
}

inline MultiHeadModel load_model(std::istream& is) {
  using namespace model_io;
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw DataError("not a model file");
  if (const auto v = get_u64(is); v != kVersion) throw DataError("unsupported model version " + std::to_string(v));
  const auto dim = get_u64(is);
  if (dim == 0 || dim > (1u << 26)) throw DataError("model file corrupt: dimension " + std::to_string(dim));
  const double lambda = get_f64(is);
  std::vector<std::string> templates(get_u64(is));
  for (auto& t : templates) t = get_str(is);
  std::vector<std::string> tags(get_u64(is));
  for (auto& t : tags) t = get_str(is);
  const auto head_count = get_u64(is);
  MultiHeadModel m(FeatureEncoder(static_cast<std::uint32_t>(dim), templates), TagSet::from_strings(tags, "<model>"),
                   head_count, lambda);
  for (auto& h : m.heads) {
    const auto kind = get_u64(is);
    const auto classes = get_u64(is);
    if (kind != static_cast<std::uint64_t>(h.kind) || classes != h.classes)
      throw DataError("model file corrupt: unexpected head layout");
    for (double& w : h.weights) w = get_f64(is);
  }
  return m;
}

inline void save_model(const MultiHeadModel& m, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  save_model(m, os);
}

inline MultiHeadModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return load_model(is);
}

}  // namespace gectag
