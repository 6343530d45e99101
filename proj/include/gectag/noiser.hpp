#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gectag/core_types.hpp"
#include "gectag/lexicon.hpp"
#include "gectag/parallel.hpp"
#include "gectag/random.hpp"
#include "gectag/seq2edit.hpp"

namespace gectag {

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

enum class NoiseOp : std::uint8_t {
  kTokenDict,
  kTypePreposition,
  kTypeDeterminer,
  kTypeVerbForm,
  kTypeNounNumber,
  kTypePos,
  kNgramSwap,
  kNgramInsert,
  kNgramDelete,
  kNgramReplace,
  kCharPattern,
  kVowelSwap,
  kSimilarSound,
  kAdjectiveAdverb,
};

inline constexpr std::size_t kNoiseOpCount = 14;

inline constexpr std::array<std::string_view, kNoiseOpCount> kNoiseOpNames = {
    "token_dict",  "type_preposition", "type_determiner", "type_verbform", "type_noun_number",
    "type_pos",    "ngram_swap",       "ngram_insert",    "ngram_delete",  "ngram_replace",
    "char_pattern", "vowel_swap",      "similar_sound",   "adjective_adverb"};

inline std::string_view noise_op_name(NoiseOp op) { return kNoiseOpNames[static_cast<std::size_t>(op)]; }

inline std::optional<NoiseOp> parse_noise_op(std::string_view s) {
  for (std::size_t i = 0; i < kNoiseOpCount; ++i)
    if (kNoiseOpNames[i] == s) return static_cast<NoiseOp>(i);
  return std::nullopt;
}

struct NoiseProfile {
  std::array<double, kNoiseOpCount> weights{};  // per-operation probability
  double expected_errors = 1.0;                 // Poisson mean per sentence
  std::uint64_t rng_seed = 0;
  std::size_t max_retries = 10;
  std::string dictionary_path;  // parallel corpus for token_dict, optional

  double& weight(NoiseOp op) { return weights[static_cast<std::size_t>(op)]; }
  double weight(NoiseOp op) const { return weights[static_cast<std::size_t>(op)]; }

  void validate() const {
    for (std::size_t i = 0; i < kNoiseOpCount; ++i)
      if (!(weights[i] >= 0.0 && weights[i] <= 1.0))
        throw DataError("profile: " + std::string(kNoiseOpNames[i]) + " must be in [0,1]");
    if (!(expected_errors >= 0.0) || !std::isfinite(expected_errors))
      throw DataError("profile: expected_errors must be a nonnegative number");
  }

  static NoiseProfile only(NoiseOp op, double expected = 1.0) {
    NoiseProfile p;
    p.weight(op) = 1.0;
    p.expected_errors = expected;
    return p;
  }
};

// key=value lines; '#' starts a comment. Keys: the operation names,
// expected_errors, seed, max_retries, dictionary.
inline NoiseProfile parse_profile(std::istream& in, std::string_view origin = "<profile>") {
  NoiseProfile p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const auto where = std::string(origin) + ":" + std::to_string(lineno);
    auto joined = join(toks, "");
    auto eq = joined.find('=');
    if (eq == std::string::npos) throw DataError(where + ": expected key=value");
    auto key = joined.substr(0, eq), value = joined.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (auto op = parse_noise_op(key)) {
        p.weight(*op) = std::stod(value, &used);
      } else if (key == "expected_errors") {
        p.expected_errors = std::stod(value, &used);
      } else if (key == "seed") {
        p.rng_seed = std::stoull(value, &used);
      } else if (key == "max_retries") {
        p.max_retries = std::stoull(value, &used);
      } else if (key == "dictionary") {
        p.dictionary_path = value;
        used = value.size();
      } else {
        throw DataError(where + ": unknown key '" + key + "'");
      }
      if (used != value.size()) throw DataError(where + ": bad value '" + value + "'");
    } catch (const std::logic_error&) {
      throw DataError(where + ": bad value '" + value + "'");
    }
  }
  try {
    p.validate();
  } catch (const DataError& e) {
    throw DataError(std::string(origin) + ": " + e.what());
  }
  return p;
}

inline std::string render_profile(const NoiseProfile& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kNoiseOpCount; ++i) os << kNoiseOpNames[i] << '=' << p.weights[i] << '\n';
  os << "expected_errors=" << p.expected_errors << '\n' << "seed=" << p.rng_seed << '\n';
  if (!p.dictionary_path.empty()) os << "dictionary=" << p.dictionary_path << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Edit dictionary
// ---------------------------------------------------------------------------

// correct token -> erroneous variants seen in human edits, with counts.
using EditDictionary = std::map<std::string, std::map<std::string, std::size_t>>;

inline void add_to_dictionary(EditDictionary& dict, const AlignedPair& pair) {
  for (std::size_t i = 0; i < pair.source.size(); ++i) {
    const auto& s = pair.alignment[i];
    if (s.size() != 1) continue;
    const auto& tgt = pair.target[s.begin];
    if (tgt != pair.source[i]) ++dict[tgt][pair.source[i]];
  }
}

// Reverse substitution dictionary: applied correct -> error when noising.
template <typename Range>
EditDictionary build_edit_dictionary(const Range& pairs) {
  EditDictionary dict;
  for (const AlignedPair& p : pairs) add_to_dictionary(dict, p);
  return dict;
}

// ---------------------------------------------------------------------------
// Corruption
// ---------------------------------------------------------------------------

struct NoiseResources {
  const Lexicon* lexicon = nullptr;
  const PatternInventories* patterns = nullptr;
  const EditDictionary* dictionary = nullptr;
};

struct Corruption {
  Sentence corrupted;
  std::vector<NoiseOp> applied;
  std::size_t skipped = 0;  // sampled errors with no applicable operation
  // Per operation, the sum over applied errors of its weight renormalized
  // over the operations that had a site at that moment.
  std::array<double, kNoiseOpCount> expected{};
};

namespace noise_detail {

struct Slot {
  std::string text;
  bool touched = false;
};

inline bool is_alpha_word(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); });
}

inline bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Adverb built by literal suffixing: consonant+y -> ily, else +ly.
inline std::string adverb_of(const std::string& jj) {
  if (jj.size() > 2 && jj.back() == 'y' && std::string_view("aeiou").find(jj[jj.size() - 2]) == std::string_view::npos)
    return jj.substr(0, jj.size() - 1) + "ily";
  return jj + "ly";
}

class Corrupter {
 public:
  Corrupter(const Sentence& clean, const NoiseResources& res, Rng& rng)
      : res_(res), rng_(rng) {
    for (const auto& t : clean) w_.push_back({t, false});
  }

  bool apply(NoiseOp op) {
    switch (op) {
      case NoiseOp::kTokenDict: return token_dict();
      case NoiseOp::kTypePreposition: return closed_class(res_.patterns->prepositions);
      case NoiseOp::kTypeDeterminer: return closed_class(res_.patterns->determiners);
      case NoiseOp::kTypeVerbForm: return verb_form();
      case NoiseOp::kTypeNounNumber: return noun_number();
      case NoiseOp::kTypePos: return pos_change();
      case NoiseOp::kNgramSwap: return ngram_swap();
      case NoiseOp::kNgramInsert: return ngram_insert();
      case NoiseOp::kNgramDelete: return ngram_delete();
      case NoiseOp::kNgramReplace: return ngram_replace();
      case NoiseOp::kCharPattern: return char_pattern();
      case NoiseOp::kVowelSwap: return vowel_swap();
      case NoiseOp::kSimilarSound: return similar_sound();
      case NoiseOp::kAdjectiveAdverb: return adjective_adverb();
    }
    return false;
  }

  // Whether op would find a site in the current state. Runs the operation on
  // a scratch copy with a copy of the generator, so nothing here changes.
  bool can_apply(NoiseOp op) const {
    Rng probe = rng_;
    Corrupter trial(*this, probe);
    return trial.apply(op);
  }

  Sentence result() const {
    Sentence out;
    for (const auto& s : w_) out.push_back(s.text);
    return out;
  }

 private:
  Corrupter(const Corrupter& other, Rng& rng) : w_(other.w_), res_(other.res_), rng_(rng) {}

  // Token i may be edited if it and both neighbours are untouched, so every
  // clean token ends up needing at most one edit.
  bool free(std::size_t i) const {
    if (i >= w_.size() || w_[i].touched) return false;
    if (i > 0 && w_[i - 1].touched) return false;
    if (i + 1 < w_.size() && w_[i + 1].touched) return false;
    return true;
  }

  template <typename Pred>
  std::vector<std::size_t> candidates(Pred pred) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (free(i) && pred(i)) out.push_back(i);
    return out;
  }

  void set(std::size_t i, std::string text) {
    w_[i].text = std::move(text);
    w_[i].touched = true;
  }

  // Removing token i leaves the correction on token i-1 (an append).
  void erase(std::size_t i) {
    w_[i - 1].touched = true;
    w_.erase(w_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  const Lexicon& lex() const { return *res_.lexicon; }

  bool token_dict() {
    if (!res_.dictionary) return false;
    auto c = candidates([&](std::size_t i) { return res_.dictionary->count(w_[i].text) != 0; });
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    const auto& variants = res_.dictionary->at(w_[i].text);
    std::vector<double> wts;
    std::vector<std::string> forms;
    for (const auto& [form, count] : variants) {
      forms.push_back(form);
      wts.push_back(static_cast<double>(count));
    }
    set(i, forms[rng_.weighted(wts)]);
    return true;
  }

  // Substitute a member of a closed class with another member; the empty
  // entry deletes the token (never the first one).
  bool closed_class(const std::vector<std::string>& cls) {
    auto c = candidates([&](std::size_t i) { return !w_[i].text.empty() && contains(cls, w_[i].text); });
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    std::vector<std::string> options;
    for (const auto& o : cls)
      if (o != w_[i].text && !(o.empty() && (i == 0 || w_.size() == 1))) options.push_back(o);
    if (options.empty()) return false;
    const auto& pick = options[rng_.index(options.size())];
    if (pick.empty())
      erase(i);
    else
      set(i, pick);
    return true;
  }

  bool is_function_word(const std::string& s) const {
    return contains(res_.patterns->prepositions, s) || contains(res_.patterns->determiners, s);
  }

  bool verb_form() {
    auto c = candidates([&](std::size_t i) {
      return !is_function_word(w_[i].text) && lex().verb_of(w_[i].text).has_value();
    });
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    const auto& verb = lex().verb(*lex().verb_of(w_[i].text));
    std::vector<std::string> options;
    for (const auto& type : res_.patterns->verb_types) {
      const auto& form = verb.forms[static_cast<std::size_t>(verb_type_form(type))];
      if (form != w_[i].text) options.push_back(form);
    }
    if (options.empty()) return false;
    set(i, options[rng_.index(options.size())]);
    return true;
  }

  // Noun in the lexicon or the plural of one.
  std::optional<std::string> flip_number(const std::string& t) const {
    if (lex().is_noun(t)) return lex().pluralize(t);
    auto sg = lex().singularize(t);
    if (sg != t && lex().is_noun(sg) && lex().pluralize(sg) == t) return sg;
    return std::nullopt;
  }

  bool noun_number() {
    auto c = candidates([&](std::size_t i) { return flip_number(w_[i].text).has_value(); });
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    set(i, *flip_number(w_[i].text));
    return true;
  }

  // Inflectional alternatives for a token, keyed by POS tag: adjective
  // degrees and the derived adverb, or noun number.
  std::map<std::string, std::string> pos_family(const std::string& t) const {
    std::map<std::string, std::string> fam;
    const std::array<std::string, 3>* adj = lex().adjective_of(t);
    if (!adj && t.size() > 3 && t.ends_with("ly")) {
      for (const auto& base : {t.substr(0, t.size() - 2), t.substr(0, t.size() - 3) + "y"})
        if (lex().is_adjective(base) && adverb_of(base) == t) adj = lex().adjective_of(base);
    }
    if (adj) {
      fam = {{"JJ", (*adj)[0]}, {"JJR", (*adj)[1]}, {"JJS", (*adj)[2]}, {"RB", adverb_of((*adj)[0])}};
    } else if (lex().is_noun(t)) {
      fam = {{"NN", t}, {"NNS", lex().pluralize(t)}};
    } else if (auto sg = lex().singularize(t); sg != t && lex().is_noun(sg) && lex().pluralize(sg) == t) {
      fam = {{"NN", sg}, {"NNS", t}};
    }
    std::map<std::string, std::string> out;
    for (const auto& [tag, form] : fam)
      if (contains(res_.patterns->pos_types, tag)) out.emplace(tag, form);
    return out;
  }

  bool pos_change() {
    auto c = candidates([&](std::size_t i) { return pos_family(w_[i].text).size() > 1; });
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    std::vector<std::string> options;
    for (const auto& type : res_.patterns->pos_types) {
      auto fam = pos_family(w_[i].text);
      if (auto it = fam.find(type); it != fam.end() && it->second != w_[i].text) options.push_back(it->second);
    }
    if (options.empty()) return false;
    set(i, options[rng_.index(options.size())]);
    return true;
  }

  bool adjective_adverb() {
    auto flip = [&](const std::string& t) -> std::optional<std::string> {
      if (lex().is_adjective(t)) return adverb_of(t);
      if (t.size() > 3 && t.ends_with("ly"))
        for (const auto& base : {t.substr(0, t.size() - 2), t.substr(0, t.size() - 3) + "y"})
          if (lex().is_adjective(base) && adverb_of(base) == t) return base;
      return std::nullopt;
    };
    auto c = candidates([&](std::size_t i) { return flip(w_[i].text).has_value(); });
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    set(i, *flip(w_[i].text));
    return true;
  }

  bool ngram_swap() {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i + 1 < w_.size(); ++i)
      if (free(i) && free(i + 1) && w_[i].text != w_[i + 1].text && is_alpha_word(w_[i].text) &&
          is_alpha_word(w_[i + 1].text))
        c.push_back(i);
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    auto a = w_[i].text;
    set(i, w_[i + 1].text);
    set(i + 1, a);
    return true;
  }

  // Common n-grams: preposition + determiner bigrams ("in the", "of a").
  std::pair<std::string, std::string> random_function_bigram() {
    const auto& preps = res_.patterns->prepositions;
    const auto& dets = res_.patterns->determiners;
    std::string p, d;
    while (p.empty()) p = preps[rng_.index(preps.size())];
    while (d.empty()) d = dets[rng_.index(dets.size())];
    return {p, d};
  }

  bool is_function_bigram(std::size_t i) const {
    return i + 1 < w_.size() && contains(res_.patterns->prepositions, w_[i].text) &&
           contains(res_.patterns->determiners, w_[i + 1].text);
  }

  bool ngram_insert() {
    // Insert between tokens i-1 and i; the inserted pair must be deletable
    // without disturbing the neighbours.
    std::vector<std::size_t> c;
    for (std::size_t i = 1; i <= w_.size(); ++i)
      if (!w_[i - 1].touched && (i == w_.size() || !w_[i].touched)) c.push_back(i);
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    auto [p, d] = random_function_bigram();
    w_.insert(w_.begin() + static_cast<std::ptrdiff_t>(i), {{p, true}, {d, true}});
    return true;
  }

  bool ngram_delete() {
    std::vector<std::size_t> c;
    for (std::size_t i = 1; i + 2 < w_.size() + 1; ++i)
      if (free(i) && free(i + 1) && is_function_bigram(i) && !w_[i - 1].touched) c.push_back(i);
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    w_.erase(w_.begin() + static_cast<std::ptrdiff_t>(i), w_.begin() + static_cast<std::ptrdiff_t>(i + 2));
    w_[i - 1].touched = true;
    return true;
  }

  bool ngram_replace() {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i + 1 < w_.size(); ++i)
      if (free(i) && free(i + 1) && is_function_bigram(i)) c.push_back(i);
    if (c.empty()) return false;
    const auto i = c[rng_.index(c.size())];
    auto [p, d] = random_function_bigram();
    if (p == w_[i].text && d == w_[i + 1].text) return false;
    set(i, p);
    set(i + 1, d);
    return true;
  }

  // Substring rewrite at a random occurrence among all (rule, position)
  // matches in the sentence.
  struct Site {
    std::size_t token, pos, len;
    std::string replacement;
  };

  bool rewrite(const std::vector<Site>& sites) {
    if (sites.empty()) return false;
    const auto& s = sites[rng_.index(sites.size())];
    auto t = w_[s.token].text;
    t.replace(s.pos, s.len, s.replacement);
    set(s.token, t);
    return true;
  }

  template <typename Emit>
  std::vector<Site> collect_sites(Emit emit) const {
    std::vector<Site> sites;
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (free(i) && is_alpha_word(w_[i].text) && w_[i].text.size() >= 3) emit(i, w_[i].text, sites);
    // A rewrite must change the token and leave something behind.
    std::erase_if(sites, [&](const Site& s) {
      const auto& t = w_[s.token].text;
      return t.compare(s.pos, s.len, s.replacement) == 0 || t.size() - s.len + s.replacement.size() == 0;
    });
    return sites;
  }

  bool char_pattern() {
    return rewrite(collect_sites([&](std::size_t i, const std::string& t, std::vector<Site>& out) {
      for (const auto& [from, to] : res_.patterns->letter_patterns)
        for (auto pos = t.find(from); pos != std::string::npos; pos = t.find(from, pos + 1))
          out.push_back({i, pos, from.size(), to});
    }));
  }

  bool vowel_swap() {
    return rewrite(collect_sites([&](std::size_t i, const std::string& t, std::vector<Site>& out) {
      for (const auto& combo : res_.patterns->vowel_combinations)
        for (auto pos = t.find(combo); pos != std::string::npos; pos = t.find(combo, pos + 1))
          out.push_back({i, pos, combo.size(), std::string(combo.rbegin(), combo.rend())});
    }));
  }

  bool similar_sound() {
    return rewrite(collect_sites([&](std::size_t i, const std::string& t, std::vector<Site>& out) {
      for (const auto& [from, tos] : res_.patterns->similar_sounds)
        for (auto pos = t.find(from); pos != std::string::npos; pos = t.find(from, pos + 1))
          for (const auto& to : tos) out.push_back({i, pos, from.size(), to});
    }));
  }

  std::vector<Slot> w_;
  const NoiseResources& res_;
  Rng& rng_;
};

}  // namespace noise_detail

inline std::uint64_t line_seed_for(std::uint64_t profile_seed, std::uint64_t line_index) {
  return splitmix64(splitmix64(profile_seed) ^ (line_index * 0xd1342543de82ef95ULL + 1));
}

// Corrupts one clean sentence. The number of errors is Poisson with the
// profile's mean; each error draws an operation by weight and redraws (up to
// max_retries) when the operation has no applicable site. Conditioned on
// success, the drawn operation follows the weights restricted to applicable
// operations; Corruption::expected accumulates that target. Pure function of
// its arguments.
inline Corruption corrupt_sentence(const Sentence& clean, const NoiseProfile& profile,
                                   const NoiseResources& res, std::uint64_t line_seed) {
  Corruption out;
  out.corrupted = clean;
  if (clean.empty()) return out;
  std::vector<double> wts(profile.weights.begin(), profile.weights.end());
  if (std::all_of(wts.begin(), wts.end(), [](double w) { return w <= 0; })) return out;
  Rng rng(line_seed_for(profile.rng_seed, line_seed));
  const std::size_t errors = rng.poisson(profile.expected_errors);
  noise_detail::Corrupter c(clean, res, rng);
  for (std::size_t e = 0; e < errors; ++e) {
    std::array<double, kNoiseOpCount> share{};
    double mass = 0;
    for (std::size_t k = 0; k < kNoiseOpCount; ++k)
      if (wts[k] > 0 && c.can_apply(static_cast<NoiseOp>(k))) mass += (share[k] = wts[k]);
    bool done = false;
    for (std::size_t attempt = 0; attempt <= profile.max_retries && !done; ++attempt) {
      const auto op = static_cast<NoiseOp>(rng.weighted(wts));
      if (c.apply(op)) {
        out.applied.push_back(op);
        for (std::size_t k = 0; k < kNoiseOpCount; ++k) out.expected[k] += share[k] / mass;
        done = true;
      }
    }
    if (!done) ++out.skipped;
  }
  out.corrupted = c.result();
  return out;
}

struct NoiseStats {
  std::size_t sentences = 0;
  std::size_t errors = 0;
  std::size_t skipped = 0;
  std::array<std::size_t, kNoiseOpCount> per_op{};
  std::array<double, kNoiseOpCount> expected{};

  NoiseStats& operator+=(const NoiseStats& o) {
    sentences += o.sentences;
    errors += o.errors;
    skipped += o.skipped;
    for (std::size_t i = 0; i < kNoiseOpCount; ++i) {
      per_op[i] += o.per_op[i];
      expected[i] += o.expected[i];
    }
    return *this;
  }

  nlohmann::json to_json() const {
    nlohmann::ordered_json ops, exp;
    for (std::size_t i = 0; i < kNoiseOpCount; ++i) {
      ops[std::string(kNoiseOpNames[i])] = per_op[i];
      exp[std::string(kNoiseOpNames[i])] = expected[i];
    }
    nlohmann::ordered_json j;
    j["sentences"] = sentences;
    j["errors"] = errors;
    j["skipped"] = skipped;
    j["operations"] = ops;
    j["expected_operations"] = exp;
    return j;
  }
};

// Checks that every operation with positive weight has a usable inventory.
inline void check_resources(const NoiseProfile& p, const NoiseResources& res) {
  if (!res.lexicon || !res.patterns) throw DataError("noiser needs a lexicon and pattern inventories");
  auto need = [&](NoiseOp op, bool ok, const char* what) {
    if (p.weight(op) > 0 && !ok)
      throw DataError("profile enables " + std::string(noise_op_name(op)) + " but " + what + " is empty");
  };
  const auto& pt = *res.patterns;
  need(NoiseOp::kTokenDict, res.dictionary && !res.dictionary->empty(), "the edit dictionary");
  need(NoiseOp::kTypePreposition, pt.prepositions.size() > 1, "the preposition list");
  need(NoiseOp::kTypeDeterminer, pt.determiners.size() > 1, "the determiner list");
  need(NoiseOp::kTypeVerbForm, res.lexicon->verb_count() > 0 && !pt.verb_types.empty(), "the verb lexicon");
  need(NoiseOp::kTypeNounNumber, !res.lexicon->nouns().empty(), "the noun list");
  need(NoiseOp::kTypePos, !pt.pos_types.empty(), "the POS list");
  need(NoiseOp::kCharPattern, !pt.letter_patterns.empty(), "the letter-pattern map");
  need(NoiseOp::kVowelSwap, !pt.vowel_combinations.empty(), "the vowel list");
  need(NoiseOp::kSimilarSound, !pt.similar_sounds.empty(), "the similar-sound map");
  need(NoiseOp::kAdjectiveAdverb, !res.lexicon->adjectives().empty(), "the adjective list");
  for (auto op : {NoiseOp::kNgramInsert, NoiseOp::kNgramDelete, NoiseOp::kNgramReplace})
    need(op, pt.prepositions.size() > 1 && pt.determiners.size() > 1, "the function-word lists");
}

// Reads clean sentences line by line and writes `corrupted<TAB>clean`.
// Line i uses seed (profile.rng_seed, i), so output does not depend on the
// worker count.
inline NoiseStats generate_corpus(std::istream& in, std::ostream& out, const NoiseProfile& profile,
                                  const NoiseResources& res, unsigned workers = 1,
                                  std::size_t chunk = 8192) {
  profile.validate();
  check_resources(profile, res);
  NoiseStats stats;
  std::uint64_t line_index = 0;
  std::vector<std::string> lines;
  std::string line;
  auto flush = [&] {
    auto results = parallel_map(lines, workers, [&](std::size_t k, const std::string& l) {
      return corrupt_sentence(tokenize(l), profile, res, line_index + k);
    });
    for (std::size_t k = 0; k < lines.size(); ++k) {
      const auto& r = results[k];
      out << join(r.corrupted) << '\t' << join(tokenize(lines[k])) << '\n';
      ++stats.sentences;
      stats.errors += r.applied.size();
      stats.skipped += r.skipped;
      for (auto op : r.applied) ++stats.per_op[static_cast<std::size_t>(op)];
      for (std::size_t i = 0; i < kNoiseOpCount; ++i) stats.expected[i] += r.expected[i];
    }
    line_index += lines.size();
    lines.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (lines.size() >= chunk) flush();
  }
  flush();
  if (!out) throw IoError("write error while generating corpus");
  return stats;
}

}  // namespace gectag
