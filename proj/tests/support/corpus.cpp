#include "support/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace gectag::support {

const Resources& resources() {
  static const Resources r = [] {
    const auto dir = default_data_dir();
    return Resources{load_lexicon(dir), load_patterns(dir), load_tagset((dir / "default_tagset.txt").string())};
  }();
  return r;
}

namespace {

bool lower_alpha(const std::string& w) {
  return w.size() >= 3 && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

SentenceGrammar::SentenceGrammar(const Resources& res, std::size_t nouns, std::size_t verbs,
                                 std::size_t adjectives)
    : res_(&res) {
  const auto& lex = res.lexicon;
  const auto& ts = res.tagset;
  auto function_word = [&](const std::string& w) {
    return contains(res.patterns.prepositions, w) || contains(res.patterns.determiners, w);
  };

  for (const auto& n : data_lines(default_data_dir() / "nouns.txt")) {
    if (nouns_.size() == nouns) break;
    const auto pl = lex.pluralize(n);
    if (!lower_alpha(n) || pl == n || function_word(n) || lex.is_adjective(n)) continue;
    if (lex.verb_of(n) || lex.verb_of(pl) || !ts.has_replace(n) || !ts.has_replace(pl)) continue;
    nouns_.push_back(n);
  }

  static const std::vector<std::string> skip = {"be", "have", "do", "say", "get", "make", "go", "use"};
  for (std::size_t i = 0; i < lex.verb_count() && verbs_.size() < verbs; ++i) {
    const auto& f = lex.verb(i).forms;
    const auto& vb = f[static_cast<std::size_t>(VerbForm::kVB)];
    const auto& vbz = f[static_cast<std::size_t>(VerbForm::kVBZ)];
    if (contains(skip, vb) || function_word(vb) || lex.is_noun(vb) || lex.is_adjective(vb)) continue;
    if (!std::all_of(f.begin(), f.end(), lower_alpha)) continue;
    if (vb == vbz || !ts.has_replace(vb) || !ts.has_replace(vbz)) continue;
    if (lex.verb_of(vb) != i || lex.verb_of(vbz) != i) continue;
    verbs_.push_back(vb);
  }

  for (const auto& a : lex.adjectives()) {
    if (adjectives_.size() == adjectives) break;
    if (!lower_alpha(a) || function_word(a) || lex.is_noun(a) || lex.verb_of(a) || !ts.has_replace(a)) continue;
    adjectives_.push_back(a);
  }

  for (const auto& p : res.patterns.prepositions)
    if (!p.empty() && ts.has_replace(p) && p.find(' ') == std::string::npos) prepositions_.push_back(p);
  if (nouns_.size() < nouns || verbs_.size() < verbs || adjectives_.size() < adjectives)
    throw DataError("bundled data too small for the requested grammar");
}

Sentence SentenceGrammar::noun_phrase(Rng& rng, bool plural) const {
  Sentence np;
  const auto& noun = nouns_[rng.index(nouns_.size())];
  std::string det;
  if (plural) {
    det = "the";
  } else {
    static const std::vector<std::string> dets = {"the", "a", "this", "that"};
    det = dets[rng.index(dets.size())];
  }
  const bool with_adj = rng.uniform() < 0.4;
  const std::string& first = with_adj ? adjectives_[rng.index(adjectives_.size())] : noun;
  if (det == "a" && std::string_view("aeiou").find(first[0]) != std::string_view::npos) det = "an";
  np.push_back(det);
  if (with_adj) np.push_back(first);
  np.push_back(plural ? res_->lexicon.pluralize(noun) : noun);
  return np;
}

Sentence SentenceGrammar::sample(Rng& rng) const {
  const bool plural = rng.uniform() < 0.4;
  Sentence s = noun_phrase(rng, plural);
  const auto& verb = res_->lexicon.verb(*res_->lexicon.verb_of(verbs_[rng.index(verbs_.size())]));
  s.push_back(verb.forms[static_cast<std::size_t>(plural ? VerbForm::kVB : VerbForm::kVBZ)]);
  if (rng.uniform() < 0.7)
    for (auto& t : noun_phrase(rng, false)) s.push_back(std::move(t));
  if (rng.uniform() < 0.6) {
    s.push_back(prepositions_[rng.index(prepositions_.size())]);
    for (auto& t : noun_phrase(rng, false)) s.push_back(std::move(t));
  }
  s.push_back(".");
  return s;
}

std::vector<Sentence> SentenceGrammar::corpus(std::size_t count, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<Sentence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample(rng));
  return out;
}

std::vector<NoisyPair> noisy_pairs(const std::vector<Sentence>& clean, const NoiseProfile& profile,
                                   const Resources& res, const EditDictionary* dict) {
  NoiseResources nr{&res.lexicon, &res.patterns, dict};
  std::vector<NoisyPair> out;
  out.reserve(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    auto c = corrupt_sentence(clean[i], profile, nr, i);
    out.push_back({std::move(c.corrupted), clean[i], std::move(c.applied)});
  }
  return out;
}

NoiseProfile one_edit_profile(double expected_errors) {
  NoiseProfile p;
  p.weights.fill(1.0);
  p.weight(NoiseOp::kNgramDelete) = 0.0;
  p.weight(NoiseOp::kTokenDict) = 0.0;
  p.expected_errors = expected_errors;
  return p;
}

NoiseProfile learnable_profile(double expected_errors) {
  NoiseProfile p;
  p.weight(NoiseOp::kTypeVerbForm) = 1.0;
  p.weight(NoiseOp::kTypeNounNumber) = 1.0;
  p.weight(NoiseOp::kAdjectiveAdverb) = 1.0;
  p.expected_errors = expected_errors;
  return p;
}

std::vector<LabeledExample> label_pairs(const std::vector<NoisyPair>& pairs, const Resources& res) {
  std::vector<LabeledExample> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto edits = seq2edit(p.corrupted, p.clean, res.lexicon, res.tagset);
    out.push_back({p.corrupted, derive_labels(p.corrupted, edits)});
  }
  return out;
}

std::string temp_path(const std::string& stem) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() / ("gectag_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / (stem + "_" + std::to_string(counter++))).string();
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream os(path, std::ios::binary);
  for (const auto& l : lines) os << l << '\n';
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace gectag::support
