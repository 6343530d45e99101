#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gectag/core_types.hpp"

namespace gectag {

enum class VerbForm : std::uint8_t { kVB, kVBD, kVBG, kVBN, kVBZ };

inline constexpr std::array<VerbForm, 5> kVerbForms = {VerbForm::kVB, VerbForm::kVBD, VerbForm::kVBG,
                                                       VerbForm::kVBN, VerbForm::kVBZ};

inline std::string_view verb_form_name(VerbForm f) {
  static constexpr std::array<std::string_view, 5> kNames = {"VB", "VBD", "VBG", "VBN", "VBZ"};
  return kNames[static_cast<std::size_t>(f)];
}

inline std::optional<VerbForm> parse_verb_form(std::string_view s) {
  for (auto f : kVerbForms)
    if (verb_form_name(f) == s) return f;
  return std::nullopt;
}

// Rule-based number inflection; the irregular list overrides both directions.
inline std::string pluralize_regular(std::string_view w) {
  std::string s(w);
  auto ends = [&](std::string_view suf) { return s.size() >= suf.size() && s.ends_with(suf); };
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh")) return s + "es";
  if (s.size() > 1 && s.back() == 'y' && std::string_view("aeiou").find(s[s.size() - 2]) == std::string_view::npos)
    return s.substr(0, s.size() - 1) + "ies";
  return s + "s";
}

inline std::string singularize_regular(std::string_view w) {
  std::string s(w);
  auto ends = [&](std::string_view suf) { return s.ends_with(suf); };
  if (s.size() > 3 && ends("ies")) return s.substr(0, s.size() - 3) + "y";
  if (ends("sses") || ends("shes") || ends("ches") || ends("xes") || ends("zes"))
    return s.substr(0, s.size() - 2);
  if (s.size() > 1 && ends("s") && !ends("ss")) return s.substr(0, s.size() - 1);
  return s;
}

// Verb forms, irregular plurals and the word classes the noiser needs to
// pick candidate tokens. Immutable once loaded.
class Lexicon {
 public:
  struct Verb {
    std::array<std::string, 5> forms;  // indexed by VerbForm
  };

  void add_verb(const std::string& lemma, const std::string& vbd, const std::string& vbg,
                const std::string& vbn, const std::string& vbz) {
    Verb v{{ascii_lower(lemma), ascii_lower(vbd), ascii_lower(vbg), ascii_lower(vbn),
            ascii_lower(vbz)}};
    const auto idx = verbs_.size();
    verbs_.push_back(v);
    for (auto f : kVerbForms) {
      auto& m = by_form_[static_cast<std::size_t>(f)];
      m.emplace(v.forms[static_cast<std::size_t>(f)], idx);  // first entry wins
      any_form_.emplace(v.forms[static_cast<std::size_t>(f)], idx);
    }
  }

  void add_plural(const std::string& singular, const std::string& plural) {
    auto s = ascii_lower(singular), p = ascii_lower(plural);
    to_plural_.emplace(s, p);
    to_singular_.emplace(p, s);
  }

  void add_noun(const std::string& n) { nouns_.insert(ascii_lower(n)); }

  void add_adjective(const std::string& jj, const std::string& jjr, const std::string& jjs) {
    auto a = ascii_lower(jj);
    if (adjectives_.emplace(a, std::array<std::string, 3>{a, ascii_lower(jjr), ascii_lower(jjs)}).second)
      adjective_order_.push_back(a);
    comparatives_.emplace(ascii_lower(jjr), a);
    superlatives_.emplace(ascii_lower(jjs), a);
  }

  // Surface form `target` of the verb whose `from` form is `token`.
  std::optional<std::string> convert_verb(std::string_view token, VerbForm from, VerbForm to) const {
    const auto& m = by_form_[static_cast<std::size_t>(from)];
    auto it = m.find(std::string(token));
    if (it == m.end()) return std::nullopt;
    return verbs_[it->second].forms[static_cast<std::size_t>(to)];
  }

  // Index of some verb having `token` as any of its forms.
  std::optional<std::size_t> verb_of(std::string_view token) const {
    auto it = any_form_.find(std::string(token));
    if (it == any_form_.end()) return std::nullopt;
    return it->second;
  }
  const Verb& verb(std::size_t idx) const { return verbs_.at(idx); }
  std::size_t verb_count() const { return verbs_.size(); }

  std::string pluralize(std::string_view w) const {
    auto it = to_plural_.find(std::string(w));
    return it != to_plural_.end() ? it->second : pluralize_regular(w);
  }
  std::string singularize(std::string_view w) const {
    auto it = to_singular_.find(std::string(w));
    return it != to_singular_.end() ? it->second : singularize_regular(w);
  }
  bool is_known_plural(std::string_view w) const { return to_singular_.count(std::string(w)) != 0; }
  std::size_t irregular_plural_count() const { return to_plural_.size(); }

  bool is_noun(std::string_view w) const { return nouns_.count(std::string(w)) != 0; }
  const std::unordered_set<std::string>& nouns() const { return nouns_; }

  // {JJ, JJR, JJS} for an adjective given in any degree.
  const std::array<std::string, 3>* adjective_of(std::string_view w) const {
    std::string s(w);
    if (auto it = adjectives_.find(s); it != adjectives_.end()) return &it->second;
    if (auto it = comparatives_.find(s); it != comparatives_.end()) return &adjectives_.at(it->second);
    if (auto it = superlatives_.find(s); it != superlatives_.end()) return &adjectives_.at(it->second);
    return nullptr;
  }
  bool is_adjective(std::string_view w) const { return adjectives_.count(std::string(w)) != 0; }
  const std::vector<std::string>& adjectives() const { return adjective_order_; }

 private:
  std::vector<Verb> verbs_;
  std::array<std::unordered_map<std::string, std::size_t>, 5> by_form_;
  std::unordered_map<std::string, std::size_t> any_form_;
  std::unordered_map<std::string, std::string> to_plural_;
  std::unordered_map<std::string, std::string> to_singular_;
  std::unordered_set<std::string> nouns_;
  std::unordered_map<std::string, std::array<std::string, 3>> adjectives_;
  std::unordered_map<std::string, std::string> comparatives_;
  std::unordered_map<std::string, std::string> superlatives_;
  std::vector<std::string> adjective_order_;
};

// ---------------------------------------------------------------------------
// Bundled data files
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("missing data file " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Reads MANIFEST (`<hex checksum>  <file>` per line) and verifies every
// listed file. Returns file name -> checksum.
inline std::map<std::string, std::string> verify_manifest(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  std::istringstream in(read_file(dir / "MANIFEST"));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto sep = line.find("  ");
    if (sep == std::string::npos) throw DataError("malformed MANIFEST line: " + line);
    auto sum = line.substr(0, sep), name = line.substr(sep + 2);
    auto actual = hex64(fnv1a64(read_file(dir / name)));
    if (actual != sum)
      throw DataError("checksum mismatch for " + (dir / name).string() + ": expected " + sum +
                      ", got " + actual);
    out.emplace(name, sum);
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Lines of a data file. Empty lines are kept: they encode the empty entry in
// the preposition and determiner lists.
inline std::vector<std::string> data_lines(const std::filesystem::path& p) {
  auto text = read_file(p);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (text.empty()) return {};
  return split(text, '\n');
}

inline std::vector<std::vector<std::string>> tsv_rows(const std::filesystem::path& p,
                                                      std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 0;
  for (const auto& line : data_lines(p)) {
    ++lineno;
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() != columns)
      throw DataError(p.string() + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(columns) + " columns");
    rows.push_back(std::move(cols));
  }
  return rows;
}

// Loads verbs.tsv and irregular_plurals.tsv; nouns.txt and adjectives.tsv
// are read when present.
inline Lexicon load_lexicon(const std::filesystem::path& dir) {
  Lexicon lex;
  for (const auto& r : tsv_rows(dir / "verbs.tsv", 5)) lex.add_verb(r[0], r[1], r[2], r[3], r[4]);
  for (const auto& r : tsv_rows(dir / "irregular_plurals.tsv", 2)) lex.add_plural(r[0], r[1]);
  if (std::filesystem::exists(dir / "nouns.txt"))
    for (const auto& n : data_lines(dir / "nouns.txt"))
      if (!n.empty()) lex.add_noun(n);
  if (std::filesystem::exists(dir / "adjectives.tsv"))
    for (const auto& r : tsv_rows(dir / "adjectives.tsv", 3)) lex.add_adjective(r[0], r[1], r[2]);
  return lex;
}

// Error-pattern inventories used by the noiser.
struct PatternInventories {
  std::vector<std::string> prepositions;  // includes "" (deletion)
  std::vector<std::string> determiners;   // includes ""
  std::vector<std::pair<std::string, std::string>> letter_patterns;
  std::vector<std::string> vowel_combinations;
  std::vector<std::pair<std::string, std::vector<std::string>>> similar_sounds;
  std::vector<std::string> verb_types;
  std::vector<std::string> pos_types;
};

inline PatternInventories load_patterns(const std::filesystem::path& dir) {
  verify_manifest(dir);
  PatternInventories p;
  p.prepositions = data_lines(dir / "prepositions.txt");
  p.determiners = data_lines(dir / "determiners.txt");
  for (const auto& r : tsv_rows(dir / "letter_patterns.tsv", 2)) p.letter_patterns.emplace_back(r[0], r[1]);
  p.vowel_combinations = data_lines(dir / "vowel_combinations.txt");
  for (const auto& r : tsv_rows(dir / "similar_sounds.tsv", 2)) p.similar_sounds.emplace_back(r[0], split(r[1], ','));
  p.verb_types = data_lines(dir / "verb_types.txt");
  p.pos_types = data_lines(dir / "pos_types.txt");
  return p;
}

// Maps an inflection type from the verb-type inventory onto a lexicon form.
inline VerbForm verb_type_form(std::string_view type) {
  if (type == "3sg") return VerbForm::kVBZ;
  if (type == "part") return VerbForm::kVBG;
  if (type == "ppart") return VerbForm::kVBN;
  if (type == "p" || type == "1sgp" || type == "2sgp" || type == "3sgp" || type == "ppl")
    return VerbForm::kVBD;
  return VerbForm::kVB;  // inf, 1sg, 2sg, pl
}

#ifndef GECTAG_DATA_DIR
#define GECTAG_DATA_DIR "data"
#endif

// GECTAG_DATA_DIR from the environment, else the build-time location.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("GECTAG_DATA_DIR"); env && *env) return env;
  return GECTAG_DATA_DIR;
}

}  // namespace gectag
