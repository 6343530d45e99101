#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace gectag {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Base for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad tag strings, bad file contents, length mismatches.
struct DataError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Tokens and sentences
// ---------------------------------------------------------------------------

using Token = std::string;
using Sentence = std::vector<Token>;

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Splits a pre-tokenized line on whitespace. Total: an empty or blank line
// gives an empty sentence.
inline Sentence tokenize(std::string_view line) {
  Sentence out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(const Sentence& s, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += sep;
    out += s[i];
  }
  return out;
}

inline bool is_valid_token(std::string_view t) {
  return !t.empty() && std::none_of(t.begin(), t.end(), is_space);
}

// ---------------------------------------------------------------------------
// Edit tags
// ---------------------------------------------------------------------------

enum class TagFamily : std::uint8_t {
  kKeep,
  kDelete,
  kAppend,
  kReplace,
  kMerge,
  kTransform,
  kSuffixTransform,
  kUnknown,
};

inline constexpr std::array<TagFamily, 8> kAllFamilies = {
    TagFamily::kKeep,  TagFamily::kDelete,    TagFamily::kAppend,          TagFamily::kReplace,
    TagFamily::kMerge, TagFamily::kTransform, TagFamily::kSuffixTransform, TagFamily::kUnknown};

inline std::string_view family_name(TagFamily f) {
  switch (f) {
    case TagFamily::kKeep: return "KEEP";
    case TagFamily::kDelete: return "DELETE";
    case TagFamily::kAppend: return "APPEND";
    case TagFamily::kReplace: return "REPLACE";
    case TagFamily::kMerge: return "MERGE";
    case TagFamily::kTransform: return "TRANSFORM";
    case TagFamily::kSuffixTransform: return "SUFFIXTRANSFORM";
    case TagFamily::kUnknown: return "UNKNOWN";
  }
  return "?";
}

// Token-level transforms (the 26 "other transformations").
inline constexpr std::array<std::string_view, 26> kTransformNames = {
    "AGREEMENT_PLURAL", "AGREEMENT_SINGULAR", "CASE_CAPITAL", "CASE_LOWER",   "CASE_UPPER",
    "SPLIT_HYPHEN",     "VERB_VBD_VB",        "VERB_VBD_VBG", "VERB_VBD_VBN", "VERB_VBD_VBZ",
    "VERB_VBG_VB",      "VERB_VBG_VBD",       "VERB_VBG_VBN", "VERB_VBG_VBZ", "VERB_VBN_VB",
    "VERB_VBN_VBD",     "VERB_VBN_VBG",       "VERB_VBN_VBZ", "VERB_VBZ_VB",  "VERB_VBZ_VBD",
    "VERB_VBZ_VBG",     "VERB_VBZ_VBN",       "VERB_VB_VBD",  "VERB_VB_VBG",  "VERB_VB_VBN",
    "VERB_VB_VBZ"};

// Suffix rewrites X_TO_Y: replace trailing x with y (lowercased).
inline constexpr std::array<std::string_view, 34> kSuffixReplaceNames = {
    "AL_TO_E",      "ATION_TO_ING", "CE_TO_T",    "D_TO_S",     "D_TO_T",       "ED_TO_ING",
    "ED_TO_S",      "ER_TO_EST",    "EST_TO_ER",  "E_TO_AL",    "E_TO_ING",     "ICAL_TO_Y",
    "IC_TO_Y",      "IES_TO_Y",     "ILY_TO_Y",   "ING_TO_ATION", "ING_TO_E",   "ING_TO_ED",
    "ING_TO_ION",   "ING_TO_S",     "ION_TO_ING", "N_TO_ING",   "S_TO_D",       "S_TO_ED",
    "S_TO_ING",     "S_TO_T",       "T_TO_CE",    "T_TO_D",     "T_TO_S",       "Y_TO_IC",
    "Y_TO_ICAL",    "Y_TO_IED",     "Y_TO_IES",   "Y_TO_ILY"};

inline constexpr std::array<std::string_view, 17> kSuffixRemove = {
    "able", "age", "al", "ation", "d", "ed", "er", "es", "est",
    "ful",  "ing", "ive", "less", "ly", "n", "ness", "y"};

inline constexpr std::array<std::string_view, 19> kSuffixAppend = {
    "able", "age", "al", "ation", "d", "ed", "er", "es", "est", "ful",
    "ing",  "ist", "ive", "ly", "n", "ness", "ship", "wise", "y"};

// Literal string edit a SUFFIXTRANSFORM tag denotes: strip `remove` from the
// end of the token, then append `add`.
struct SuffixEdit {
  std::string remove;
  std::string add;
};

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

inline std::optional<SuffixEdit> parse_suffix_name(std::string_view name) {
  if (name.starts_with("REMOVE_")) {
    auto s = name.substr(7);
    if (std::find(kSuffixRemove.begin(), kSuffixRemove.end(), s) == kSuffixRemove.end())
      return std::nullopt;
    return SuffixEdit{std::string(s), ""};
  }
  if (name.starts_with("APPEND_")) {
    auto s = name.substr(7);
    if (std::find(kSuffixAppend.begin(), kSuffixAppend.end(), s) == kSuffixAppend.end())
      return std::nullopt;
    return SuffixEdit{"", std::string(s)};
  }
  if (std::find(kSuffixReplaceNames.begin(), kSuffixReplaceNames.end(), name) ==
      kSuffixReplaceNames.end())
    return std::nullopt;
  auto pos = name.find("_TO_");
  return SuffixEdit{ascii_lower(name.substr(0, pos)), ascii_lower(name.substr(pos + 4))};
}

// One edit operation. Payload semantics depend on the family; see parse().
class EditTag {
 public:
  EditTag() = default;

  static EditTag keep() { return EditTag(TagFamily::kKeep, ""); }
  static EditTag del() { return EditTag(TagFamily::kDelete, ""); }
  static EditTag unknown() { return EditTag(TagFamily::kUnknown, ""); }
  static EditTag append(std::string tok) { return make(TagFamily::kAppend, std::move(tok)); }
  static EditTag replace(std::string tok) { return make(TagFamily::kReplace, std::move(tok)); }
  static EditTag merge(std::string joiner) { return make(TagFamily::kMerge, std::move(joiner)); }
  static EditTag transform(std::string name) {
    return make(TagFamily::kTransform, std::move(name));
  }
  static EditTag suffix(std::string name) {
    return make(TagFamily::kSuffixTransform, std::move(name));
  }

  // Validating constructor shared by the named factories.
  static EditTag make(TagFamily family, std::string payload) {
    EditTag t(family, std::move(payload));
    if (auto why = t.invalid_reason()) throw DataError("invalid tag " + t.str() + ": " + *why);
    return t;
  }

  // Parses `$KEEP`, `$APPEND_tok`, `$SUFFIXTRANSFORM_Y_TO_ILY`, ...
  static EditTag parse(std::string_view s) {
    struct Prefix {
      std::string_view text;
      TagFamily family;
    };
    static constexpr std::array<Prefix, 5> kPrefixes = {{
        {"$SUFFIXTRANSFORM_", TagFamily::kSuffixTransform},
        {"$TRANSFORM_", TagFamily::kTransform},
        {"$APPEND_", TagFamily::kAppend},
        {"$REPLACE_", TagFamily::kReplace},
        {"$MERGE_", TagFamily::kMerge},
    }};
    if (s == "$KEEP") return keep();
    if (s == "$DELETE") return del();
    if (s == "$UNKNOWN") return unknown();
    for (const auto& p : kPrefixes) {
      if (s.starts_with(p.text)) {
        EditTag t(p.family, std::string(s.substr(p.text.size())));
        if (auto why = t.invalid_reason())
          throw DataError("malformed tag '" + std::string(s) + "': " + *why);
        return t;
      }
    }
    throw DataError("malformed tag '" + std::string(s) + "': unknown family prefix");
  }

  std::string str() const {
    switch (family_) {
      case TagFamily::kKeep: return "$KEEP";
      case TagFamily::kDelete: return "$DELETE";
      case TagFamily::kUnknown: return "$UNKNOWN";
      default: break;
    }
    std::string out = "$";
    out += family_name(family_);
    out += '_';
    out += payload_;
    return out;
  }

  TagFamily family() const { return family_; }
  const std::string& payload() const { return payload_; }

  bool is_keep() const { return family_ == TagFamily::kKeep; }
  bool is_verb_transform() const {
    return family_ == TagFamily::kTransform && payload_.starts_with("VERB_");
  }

  friend bool operator==(const EditTag&, const EditTag&) = default;

 private:
  EditTag(TagFamily f, std::string p) : family_(f), payload_(std::move(p)) {}

  std::optional<std::string> invalid_reason() const {
    switch (family_) {
      case TagFamily::kKeep:
      case TagFamily::kDelete:
      case TagFamily::kUnknown:
        if (!payload_.empty()) return "no payload allowed";
        return std::nullopt;
      case TagFamily::kAppend:
      case TagFamily::kReplace:
        if (!is_valid_token(payload_)) return "payload must be a non-empty token";
        return std::nullopt;
      case TagFamily::kMerge:
        if (payload_ != "HYPHEN" && payload_ != "SPACE") return "merge joiner must be HYPHEN or SPACE";
        return std::nullopt;
      case TagFamily::kTransform:
        if (std::find(kTransformNames.begin(), kTransformNames.end(), payload_) ==
            kTransformNames.end())
          return "unknown transform name";
        return std::nullopt;
      case TagFamily::kSuffixTransform:
        if (!parse_suffix_name(payload_)) return "unknown suffix transform";
        return std::nullopt;
    }
    return "bad family";
  }

  TagFamily family_ = TagFamily::kKeep;
  std::string payload_;
};

using EditSequence = std::vector<EditTag>;

inline EditSequence all_keep(std::size_t n) { return EditSequence(n, EditTag::keep()); }

inline bool is_all_keep(const EditSequence& e) {
  return std::all_of(e.begin(), e.end(), [](const EditTag& t) { return t.is_keep(); });
}

// Every tag named by the appendix tables other than the open APPEND/REPLACE
// inventories, in table order.
inline std::vector<EditTag> closed_class_tags() {
  std::vector<EditTag> out = {EditTag::keep(), EditTag::del(), EditTag::merge("HYPHEN"),
                              EditTag::merge("SPACE")};
  for (auto n : kSuffixReplaceNames) out.push_back(EditTag::suffix(std::string(n)));
  for (auto n : kSuffixRemove) out.push_back(EditTag::suffix("REMOVE_" + std::string(n)));
  for (auto n : kSuffixAppend) out.push_back(EditTag::suffix("APPEND_" + std::string(n)));
  for (auto n : kTransformNames) out.push_back(EditTag::transform(std::string(n)));
  out.push_back(EditTag::unknown());
  return out;
}

// ---------------------------------------------------------------------------
// TagSet
// ---------------------------------------------------------------------------

// The edit space: dense ids in file order.
class TagSet {
 public:
  TagSet() = default;

  static TagSet from_strings(const std::vector<std::string>& lines,
                             std::string_view origin = "<memory>") {
    TagSet ts;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto where = std::string(origin) + ":" + std::to_string(i + 1);
      EditTag tag;
      try {
        tag = EditTag::parse(lines[i]);
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
      ts.add(tag, where);
    }
    ts.check_required(origin);
    return ts;
  }

  static TagSet from_tags(const std::vector<EditTag>& tags) {
    TagSet ts;
    for (const auto& t : tags) ts.add(t, "<memory>");
    ts.check_required("<memory>");
    return ts;
  }

  std::size_t size() const { return tags_.size(); }
  const EditTag& tag(std::size_t id) const { return tags_.at(id); }
  const std::vector<EditTag>& tags() const { return tags_; }

  std::optional<std::size_t> id(std::string_view tag_string) const {
    auto it = index_.find(std::string(tag_string));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> id(const EditTag& t) const { return id(t.str()); }

  bool contains(const EditTag& t) const { return id(t).has_value(); }
  bool has_append(const std::string& tok) const { return appends_.count(tok) != 0; }
  bool has_replace(const std::string& tok) const { return replaces_.count(tok) != 0; }

  std::size_t keep_id() const { return *id("$KEEP"); }
  std::size_t unknown_id() const { return *id("$UNKNOWN"); }

  // Copy restricted to tags whose family passes `keep`. KEEP, DELETE and
  // UNKNOWN always survive.
  template <typename Pred>
  TagSet filtered(Pred keep) const {
    std::vector<EditTag> out;
    for (const auto& t : tags_) {
      auto f = t.family();
      if (f == TagFamily::kKeep || f == TagFamily::kDelete || f == TagFamily::kUnknown || keep(t))
        out.push_back(t);
    }
    return from_tags(out);
  }

  std::string to_text() const {
    std::string out;
    for (const auto& t : tags_) {
      out += t.str();
      out += '\n';
    }
    return out;
  }

 private:
  void add(const EditTag& t, const std::string& where) {
    auto s = t.str();
    if (index_.count(s)) throw DataError(where + ": duplicate tag " + s);
    index_.emplace(s, tags_.size());
    tags_.push_back(t);
    if (t.family() == TagFamily::kAppend) appends_.insert(t.payload());
    if (t.family() == TagFamily::kReplace) replaces_.insert(t.payload());
  }

  void check_required(std::string_view origin) const {
    for (const char* req : {"$KEEP", "$DELETE", "$UNKNOWN"})
      if (!index_.count(req))
        throw DataError(std::string(origin) + ": tagset lacks required tag " + req);
  }

  std::vector<EditTag> tags_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_set<std::string> appends_;
  std::unordered_set<std::string> replaces_;
};

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("read error on " + path);
  return lines;
}

// One tag per line; ids follow line order. Blank trailing lines are ignored.
inline TagSet load_tagset(const std::string& path) {
  auto lines = read_lines(path);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return TagSet::from_strings(lines, path);
}

inline EditSequence parse_edit_sequence(std::string_view line) {
  EditSequence out;
  for (const auto& tok : tokenize(line)) out.push_back(EditTag::parse(tok));
  return out;
}

inline std::string render_edit_sequence(const EditSequence& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += ' ';
    out += e[i].str();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alignment and multi-head labels
// ---------------------------------------------------------------------------

// Half-open range of target token indices.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct AlignedPair {
  Sentence source;
  Sentence target;
  // alignment[i] is the target span attached to source token i. Spans are in
  // order, non-overlapping and jointly cover the target.
  std::vector<Span> alignment;

  Sentence span_tokens(std::size_t i) const {
    const auto& s = alignment.at(i);
    return Sentence(target.begin() + static_cast<std::ptrdiff_t>(s.begin),
                    target.begin() + static_cast<std::ptrdiff_t>(s.end));
  }
};

struct MultiHeadLabels {
  std::vector<int> deletion;
  std::vector<int> insertion;
  std::vector<int> substitution;
  std::vector<int> merge;
  std::vector<int> transformation;
  std::vector<int> detection;
  EditSequence correction;

  std::size_t size() const { return correction.size(); }
};

}  // namespace gectag
