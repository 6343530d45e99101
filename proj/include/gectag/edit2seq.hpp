#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gectag/core_types.hpp"
#include "gectag/lexicon.hpp"

namespace gectag {

// A tag that cannot be applied to the token it labels.
struct TagApplicationError : DataError {
  TagApplicationError(std::size_t index, std::string tag, const std::string& why)
      : DataError("token " + std::to_string(index) + ": cannot apply " + tag + ": " + why),
        token_index(index),
        tag_string(std::move(tag)) {}
  std::size_t token_index;
  std::string tag_string;
};

struct AppliedTag {
  Sentence tokens;
  bool consumed_next = false;
};

namespace detail {

struct ApplyOutcome {
  AppliedTag result;
  std::string error;  // empty on success
};

inline ApplyOutcome fail(std::string why) { return {{}, std::move(why)}; }

inline ApplyOutcome single(std::string tok) {
  if (!is_valid_token(tok)) return fail("result is not a valid token");
  return {{{std::move(tok)}, false}, {}};
}

inline ApplyOutcome apply_suffix(const Token& token, const std::string& name) {
  auto edit = parse_suffix_name(name);
  if (!edit) return fail("unknown suffix transform");
  if (!token.ends_with(edit->remove) || token.size() <= edit->remove.size())
    return fail("token lacks suffix '" + edit->remove + "'");
  return single(token.substr(0, token.size() - edit->remove.size()) + edit->add);
}

inline ApplyOutcome apply_transform(const Token& token, const std::string& name,
                                    const Lexicon& lex) {
  if (name == "CASE_CAPITAL") {
    auto out = ascii_lower(token);
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return single(out);
  }
  if (name == "CASE_LOWER") return single(ascii_lower(token));
  if (name == "CASE_UPPER") return single(ascii_upper(token));
  if (name == "AGREEMENT_PLURAL") return single(lex.pluralize(token));
  if (name == "AGREEMENT_SINGULAR") {
    auto out = lex.singularize(token);
    if (out == token) return fail("token is not a recognizable plural");
    return single(out);
  }
  if (name == "SPLIT_HYPHEN") {
    auto pos = token.find('-');
    if (pos == std::string::npos) return fail("token has no hyphen");
    auto a = token.substr(0, pos), b = token.substr(pos + 1);
    if (!is_valid_token(a) || !is_valid_token(b)) return fail("hyphen split leaves an empty part");
    return {{{a, b}, false}, {}};
  }
  if (name.starts_with("VERB_")) {
    auto rest = name.substr(5);
    auto sep = rest.find('_');
    auto from = parse_verb_form(rest.substr(0, sep));
    auto to = parse_verb_form(rest.substr(sep + 1));
    if (!from || !to) return fail("malformed verb transform");
    auto out = lex.convert_verb(token, *from, *to);
    if (!out) return fail("'" + token + "' is not a known " + std::string(verb_form_name(*from)) + " form");
    return single(*out);
  }
  return fail("unknown transform");
}

inline ApplyOutcome try_apply(const Token& token, const std::optional<Token>& next,
                              const EditTag& tag, const Lexicon& lex) {
  switch (tag.family()) {
    case TagFamily::kKeep:
    case TagFamily::kUnknown:
      return {{{token}, false}, {}};
    case TagFamily::kDelete:
      return {{{}, false}, {}};
    case TagFamily::kAppend:
      return {{{token, tag.payload()}, false}, {}};
    case TagFamily::kReplace:
      return {{{tag.payload()}, false}, {}};
    case TagFamily::kMerge:
      if (!next) return fail("merge needs a following token");
      return {{{token + (tag.payload() == "HYPHEN" ? "-" : "") + *next}, true}, {}};
    case TagFamily::kTransform:
      return apply_transform(token, tag.payload(), lex);
    case TagFamily::kSuffixTransform:
      return apply_suffix(token, tag.payload());
  }
  return fail("bad tag family");
}

}  // namespace detail

// Result of applying one tag to one token. UNKNOWN copies the token.
inline AppliedTag apply_tag(const Token& token, const std::optional<Token>& next,
                            const EditTag& tag, const Lexicon& lex, std::size_t index = 0) {
  auto out = detail::try_apply(token, next, tag, lex);
  if (!out.error.empty()) throw TagApplicationError(index, tag.str(), out.error);
  return std::move(out.result);
}

// Applies an edit sequence left to right. Tokens consumed by a preceding
// MERGE are skipped, whatever their own tag.
inline Sentence edit2seq(const Sentence& source, const EditSequence& edits, const Lexicon& lex) {
  if (edits.size() != source.size())
    throw DataError("edit sequence length " + std::to_string(edits.size()) +
                    " does not match source length " + std::to_string(source.size()));
  Sentence out;
  out.reserve(source.size() + 2);
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::optional<Token> next;
    if (i + 1 < source.size()) next = source[i + 1];
    auto applied = apply_tag(source[i], next, edits[i], lex, i);
    for (auto& t : applied.tokens) out.push_back(std::move(t));
    if (applied.consumed_next) ++i;
  }
  return out;
}

// Like edit2seq, but an inapplicable tag leaves its token unchanged and is
// reported in `warnings` instead of throwing.
inline Sentence edit2seq_lenient(const Sentence& source, const EditSequence& edits,
                                 const Lexicon& lex, std::vector<std::string>* warnings) {
  if (edits.size() != source.size())
    throw DataError("edit sequence length " + std::to_string(edits.size()) +
                    " does not match source length " + std::to_string(source.size()));
  Sentence out;
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::optional<Token> next;
    if (i + 1 < source.size()) next = source[i + 1];
    auto applied = detail::try_apply(source[i], next, edits[i], lex);
    if (!applied.error.empty()) {
      if (warnings)
        warnings->push_back("token " + std::to_string(i) + ": cannot apply " + edits[i].str() +
                            ": " + applied.error);
      out.push_back(source[i]);
      continue;
    }
    for (auto& t : applied.result.tokens) out.push_back(std::move(t));
    if (applied.result.consumed_next) ++i;
  }
  return out;
}

using Predictor = std::function<EditSequence(const Sentence&)>;

struct RefineResult {
  Sentence output;
  int iterations = 0;   // predictor calls
  int edit_passes = 0;  // passes that changed the sentence
  std::vector<std::string> warnings;
};

struct RefineOptions {
  int max_iters = 4;
  bool strict = false;  // throw on inapplicable tags instead of skipping them
};

// Re-tags the current output until a pass predicts all-KEEP, leaves the
// sentence unchanged, or max_iters edit passes have been applied.
inline RefineResult refine(const Sentence& source, const Predictor& predictor, const Lexicon& lex,
                           const RefineOptions& opts = {}) {
  if (opts.max_iters < 1) throw DataError("max_iters must be >= 1");
  RefineResult r;
  r.output = source;
  while (r.edit_passes < opts.max_iters && !r.output.empty()) {
    auto edits = predictor(r.output);
    ++r.iterations;
    if (edits.size() != r.output.size())
      throw DataError("predictor returned " + std::to_string(edits.size()) + " tags for " +
                      std::to_string(r.output.size()) + " tokens");
    if (is_all_keep(edits)) break;
    Sentence next;
    if (opts.strict) {
      try {
        next = edit2seq(r.output, edits, lex);
      } catch (const TagApplicationError& e) {
        throw DataError(std::string(e.what()) + " (refinement pass " + std::to_string(r.iterations) +
                        ", partial result: \"" + join(r.output) + "\")");
      }
    } else {
      next = edit2seq_lenient(r.output, edits, lex, &r.warnings);
    }
    if (next == r.output) break;
    r.output = std::move(next);
    ++r.edit_passes;
  }
  return r;
}

}  // namespace gectag
