#include <gtest/gtest.h>

#include "gectag/edit2seq.hpp"
#include "gectag/seq2edit.hpp"
#include "support/corpus.hpp"

using namespace gectag;

namespace {

const Lexicon& lex() { return support::resources().lexicon; }
const TagSet& tags() { return support::resources().tagset; }

Sentence apply(const std::string& src, const std::string& edits) {
  return edit2seq(tokenize(src), parse_edit_sequence(edits), lex());
}

Predictor oracle_for(const Sentence& target) {
  return [target](const Sentence& x) { return seq2edit(x, target, lex(), tags()); };
}

}  // namespace

TEST(ApplyTag, TokenLevelFamilies) {
  EXPECT_EQ(apply_tag("cat", std::nullopt, EditTag::keep(), lex()).tokens, (Sentence{"cat"}));
  EXPECT_TRUE(apply_tag("cat", std::nullopt, EditTag::del(), lex()).tokens.empty());
  EXPECT_EQ(apply_tag("cat", std::nullopt, EditTag::append("s"), lex()).tokens, (Sentence{"cat", "s"}));
  EXPECT_EQ(apply_tag("cat", std::nullopt, EditTag::replace("dog"), lex()).tokens, (Sentence{"dog"}));
  EXPECT_EQ(apply_tag("anything", std::nullopt, EditTag::unknown(), lex()).tokens, (Sentence{"anything"}));
  auto merged = apply_tag("well", Token("known"), EditTag::merge("HYPHEN"), lex());
  EXPECT_EQ(merged.tokens, (Sentence{"well-known"}));
  EXPECT_TRUE(merged.consumed_next);
  EXPECT_EQ(apply_tag("over", Token("all"), EditTag::merge("SPACE"), lex()).tokens, (Sentence{"overall"}));
}

TEST(ApplyTag, CharacterLevelFamilies) {
  auto t = [](const std::string& tok, const std::string& tag) {
    return apply_tag(tok, std::nullopt, EditTag::parse(tag), lex()).tokens;
  };
  EXPECT_EQ(t("go", "$TRANSFORM_VERB_VB_VBD"), (Sentence{"went"}));
  EXPECT_EQ(t("eats", "$TRANSFORM_VERB_VBZ_VBG"), (Sentence{"eating"}));
  EXPECT_EQ(t("mOSCOW", "$TRANSFORM_CASE_CAPITAL"), (Sentence{"Moscow"}));
  EXPECT_EQ(t("Nasa", "$TRANSFORM_CASE_UPPER"), (Sentence{"NASA"}));
  EXPECT_EQ(t("mice", "$TRANSFORM_AGREEMENT_SINGULAR"), (Sentence{"mouse"}));
  EXPECT_EQ(t("e-mail", "$TRANSFORM_SPLIT_HYPHEN"), (Sentence{"e", "mail"}));
  EXPECT_EQ(t("easy", "$SUFFIXTRANSFORM_Y_TO_ILY"), (Sentence{"easily"}));
  EXPECT_EQ(t("darkness", "$SUFFIXTRANSFORM_REMOVE_ness"), (Sentence{"dark"}));
  EXPECT_EQ(t("like", "$SUFFIXTRANSFORM_APPEND_wise"), (Sentence{"likewise"}));
}

TEST(ApplyTag, InapplicableTagsThrowWithPosition) {
  try {
    apply_tag("blue", std::nullopt, EditTag::parse("$SUFFIXTRANSFORM_Y_TO_ILY"), lex(), 3);
    FAIL();
  } catch (const TagApplicationError& e) {
    EXPECT_EQ(e.token_index, 3u);
    EXPECT_NE(std::string(e.what()).find("$SUFFIXTRANSFORM_Y_TO_ILY"), std::string::npos);
  }
  EXPECT_THROW(apply_tag("last", std::nullopt, EditTag::merge("SPACE"), lex()), TagApplicationError);
  EXPECT_THROW(apply_tag("xyzzy", std::nullopt, EditTag::parse("$TRANSFORM_VERB_VB_VBD"), lex()), TagApplicationError);
  EXPECT_THROW(apply_tag("nohyphen", std::nullopt, EditTag::parse("$TRANSFORM_SPLIT_HYPHEN"), lex()),
               TagApplicationError);
}

TEST(Edit2Seq, SentenceExamples) {
  EXPECT_EQ(apply("a b", "$DELETE $KEEP"), (Sentence{"b"}));
  EXPECT_EQ(apply("He go to school", "$KEEP $TRANSFORM_VERB_VB_VBD $KEEP $KEEP"), tokenize("He went to school"));
  EXPECT_EQ(apply("over all fine", "$MERGE_SPACE $KEEP $KEEP"), tokenize("overall fine"));
  const auto x = tokenize("nothing to change here");
  EXPECT_EQ(edit2seq(x, all_keep(x.size()), lex()), x);
}

TEST(Edit2Seq, LengthMismatchIsAnError) {
  EXPECT_THROW(edit2seq({"a", "b"}, {EditTag::keep()}, lex()), DataError);
}

TEST(Edit2Seq, LenientModeKeepsTokenAndWarns) {
  std::vector<std::string> warnings;
  auto out = edit2seq_lenient(tokenize("blue sky"), parse_edit_sequence("$SUFFIXTRANSFORM_Y_TO_ILY $KEEP"), lex(),
                              &warnings);
  EXPECT_EQ(out, tokenize("blue sky"));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("token 0"), std::string::npos);
}

TEST(Refine, AllKeepPredictorStopsAfterOneCall) {
  const auto x = tokenize("fine as it is");
  auto r = refine(x, [](const Sentence& s) { return all_keep(s.size()); }, lex());
  EXPECT_EQ(r.output, x);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.edit_passes, 0);
}

TEST(Refine, TwoAppendsNeedTwoPasses) {
  const auto src = tokenize("I went school");
  const auto tgt = tokenize("I went to the school");
  // One pass can only append "to"; the second pass appends "the".
  ASSERT_EQ(render_edit_sequence(seq2edit(src, tgt, lex(), tags())), "$KEEP $APPEND_to $KEEP");
  auto r = refine(src, oracle_for(tgt), lex());
  EXPECT_EQ(r.output, tgt);
  EXPECT_EQ(r.edit_passes, 2);
  EXPECT_EQ(r.iterations, 3);  // the third call confirms the fixpoint

  RefineOptions one;
  one.max_iters = 1;
  auto partial = refine(src, oracle_for(tgt), lex(), one);
  EXPECT_EQ(partial.output, tokenize("I went to school"));
  EXPECT_NE(partial.output, tgt);
}

TEST(Refine, StrictModeReportsPartialResult) {
  RefineOptions strict;
  strict.strict = true;
  auto bad = [](const Sentence& s) {
    EditSequence e = all_keep(s.size());
    e[0] = EditTag::parse("$TRANSFORM_SPLIT_HYPHEN");
    return e;
  };
  try {
    refine(tokenize("plain words"), bad, lex(), strict);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("plain words"), std::string::npos);
  }
  auto lenient = refine(tokenize("plain words"), bad, lex());
  EXPECT_EQ(lenient.output, tokenize("plain words"));
  EXPECT_FALSE(lenient.warnings.empty());
}

TEST(Refine, WrongLengthPredictorIsRejected) {
  EXPECT_THROW(refine({"a", "b"}, [](const Sentence&) { return all_keep(1); }, lex()), DataError);
}
