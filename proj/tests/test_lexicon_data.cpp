#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "gectag/lexicon.hpp"
#include "support/corpus.hpp"

using namespace gectag;
namespace fs = std::filesystem;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST(Patterns, PrepositionsIncludeEmptyEntry) {
  const auto& p = support::resources().patterns;
  for (const char* w : {"", "of", "with", "at"}) EXPECT_TRUE(has(p.prepositions, w)) << '"' << w << '"';
}

TEST(Patterns, DeterminersAreExactlyTheSixEntries) {
  auto d = support::resources().patterns.determiners;
  std::sort(d.begin(), d.end());
  EXPECT_EQ(d, (std::vector<std::string>{"", "a", "an", "that", "the", "this"}));
}

TEST(Patterns, LetterMapAndFriends) {
  const auto& p = support::resources().patterns;
  EXPECT_NE(std::find(p.letter_patterns.begin(), p.letter_patterns.end(), std::pair<std::string, std::string>{"kn", "n"}),
            p.letter_patterns.end());
  EXPECT_FALSE(p.vowel_combinations.empty());
  EXPECT_FALSE(p.similar_sounds.empty());
  EXPECT_EQ(p.verb_types.size(), 12u);
  EXPECT_EQ(p.pos_types, (std::vector<std::string>{"NN", "NNS", "VB", "JJ", "JJR", "JJS", "RB"}));
}

TEST(Lexicon, VerbFormsConvertBothWays) {
  const auto& lex = support::resources().lexicon;
  EXPECT_GT(lex.verb_count(), 4000u);
  EXPECT_EQ(lex.convert_verb("went", VerbForm::kVBD, VerbForm::kVB), "go");
  EXPECT_EQ(lex.convert_verb("go", VerbForm::kVB, VerbForm::kVBZ), "goes");
  EXPECT_EQ(lex.convert_verb("taking", VerbForm::kVBG, VerbForm::kVBN), "taken");
  EXPECT_FALSE(lex.convert_verb("went", VerbForm::kVBZ, VerbForm::kVB));
}

TEST(Lexicon, PluralsUseIrregularListThenRules) {
  const auto& lex = support::resources().lexicon;
  EXPECT_EQ(lex.pluralize("child"), "children");
  EXPECT_EQ(lex.singularize("children"), "child");
  EXPECT_EQ(lex.pluralize("city"), "cities");
  EXPECT_EQ(lex.pluralize("box"), "boxes");
  EXPECT_EQ(lex.pluralize("day"), "days");
  EXPECT_EQ(lex.singularize("cities"), "city");
  EXPECT_EQ(pluralize_regular("bus"), "buses");
}

TEST(Manifest, DetectsTamperedFile) {
  const auto src = default_data_dir();
  const auto dir = fs::path(support::temp_path("data"));
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(src)) fs::copy_file(e.path(), dir / e.path().filename());
  EXPECT_NO_THROW(load_patterns(dir));
  {
    std::ofstream os(dir / "prepositions.txt", std::ios::app);
    os << "amid\n";
  }
  EXPECT_THROW(load_patterns(dir), DataError);
  fs::remove(dir / "prepositions.txt");
  EXPECT_THROW(load_patterns(dir), IoError);
}

TEST(Manifest, LoadsAreIdenticalAcrossRuns) {
  const auto a = load_patterns(default_data_dir());
  const auto b = load_patterns(default_data_dir());
  EXPECT_EQ(a.prepositions, b.prepositions);
  EXPECT_EQ(a.letter_patterns, b.letter_patterns);
  EXPECT_EQ(a.similar_sounds, b.similar_sounds);
}

TEST(DefaultTagset, CoversTheClosedClassInventory) {
  const auto& ts = support::resources().tagset;
  for (const auto& t : closed_class_tags()) EXPECT_TRUE(ts.contains(t)) << t.str();
  EXPECT_TRUE(ts.has_append("the"));
  EXPECT_TRUE(ts.has_replace("of"));
}
