#include <gtest/gtest.h>

#include "gectag/multihead_labels.hpp"
#include "support/corpus.hpp"

using namespace gectag;

namespace {

// Expected active stream per family: 0 deletion, 1 insertion, 2 substitution,
// 3 merge, 4 transformation; -1 none.
int expected_stream(TagFamily f) {
  switch (f) {
    case TagFamily::kDelete: return 0;
    case TagFamily::kAppend: return 1;
    case TagFamily::kReplace: return 2;
    case TagFamily::kMerge: return 3;
    case TagFamily::kTransform:
    case TagFamily::kSuffixTransform: return 4;
    default: return -1;
  }
}

}  // namespace

TEST(DeriveLabels, AllKeepGivesZeroStreams) {
  auto l = derive_labels({"a", "b", "c"}, all_keep(3));
  for (const auto* s : binary_streams(l)) EXPECT_EQ(*s, (std::vector<int>{0, 0, 0}));
}

TEST(DeriveLabels, DeletionExample) {
  auto l = derive_labels({"a", "b"}, parse_edit_sequence("$DELETE $KEEP"));
  EXPECT_EQ(l.deletion, (std::vector<int>{1, 0}));
  EXPECT_EQ(l.detection, (std::vector<int>{1, 0}));
  EXPECT_EQ(l.insertion, (std::vector<int>{0, 0}));
  EXPECT_EQ(l.transformation, (std::vector<int>{0, 0}));
}

TEST(DeriveLabels, SuffixTransformIsATransformation) {
  auto l = derive_labels({"an", "easy"}, parse_edit_sequence("$KEEP $SUFFIXTRANSFORM_Y_TO_ILY"));
  EXPECT_EQ(l.transformation, (std::vector<int>{0, 1}));
  EXPECT_EQ(l.detection, (std::vector<int>{0, 1}));
}

TEST(DeriveLabels, UnknownSetsDetectionOnly) {
  auto l = derive_labels({"x"}, {EditTag::unknown()});
  EXPECT_EQ(l.detection, (std::vector<int>{1}));
  for (auto* s : {&l.deletion, &l.insertion, &l.substitution, &l.merge, &l.transformation})
    EXPECT_EQ(*s, (std::vector<int>{0}));
}

TEST(DeriveLabels, EveryTagOfTheDefaultSpaceMapsToOneStream) {
  const auto& ts = support::resources().tagset;
  for (const auto& tag : ts.tags()) {
    auto l = derive_labels({"w"}, {tag});
    const auto streams = binary_streams(l);
    int active = -1, count = 0;
    for (int k = 0; k < 5; ++k)
      if ((*streams[static_cast<std::size_t>(k)])[0]) {
        active = k;
        ++count;
      }
    ASSERT_LE(count, 1) << tag.str();
    ASSERT_EQ(active, expected_stream(tag.family())) << tag.str();
    ASSERT_EQ(l.detection[0], tag.is_keep() ? 0 : 1) << tag.str();
  }
}

TEST(DeriveLabels, LengthMismatchIsAnError) { EXPECT_THROW(derive_labels({"a"}, all_keep(2)), DataError); }

TEST(LabeledExampleJson, RoundTrips) {
  LabeledExample ex{{"He", "go", "school"}, derive_labels({"He", "go", "school"},
                                                          parse_edit_sequence("$KEEP $TRANSFORM_VERB_VB_VBD $DELETE"))};
  const auto j = to_json(ex);
  EXPECT_EQ(j.dump(),
            R"({"correction":["$KEEP","$TRANSFORM_VERB_VB_VBD","$DELETE"],"deletion":[0,0,1],"detection":[0,1,1],)"
            R"("insertion":[0,0,0],"merge":[0,0,0],"substitution":[0,0,0],"tokens":["He","go","school"],)"
            R"("transformation":[0,1,0]})");
  const auto back = labeled_example_from_json(j);
  EXPECT_EQ(back.tokens, ex.tokens);
  EXPECT_EQ(back.labels.correction, ex.labels.correction);
  EXPECT_EQ(back.labels.detection, ex.labels.detection);
}

TEST(LabeledExampleJson, RejectsInconsistentRecords) {
  auto j = to_json(LabeledExample{{"a", "b"}, derive_labels({"a", "b"}, all_keep(2))});
  j["merge"] = std::vector<int>{0};
  EXPECT_THROW(labeled_example_from_json(j), DataError);
  j.erase("merge");
  EXPECT_THROW(labeled_example_from_json(j), DataError);
}
