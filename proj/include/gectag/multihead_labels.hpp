#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "gectag/core_types.hpp"

namespace gectag {

// Seven per-token streams from one correction sequence. UNKNOWN marks a
// token as erroneous (detection) without assigning it to any edit type.
inline MultiHeadLabels derive_labels(const Sentence& source, const EditSequence& edits) {
  if (edits.size() != source.size())
    throw DataError("edit sequence length " + std::to_string(edits.size()) +
                    " does not match source length " + std::to_string(source.size()));
  const std::size_t n = edits.size();
  MultiHeadLabels l;
  l.deletion.assign(n, 0);
  l.insertion.assign(n, 0);
  l.substitution.assign(n, 0);
  l.merge.assign(n, 0);
  l.transformation.assign(n, 0);
  l.detection.assign(n, 0);
  l.correction = edits;
  for (std::size_t i = 0; i < n; ++i) {
    switch (edits[i].family()) {
      case TagFamily::kKeep: continue;
      case TagFamily::kDelete: l.deletion[i] = 1; break;
      case TagFamily::kAppend: l.insertion[i] = 1; break;
      case TagFamily::kReplace: l.substitution[i] = 1; break;
      case TagFamily::kMerge: l.merge[i] = 1; break;
      case TagFamily::kTransform:
      case TagFamily::kSuffixTransform: l.transformation[i] = 1; break;
      case TagFamily::kUnknown: break;
    }
    l.detection[i] = 1;
  }
  return l;
}

// The six binary streams in head order: deletion, insertion, substitution,
// merge, transformation, detection.
inline std::vector<const std::vector<int>*> binary_streams(const MultiHeadLabels& l) {
  return {&l.deletion, &l.insertion, &l.substitution, &l.merge, &l.transformation, &l.detection};
}

struct LabeledExample {
  Sentence tokens;
  MultiHeadLabels labels;
};

// One JSON-lines record.
inline nlohmann::json to_json(const LabeledExample& ex) {
  nlohmann::json j;
  j["tokens"] = ex.tokens;
  std::vector<std::string> corr;
  corr.reserve(ex.labels.correction.size());
  for (const auto& t : ex.labels.correction) corr.push_back(t.str());
  j["correction"] = corr;
  j["deletion"] = ex.labels.deletion;
  j["insertion"] = ex.labels.insertion;
  j["substitution"] = ex.labels.substitution;
  j["merge"] = ex.labels.merge;
  j["transformation"] = ex.labels.transformation;
  j["detection"] = ex.labels.detection;
  return j;
}

inline LabeledExample labeled_example_from_json(const nlohmann::json& j) {
  LabeledExample ex;
  try {
    ex.tokens = j.at("tokens").get<Sentence>();
    for (const auto& s : j.at("correction")) ex.labels.correction.push_back(EditTag::parse(s.get<std::string>()));
    ex.labels.deletion = j.at("deletion").get<std::vector<int>>();
    ex.labels.insertion = j.at("insertion").get<std::vector<int>>();
    ex.labels.substitution = j.at("substitution").get<std::vector<int>>();
    ex.labels.merge = j.at("merge").get<std::vector<int>>();
    ex.labels.transformation = j.at("transformation").get<std::vector<int>>();
    ex.labels.detection = j.at("detection").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad labeled example: ") + e.what());
  }
  const auto n = ex.tokens.size();
  if (ex.labels.correction.size() != n)
    throw DataError("bad labeled example: correction length differs from tokens");
  for (const auto* s : binary_streams(ex.labels))
    if (s->size() != n) throw DataError("bad labeled example: label stream length differs from tokens");
  return ex;
}

}  // namespace gectag
