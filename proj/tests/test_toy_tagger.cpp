#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gectag/toy_tagger.hpp"
#include "support/corpus.hpp"

using namespace gectag;

namespace {

TagSet tiny_tags() {
  return TagSet::from_strings({"$KEEP", "$DELETE", "$APPEND_the", "$REPLACE_a", "$TRANSFORM_AGREEMENT_PLURAL",
                               "$UNKNOWN"});
}

std::vector<LabeledExample> tiny_examples() {
  auto mk = [](const std::string& s, const std::string& e) {
    auto toks = tokenize(s);
    return LabeledExample{toks, derive_labels(toks, parse_edit_sequence(e))};
  };
  return {mk("cat sat on mat", "$APPEND_the $KEEP $APPEND_the $KEEP"),
          mk("the the dog", "$DELETE $KEEP $KEEP"),
          mk("two cat", "$KEEP $TRANSFORM_AGREEMENT_PLURAL"),
          mk("an dog ran", "$REPLACE_a $KEEP $UNKNOWN")};
}

MultiHeadModel random_model(std::uint64_t seed, std::size_t heads = 7, double lambda = 0.5, std::uint32_t dim = 64) {
  MultiHeadModel m(FeatureEncoder(dim), tiny_tags(), heads, lambda);
  Rng rng(seed);
  for (auto& h : m.heads)
    for (double& w : h.weights) w = (rng.uniform() - 0.5) * 0.6;
  return m;
}

std::vector<const EncodedSentence*> ptrs(const std::vector<EncodedSentence>& v) {
  std::vector<const EncodedSentence*> out;
  for (const auto& s : v) out.push_back(&s);
  return out;
}

}  // namespace

TEST(FeatureEncoder, DeterministicAndInRange) {
  FeatureEncoder enc(128);
  const auto s = tokenize("The cat sat");
  const auto a = enc.encode(s), b = enc.encode(s);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 3u);
  for (const auto& f : a)
    for (auto idx : f) EXPECT_LT(idx, 128u);
  // same token in the same context gives the same features
  EXPECT_EQ(enc.encode(tokenize("x a b"))[1], enc.encode(tokenize("x a b"))[1]);
  EXPECT_NE(enc.encode(tokenize("x a b"))[1], enc.encode(tokenize("y a b"))[1]);
  EXPECT_THROW(FeatureEncoder(16, {"token", "wat"}), DataError);
}

TEST(Forward, ZeroWeightsGiveUniformDistributions) {
  MultiHeadModel m(FeatureEncoder(32), tiny_tags());
  const auto d = forward(m, m.encoder.encode(tokenize("a b")));
  ASSERT_EQ(d.size(), 2u);
  ASSERT_EQ(d[0].size(), 7u);
  for (double p : d[0][0]) EXPECT_DOUBLE_EQ(p, 1.0 / 6);
  for (std::size_t k = 1; k < 7; ++k) {
    EXPECT_DOUBLE_EQ(d[0][k][0], 0.5);
    EXPECT_DOUBLE_EQ(d[0][k][1], 0.5);
  }
}

TEST(Forward, HandSetBinaryHeadMatchesClosedForm) {
  MultiHeadModel m(FeatureEncoder(8, {"bias"}), tiny_tags());
  const auto f = m.encoder.encode({"w"});
  ASSERT_EQ(f[0].size(), 1u);
  auto& det = m.heads.back();
  ASSERT_EQ(det.kind, HeadKind::kDetection);
  det.w(f[0][0], 0) = 0.0;
  det.w(f[0][0], 1) = std::log(3.0);
  const auto d = forward(m, f);
  EXPECT_NEAR(d[0].back()[0], 0.25, 1e-12);
  EXPECT_NEAR(d[0].back()[1], 0.75, 1e-12);
}

TEST(Forward, EveryHeadSumsToOne) {
  auto m = random_model(4);
  for (const auto& tok : forward(m, m.encoder.encode(tokenize("some words to check here"))))
    for (const auto& head : tok) {
      double s = 0;
      for (double p : head) s += p;
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
}

TEST(Forward, FeatureOutsideDimensionIsAnError) {
  MultiHeadModel m(FeatureEncoder(8), tiny_tags());
  EXPECT_THROW(forward(m, {{9}}), DataError);
}

TEST(TotalLoss, UniformModelAuxLossesAreLn2) {
  MultiHeadModel m(FeatureEncoder(32), tiny_tags());
  const auto data = encode_dataset(m, tiny_examples());
  const auto losses = head_losses(m, ptrs(data));
  EXPECT_NEAR(losses[0], std::log(6.0), 1e-12);
  for (std::size_t k = 1; k < losses.size(); ++k) EXPECT_NEAR(losses[k], std::log(2.0), 1e-12);
  m.lambda = 0;
  EXPECT_NEAR(total_loss(m, data), losses[0], 1e-12);
}

TEST(TotalLoss, AffineInLambda) {
  auto m = random_model(9);
  const auto data = encode_dataset(m, tiny_examples());
  const auto losses = head_losses(m, ptrs(data));
  double aux = 0;
  for (std::size_t k = 1; k < losses.size(); ++k) aux += losses[k];
  for (double lam : {0.0, 0.25, 0.5, 1.0}) {
    m.lambda = lam;
    EXPECT_NEAR(total_loss(m, data), losses[0] + lam * aux, 1e-12) << lam;
  }
}

TEST(TotalLoss, EmptyBatchIsAnError) {
  auto m = random_model(1);
  EXPECT_THROW(total_loss(m, std::vector<const EncodedSentence*>{}), DataError);
}

TEST(Gradients, MatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t heads : {5u, 7u}) {
      auto m = random_model(seed, heads, 0.3);
      const auto data = encode_dataset(m, tiny_examples());
      EXPECT_LT(gradient_check(m, ptrs(data)), 1e-4) << seed << " " << heads;
    }
  }
}

TEST(Gradients, LambdaZeroLeavesAuxHeadsAlone) {
  auto m = random_model(2, 7, 0.0);
  const auto data = encode_dataset(m, tiny_examples());
  const auto g = gradients(m, ptrs(data));
  for (std::size_t k = 1; k < g.size(); ++k)
    for (double v : g[k]) ASSERT_EQ(v, 0.0);
}

TEST(Gradients, NearZeroAtConfidentCorrectPredictions) {
  MultiHeadModel m(FeatureEncoder(8, {"bias"}), tiny_tags());
  const auto f = m.encoder.encode({"w"})[0][0];
  for (auto& h : m.heads) h.w(f, 0) = 40.0;  // class 0 everywhere: KEEP, and "no" on every binary head
  auto ex = LabeledExample{{"w"}, derive_labels({"w"}, all_keep(1))};
  const auto data = encode_dataset(m, {ex});
  double norm = 0;
  for (const auto& g : gradients(m, ptrs(data)))
    for (double v : g) norm += v * v;
  EXPECT_LT(std::sqrt(norm), 1e-12);
}

TEST(Train, LossDecreasesOnNoisyCorpus) {
  const auto& res = support::resources();
  support::SentenceGrammar g(res);
  auto examples = support::label_pairs(support::noisy_pairs(g.corpus(200, 21), support::learnable_profile(), res), res);
  MultiHeadModel m(FeatureEncoder(1u << 12), compact_tagset(res.tagset, examples));
  const auto data = encode_dataset(m, examples);
  TrainOptions opt;
  opt.epochs = 5;
  const auto r = train(m, data, opt);
  ASSERT_EQ(r.loss_curve.size(), 6u);
  EXPECT_LT(r.loss_curve.back(), r.loss_curve.front());
  for (std::size_t i = 1; i < r.loss_curve.size(); ++i) EXPECT_LT(r.loss_curve[i], r.loss_curve[i - 1]);
}

TEST(Train, ZeroLearningRateChangesNothing) {
  auto m = random_model(3);
  const auto before = m.heads;
  const auto data = encode_dataset(m, tiny_examples());
  TrainOptions opt;
  opt.learning_rate = 0;
  train(m, data, opt);
  for (std::size_t k = 0; k < m.heads.size(); ++k) EXPECT_EQ(m.heads[k].weights, before[k].weights);
}

TEST(Train, SameSeedSameWeights) {
  auto a = random_model(0), b = random_model(0);
  const auto data = encode_dataset(a, tiny_examples());
  TrainOptions opt;
  opt.seed = 42;
  opt.batch_size = 1;
  train(a, data, opt);
  train(b, data, opt);
  for (std::size_t k = 0; k < a.heads.size(); ++k) EXPECT_EQ(a.heads[k].weights, b.heads[k].weights);
}

TEST(Train, DivergenceNamesTheStep) {
  auto m = random_model(0);
  auto data = encode_dataset(m, tiny_examples());
  m.heads[0].weights[data[1].features[0][0] * m.heads[0].classes] = std::nan("");
  TrainOptions opt;
  opt.batch_size = 1;
  try {
    train(m, data, opt);
    FAIL();
  } catch (const TrainingDiverged& e) {
    EXPECT_GE(e.step(), 1u);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(Train, EmptyDatasetIsAnError) {
  auto m = random_model(0);
  EXPECT_THROW(train(m, {}, {}), DataError);
}

TEST(Predict, NoTweaksEqualsArgmax) {
  auto m = random_model(6);
  const auto s = tokenize("an dog ran to the cat");
  const auto dist = forward(m, m.encoder.encode(s));
  const auto pred = predict(m, s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& p = dist[i][0];
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    EXPECT_EQ(pred[i], m.tagset.tag(best));
  }
}

TEST(Predict, LogitShiftDoesNotChangeOutput) {
  auto m = random_model(8);
  const auto s = tokenize("cat sat on mat");
  const auto before = predict(m, s);
  const auto f = m.encoder.encode(s);
  // the bias feature fires on every token; shifting its whole row shifts all logits equally
  const auto bias = f[0].back();
  for (std::size_t c = 0; c < m.heads[0].classes; ++c) m.heads[0].w(bias, c) += 3.7;
  EXPECT_EQ(predict(m, s), before);
}

TEST(Predict, DominantTweaksYieldAllKeep) {
  auto m = random_model(12);
  const auto s = tokenize("an dog ran to the the cat");
  EXPECT_TRUE(is_all_keep(predict(m, s, {1.0, 0.0})));
  EXPECT_TRUE(is_all_keep(predict(m, s, {0.0, 1.0})));
  EXPECT_TRUE(is_all_keep(predict(m, s, {0.0, 1.5})));
  EXPECT_EQ(predict(m, s, {0.35, 0.66}).size(), s.size());
}

TEST(Serialization, SaveLoadSaveIsByteStable) {
  auto m = random_model(13, 5, 0.25);
  std::ostringstream a;
  save_model(m, a);
  std::istringstream in(a.str());
  auto back = load_model(in);
  std::ostringstream b;
  save_model(back, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(back.lambda, 0.25);
  EXPECT_EQ(back.heads.size(), 5u);
  EXPECT_EQ(back.tagset.to_text(), m.tagset.to_text());
  const auto s = tokenize("cat sat");
  EXPECT_EQ(predict(back, s), predict(m, s));
}

TEST(Serialization, RejectsGarbage) {
  std::istringstream junk("definitely not a model");
  EXPECT_THROW(load_model(junk), DataError);
  auto m = random_model(1);
  std::ostringstream a;
  save_model(m, a);
  std::istringstream cut(a.str().substr(0, a.str().size() / 2));
  EXPECT_THROW(load_model(cut), DataError);
}

TEST(HeadLayout, OnlyFiveOrSeven) {
  EXPECT_EQ(head_layout(5).size(), 5u);
  EXPECT_EQ(head_layout(7).size(), 7u);
  EXPECT_THROW(head_layout(6), DataError);
}
