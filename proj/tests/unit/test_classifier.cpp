#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "n2rpp/classifier.hpp"
#include "n2rpp/error.hpp"
#include "oracles.hpp"

namespace n2rpp::clf {
namespace {

std::vector<PressureImage> labeled(std::size_t healthy, std::size_t acld) {
  std::vector<PressureImage> out;
  for (std::size_t i = 0; i < healthy + acld; ++i) {
    PressureImage img;
    img.grid = Grid(kImageRows, kImageCols);
    img.label = i < healthy ? Label::healthy : Label::acld;
    img.case_id = "C" + std::to_string(i);
    out.push_back(img);
  }
  return out;
}

std::vector<PressureImage> separable(std::size_t per_class, std::uint64_t seed) {
  synth::CohortSpec spec;
  spec.n_healthy = per_class;
  spec.n_acld = per_class;
  spec.acld_heel_delta = 0.6;
  spec.acld_toe_delta = 0.4;
  spec.sides = synth::SideMode::left;
  spec.seed = seed;
  std::vector<PressureImage> out;
  for (const auto& s : synth::generate_cohort(spec)) out.push_back(preprocess::to_image(s, Aggregation::max));
  return out;
}

TEST(Split, StratifiedCounts) {
  const auto images = labeled(50, 50);
  const Split s = split_dataset(images, {});
  EXPECT_EQ(s.train.size(), 70u);
  EXPECT_EQ(s.val.size(), 10u);
  EXPECT_EQ(s.test.size(), 20u);
  EXPECT_EQ(oracle::count_label(images, s.train, Label::healthy), 35u);
  EXPECT_EQ(oracle::count_label(images, s.val, Label::healthy), 5u);
  EXPECT_EQ(oracle::count_label(images, s.test, Label::healthy), 10u);
}

TEST(Split, DisjointExhaustiveReproducible) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto images = labeled(23 + seed, 31);
    SplitSpec spec;
    spec.seed = seed;
    const Split s = split_dataset(images, spec);
    std::multiset<std::size_t> all;
    for (const auto* part : {&s.train, &s.val, &s.test}) all.insert(part->begin(), part->end());
    EXPECT_EQ(all.size(), images.size());
    EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()).size(), images.size());
    EXPECT_EQ(*all.rbegin(), images.size() - 1);
    const Split again = split_dataset(images, spec);
    EXPECT_EQ(again.train, s.train);
    EXPECT_EQ(again.val, s.val);
    EXPECT_EQ(again.test, s.test);
  }
}

TEST(Split, Rejections) {
  EXPECT_THROW(split_dataset(labeled(9, 50), {}), Error);
  SplitSpec bad;
  bad.test = 0.3;
  EXPECT_THROW(split_dataset(labeled(20, 20), bad), Error);
}

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(compute_auc(std::vector{0.9, 0.1}, std::vector{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(compute_auc(std::vector{0.3, 0.3, 0.3}, std::vector{1, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(compute_auc(std::vector{0.1, 0.4, 0.35, 0.8}, std::vector{0, 0, 1, 1}), 0.75);
  EXPECT_THROW(compute_auc(std::vector{0.1, 0.2}, std::vector{1, 1}), Error);
}

TEST(Auc, MatchesPairwiseOracle) {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.index(49);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = std::round(rng.uniform() * 20.0) / 20.0;  // coarse grid forces ties
      labels[i] = rng.uniform() < 0.5 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    EXPECT_NEAR(compute_auc(scores, labels), oracle::pairwise_auc(scores, labels), 1e-12);
  }
}

TEST(Auc, MonotoneTransformInvariant) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> scores(30), warped(30);
    std::vector<int> labels(30);
    for (std::size_t i = 0; i < 30; ++i) {
      scores[i] = rng.uniform();
      warped[i] = std::exp(3.0 * scores[i]) - 7.0;
      labels[i] = static_cast<int>(i % 2);
    }
    EXPECT_DOUBLE_EQ(compute_auc(scores, labels), compute_auc(warped, labels));
  }
}

TEST(Accuracy, RecomputableFromScores) {
  const std::vector<double> scores{0.2, 0.5, 0.7, 0.49};
  const std::vector<int> labels{0, 1, 0, 1};
  EXPECT_DOUBLE_EQ(accuracy(scores, labels), 0.5);
  EXPECT_DOUBLE_EQ(accuracy(scores, labels, 0.8), 0.5);
  EXPECT_DOUBLE_EQ(accuracy(scores, labels, 0.1), 0.5);
  EXPECT_DOUBLE_EQ(accuracy(scores, labels, 0.45), 0.75);
}

TEST(Model, UntrainedRejectedAndScoresBounded) {
  const auto images = separable(2, 1);
  ClassifierModel fresh(3);
  EXPECT_THROW(fresh.predict(images[0]), Error);
  fresh.mark_trained();
  for (const auto& img : images) {
    const double s = fresh.predict(img);
    EXPECT_GT(s, 0.0);
    EXPECT_LT(s, 1.0);
    EXPECT_EQ(fresh.predict(img), s);
  }
  EXPECT_EQ(fresh.network().output_shape(), Shape({1}));
}

class SeparableTraining : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    images_ = separable(60, 77);
    split_ = split_dataset(images_, {});
    ClfTrainConfig cfg;
    cfg.epochs = 50;
    result_ = std::make_unique<ClfTrainResult>(
        train_classifier(select(images_, split_.train), select(images_, split_.val), cfg));
  }
  static void TearDownTestSuite() { result_.reset(); }

  static std::vector<PressureImage> images_;
  static Split split_;
  static std::unique_ptr<ClfTrainResult> result_;
};

std::vector<PressureImage> SeparableTraining::images_;
Split SeparableTraining::split_;
std::unique_ptr<ClfTrainResult> SeparableTraining::result_;

TEST_F(SeparableTraining, ReachesHighValidationAccuracy) {
  EXPECT_GE(result_->best_val_accuracy, 0.95);
  ASSERT_FALSE(result_->history.empty());
  const auto& best = result_->history.at(result_->best_epoch - 1);
  EXPECT_EQ(best.epoch, result_->best_epoch);
  EXPECT_EQ(best.val_accuracy, result_->best_val_accuracy);
  EXPECT_GE(best.train_accuracy, best.val_accuracy - 0.05);
  for (const auto& e : result_->history) {
    if (e.epoch < result_->best_epoch) EXPECT_LT(e.val_accuracy, result_->best_val_accuracy);
    EXPECT_LE(e.val_accuracy, result_->best_val_accuracy);
  }
}

TEST_F(SeparableTraining, HealthyScoresAboveAcld) {
  const auto test = select(images_, split_.test);
  double healthy = 0.0, acld = 0.0;
  std::size_t nh = 0, na = 0;
  for (const auto& img : test) {
    const double s = result_->model.predict(img);
    (img.label == Label::healthy ? healthy : acld) += s;
    ++(img.label == Label::healthy ? nh : na);
  }
  EXPECT_GT(healthy / nh, acld / na);
}

TEST_F(SeparableTraining, EvaluateIsConsistent) {
  const auto test = select(images_, split_.test);
  const EvalReport r = evaluate(result_->model, test);
  EXPECT_EQ(r.n, test.size());
  ASSERT_EQ(r.scores.size(), test.size());
  ASSERT_TRUE(r.auc.has_value());
  EXPECT_NEAR(*r.auc, oracle::pairwise_auc(r.scores, r.labels), 1e-9);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < r.n; ++i) correct += (r.scores[i] >= r.threshold ? 1 : 0) == r.labels[i];
  EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(correct) / r.n);
}

TEST_F(SeparableTraining, DeterministicCheckpoint) {
  ClfTrainConfig cfg;
  cfg.epochs = 3;
  const auto a = train_classifier(select(images_, split_.train), select(images_, split_.val), cfg);
  const auto b = train_classifier(select(images_, split_.train), select(images_, split_.val), cfg);
  EXPECT_EQ(a.model.network().params(), b.model.network().params());
  EXPECT_EQ(a.best_epoch, b.best_epoch);
}

TEST_F(SeparableTraining, RebuildPassRate) {
  auto healthy_looking = select(images_, split_.test);
  std::erase_if(healthy_looking, [](const PressureImage& i) { return i.label != Label::healthy; });
  const double rate = evaluate_rebuilds(result_->model, healthy_looking);
  auto reversed = healthy_looking;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(evaluate_rebuilds(result_->model, reversed), rate);
  EXPECT_GE(rate, 0.0);
  EXPECT_LE(rate, 1.0);
}

TEST(Rebuilds, AllConfidentMeansFullRate) {
  ClassifierModel m(4);
  for (auto& p : m.mutable_network().mutable_params()) p.tensor.fill(0.0);
  m.mutable_network().mutable_params().at("fc2.bias").fill(std::log(99.0));  // sigmoid -> 0.99
  m.mark_trained();
  EXPECT_DOUBLE_EQ(evaluate_rebuilds(m, labeled(0, 5)), 1.0);
}

}  // namespace
}  // namespace n2rpp::clf
