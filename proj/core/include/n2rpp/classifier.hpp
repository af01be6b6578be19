#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "n2rpp/nn/adam.hpp"
#include "n2rpp/nn/network.hpp"
#include "n2rpp/types.hpp"

namespace n2rpp::clf {

struct ClassifierShape {
  std::size_t rows = kImageRows;
  std::size_t cols = kImageCols;
  std::size_t channels1 = 8;
  std::size_t channels2 = 16;
  std::size_t hidden = 64;
};

// conv(1->c1)+lrelu, conv(c1->c2)+lrelu, flatten, dense(->hidden)+relu,
// dense(hidden->1)+sigmoid.
nn::Network make_classifier_network(std::uint64_t seed, ClassifierShape shape = {});

inline constexpr double kDecisionThreshold = 0.5;

// Healthy-vs-ACLD scorer; the score is P(healthy).
class ClassifierModel {
 public:
  ClassifierModel() = default;
  explicit ClassifierModel(std::uint64_t seed, ClassifierShape shape = {});
  static ClassifierModel from_params(nn::NetworkParams params);

  const nn::Network& network() const { return net_; }
  nn::Network& mutable_network() { return net_; }
  bool trained() const { return trained_; }
  void mark_trained() { trained_ = true; }

  double predict(const PressureImage& img) const;
  std::vector<double> predict_all(std::span<const PressureImage> images) const;

 private:
  void require_trained() const;

  nn::Network net_;
  bool trained_ = false;
};

struct SplitSpec {
  double train = 0.70;
  double val = 0.10;
  double test = 0.20;
  std::uint64_t seed = 42;
};

inline constexpr std::size_t kMinPerClass = 10;

// Indices into the input list.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Stratified by label; per class the train and val counts are rounded and the
// remainder goes to test.
Split split_dataset(std::span<const PressureImage> images, const SplitSpec& spec);

std::vector<PressureImage> select(std::span<const PressureImage> images,
                                  std::span<const std::size_t> indices);

struct ClfTrainConfig {
  std::size_t epochs = 30;
  std::size_t batch = 32;
  nn::AdamConfig adam{1e-3, 0.9, 0.999, 1e-8};
  std::uint64_t seed = 42;
};

struct EpochStats {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
};

struct ClfTrainResult {
  ClassifierModel model;  // best-validation checkpoint
  std::size_t best_epoch = 0;
  double best_val_accuracy = 0.0;
  std::vector<EpochStats> history;
};

// Minimizes BCE with Adam; keeps the parameters with the best validation
// accuracy (earliest epoch wins ties).
ClfTrainResult train_classifier(const std::vector<PressureImage>& train,
                                const std::vector<PressureImage>& val, const ClfTrainConfig& cfg,
                                const std::function<void(const EpochStats&)>& on_epoch = {},
                                ClassifierShape shape = {});

double accuracy(std::span<const double> scores, std::span<const int> labels,
                double threshold = kDecisionThreshold);

// P(random positive outranks random negative), ties count one half.
double compute_auc(std::span<const double> scores, std::span<const int> labels);

struct EvalReport {
  std::size_t n = 0;
  double accuracy = 0.0;
  std::optional<double> auc;
  double threshold = kDecisionThreshold;
  std::vector<double> scores;
  std::vector<int> labels;
  std::optional<double> rebuild_pass_rate;
};

// Accuracy and AUC over labeled images (AUC requires both classes).
EvalReport evaluate(const ClassifierModel& model, std::span<const PressureImage> images);

// Fraction of rebuilt images classified healthy.
double evaluate_rebuilds(const ClassifierModel& model, std::span<const PressureImage> rebuilt);

}  // namespace n2rpp::clf
