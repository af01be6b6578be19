#include "n2rpp/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "n2rpp/batch.hpp"
#include "n2rpp/error.hpp"
#include "n2rpp/nn/loss.hpp"
#include "n2rpp/random.hpp"

namespace n2rpp::clf {
namespace {

using nn::LayerSpec;

std::vector<LayerSpec> classifier_layers(const ClassifierShape& s) {
  const std::size_t flat = s.channels2 * (s.rows / 4) * (s.cols / 4);
  return {LayerSpec::conv2d("conv1", 1, s.channels1),
          LayerSpec::leaky_relu(0.2),
          LayerSpec::conv2d("conv2", s.channels1, s.channels2),
          LayerSpec::leaky_relu(0.2),
          LayerSpec::flatten(),
          LayerSpec::dense("fc1", flat, s.hidden),
          LayerSpec::relu(),
          LayerSpec::dense("fc2", s.hidden, 1),
          LayerSpec::sigmoid()};
}

std::vector<int> labels_of(std::span<const PressureImage> images) {
  std::vector<int> labels;
  labels.reserve(images.size());
  for (const auto& img : images) labels.push_back(label_value(img.label));
  return labels;
}

}  // namespace

nn::Network make_classifier_network(std::uint64_t seed, ClassifierShape shape) {
  if (shape.rows % 4 || shape.cols % 4) throw ShapeError("classifier input must be divisible by 4");
  return nn::Network(classifier_layers(shape), {1, shape.rows, shape.cols}, seed);
}

ClassifierModel::ClassifierModel(std::uint64_t seed, ClassifierShape shape)
    : net_(make_classifier_network(seed, shape)) {}

ClassifierModel ClassifierModel::from_params(nn::NetworkParams params) {
  ClassifierShape s;
  s.channels1 = params.at("conv1.weight").dim(0);
  s.channels2 = params.at("conv2.weight").dim(0);
  s.hidden = params.at("fc1.weight").dim(1);
  ClassifierModel m;
  m.net_ = nn::Network(classifier_layers(s), {1, s.rows, s.cols}, std::move(params));
  m.trained_ = true;
  return m;
}

void ClassifierModel::require_trained() const {
  if (!trained_) throw Error("classifier has not been trained");
}

double ClassifierModel::predict(const PressureImage& img) const {
  return predict_all(std::span<const PressureImage>(&img, 1)).front();
}

std::vector<double> ClassifierModel::predict_all(std::span<const PressureImage> images) const {
  require_trained();
  if (images.empty()) return {};
  const Tensor out = net_.predict(to_batch(images, BatchLayout::planes));
  return {out.values().begin(), out.values().end()};
}

Split split_dataset(std::span<const PressureImage> images, const SplitSpec& spec) {
  if (spec.train < 0 || spec.val < 0 || spec.test < 0 ||
      std::abs(spec.train + spec.val + spec.test - 1.0) > 1e-9) {
    throw Error("split fractions must be nonnegative and sum to 1");
  }
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < images.size(); ++i) {
    by_class[static_cast<std::size_t>(label_value(images[i].label))].push_back(i);
  }
  Split split;
  Rng rng(spec.seed);
  for (auto& members : by_class) {
    if (members.size() < kMinPerClass) {
      throw Error("split_dataset: need at least " + std::to_string(kMinPerClass) +
                  " samples per class, got " + std::to_string(members.size()));
    }
    rng.shuffle(members.begin(), members.end());
    const double n = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::llround(spec.train * n));
    const auto n_val = std::min(members.size() - n_train,
                                static_cast<std::size_t>(std::llround(spec.val * n)));
    auto it = members.begin();
    split.train.insert(split.train.end(), it, it + static_cast<std::ptrdiff_t>(n_train));
    it += static_cast<std::ptrdiff_t>(n_train);
    split.val.insert(split.val.end(), it, it + static_cast<std::ptrdiff_t>(n_val));
    it += static_cast<std::ptrdiff_t>(n_val);
    split.test.insert(split.test.end(), it, members.end());
  }
  for (auto* part : {&split.train, &split.val, &split.test}) std::sort(part->begin(), part->end());
  return split;
}

std::vector<PressureImage> select(std::span<const PressureImage> images,
                                  std::span<const std::size_t> indices) {
  std::vector<PressureImage> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(images[i]);
  return out;
}

double accuracy(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.size() != labels.size() || scores.empty()) throw Error("accuracy: bad input sizes");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    correct += (scores[i] >= threshold ? 1 : 0) == labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double compute_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("compute_auc: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Mann-Whitney: sum of positive midranks.
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) throw Error("compute_auc: both classes must be present");
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

ClfTrainResult train_classifier(const std::vector<PressureImage>& train,
                                const std::vector<PressureImage>& val, const ClfTrainConfig& cfg,
                                const std::function<void(const EpochStats&)>& on_epoch,
                                ClassifierShape shape) {
  if (train.empty() || val.empty()) throw Error("train_classifier: empty split");
  if (cfg.epochs == 0 || cfg.batch == 0) throw Error("train_classifier: epochs and batch must be >= 1");

  ClassifierModel model(derive_seed(cfg.seed, 20), shape);
  model.mark_trained();
  nn::Network& net = model.mutable_network();
  nn::AdamState adam(net.params(), cfg.adam);
  Rng rng(derive_seed(cfg.seed, 21));

  const Tensor x_all = to_batch(train, BatchLayout::planes);
  const std::vector<int> y_all = labels_of(train);
  const std::vector<int> y_val = labels_of(val);

  ClfTrainResult result{model, 0, -1.0, {}};
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch);
      const std::span<const std::size_t> idx(order.data() + start, stop - start);
      const auto fwd = net.forward(gather_rows(x_all, idx));
      Tensor upstream(fwd.output.shape());
      double batch_loss = 0.0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto l = nn::bce_loss(fwd.output[i], y_all[idx[i]]);
        batch_loss += l.value;
        upstream[i] = l.grad / static_cast<double>(idx.size());
      }
      if (!std::isfinite(batch_loss)) {
        throw NumericError("train_classifier: non-finite loss at epoch " + std::to_string(epoch));
      }
      loss_sum += batch_loss;
      nn::adam_update(net.mutable_params(), net.backward(fwd.cache, upstream).params, adam);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train.size());
    stats.train_accuracy = accuracy(model.predict_all(train), y_all);
    stats.val_accuracy = accuracy(model.predict_all(val), y_val);
    result.history.push_back(stats);
    if (stats.val_accuracy > result.best_val_accuracy) {
      result.best_val_accuracy = stats.val_accuracy;
      result.best_epoch = epoch;
      result.model = model;
    }
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

EvalReport evaluate(const ClassifierModel& model, std::span<const PressureImage> images) {
  if (images.empty()) throw Error("evaluate: no images");
  EvalReport r;
  r.n = images.size();
  r.scores = model.predict_all(images);
  r.labels = labels_of(images);
  r.accuracy = accuracy(r.scores, r.labels, r.threshold);
  const bool both = std::any_of(r.labels.begin(), r.labels.end(), [](int l) { return l == 1; }) &&
                    std::any_of(r.labels.begin(), r.labels.end(), [](int l) { return l == 0; });
  if (both) r.auc = compute_auc(r.scores, r.labels);
  return r;
}

double evaluate_rebuilds(const ClassifierModel& model, std::span<const PressureImage> rebuilt) {
  if (rebuilt.empty()) throw Error("evaluate_rebuilds: no images");
  const auto scores = model.predict_all(rebuilt);
  const auto healthy = std::count_if(scores.begin(), scores.end(),
                                     [](double s) { return s >= kDecisionThreshold; });
  return static_cast<double>(healthy) / static_cast<double>(scores.size());
}

}  // namespace n2rpp::clf
