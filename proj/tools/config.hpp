#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "n2rpp/autoencoder.hpp"
#include "n2rpp/classifier.hpp"
#include "n2rpp/gan.hpp"
#include "n2rpp/synthdata.hpp"

namespace n2rpp::cli {

// Every tunable of the pipeline. Files hold "key = value" lines; '#' starts a
// comment.
struct Config {
  std::uint64_t seed = 42;

  std::size_t n_healthy = 100;
  std::size_t n_acld = 100;
  std::size_t frames = 12;
  std::size_t rows = 64;
  std::size_t cols = 64;
  double noise = 0.05;
  double acld_heel_delta = 0.3;
  double acld_toe_delta = 0.2;
  synth::SideMode sides = synth::SideMode::both;

  std::size_t ae_epochs = 500;
  std::size_t ae_batch = 32;
  double ae_lr = 1e-3;

  double alpha = 0.03;
  std::size_t gan_iterations = 20000;
  std::size_t k_d = 1;
  std::size_t batch = 32;
  double adam_lr = 2e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;

  std::size_t clf_epochs = 30;
  std::size_t clf_batch = 32;
  double clf_lr = 1e-3;
  double split_train = 0.70;
  double split_val = 0.10;
  double split_test = 0.20;

  void set(const std::string& key, const std::string& value);
  void validate() const;

  // "key = value" lines for every key, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;
  void write(std::ostream& out) const;

  synth::CohortSpec cohort() const;
  ae::AeTrainConfig autoencoder() const;
  gan::GanConfig gan() const;
  clf::ClfTrainConfig classifier() const;
  clf::SplitSpec splits() const;
};

std::vector<std::string> config_keys();

Config load_config(const std::filesystem::path& path);
Config parse_config(std::istream& in, const std::string& origin = "<config>");

}  // namespace n2rpp::cli
