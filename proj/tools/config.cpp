#include "config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "n2rpp/error.hpp"
#include "n2rpp/io.hpp"

namespace n2rpp::cli {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("config: bad value '" + text + "' for " + key);
  }
  return v;
}

synth::SideMode parse_sides(const std::string& text) {
  if (text == "both") return synth::SideMode::both;
  if (text == "L" || text == "left") return synth::SideMode::left;
  if (text == "R" || text == "right") return synth::SideMode::right;
  throw Error("config: sides must be both, L or R, got '" + text + "'");
}

std::string sides_name(synth::SideMode m) {
  switch (m) {
    case synth::SideMode::left: return "L";
    case synth::SideMode::right: return "R";
    default: return "both";
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error("config: " + msg);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  auto sz = [&] { return parse_number<std::size_t>(key, value); };
  auto real = [&] { return parse_number<double>(key, value); };
  if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "n_healthy") n_healthy = sz();
  else if (key == "n_acld") n_acld = sz();
  else if (key == "frames") frames = sz();
  else if (key == "rows") rows = sz();
  else if (key == "cols") cols = sz();
  else if (key == "noise") noise = real();
  else if (key == "acld_heel_delta") acld_heel_delta = real();
  else if (key == "acld_toe_delta") acld_toe_delta = real();
  else if (key == "sides") sides = parse_sides(value);
  else if (key == "ae_epochs") ae_epochs = sz();
  else if (key == "ae_batch") ae_batch = sz();
  else if (key == "ae_lr") ae_lr = real();
  else if (key == "alpha") alpha = real();
  else if (key == "gan_iterations") gan_iterations = sz();
  else if (key == "k_d") k_d = sz();
  else if (key == "batch") batch = sz();
  else if (key == "adam_lr") adam_lr = real();
  else if (key == "adam_beta1") adam_beta1 = real();
  else if (key == "adam_beta2") adam_beta2 = real();
  else if (key == "clf_epochs") clf_epochs = sz();
  else if (key == "clf_batch") clf_batch = sz();
  else if (key == "clf_lr") clf_lr = real();
  else if (key == "splits") {
    std::istringstream parts(value);
    std::string a, b, c, extra;
    if (!std::getline(parts, a, '/') || !std::getline(parts, b, '/') || !std::getline(parts, c, '/') ||
        std::getline(parts, extra, '/')) {
      throw Error("config: splits must look like 0.70/0.10/0.20, got '" + value + "'");
    }
    split_train = parse_number<double>(key, trim(a));
    split_val = parse_number<double>(key, trim(b));
    split_test = parse_number<double>(key, trim(c));
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

void Config::validate() const {
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(gan_iterations >= 1, "gan_iterations must be >= 1");
  require(k_d >= 1, "k_d must be >= 1");
  require(batch >= 1 && ae_batch >= 1 && clf_batch >= 1, "batch sizes must be >= 1");
  require(ae_epochs >= 1 && clf_epochs >= 1, "epoch counts must be >= 1");
  require(adam_lr > 0.0 && ae_lr > 0.0 && clf_lr > 0.0, "learning rates must be positive");
  require(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0,
          "Adam betas must lie in [0, 1)");
  require(split_train > 0.0 && split_val >= 0.0 && split_test > 0.0 &&
              std::abs(split_train + split_val + split_test - 1.0) < 1e-9,
          "splits must be positive and sum to 1");
  cohort().validate();
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
  using io::format_real;
  auto n = [](std::size_t v) { return std::to_string(v); };
  return {
      {"seed", std::to_string(seed)},
      {"n_healthy", n(n_healthy)},
      {"n_acld", n(n_acld)},
      {"frames", n(frames)},
      {"rows", n(rows)},
      {"cols", n(cols)},
      {"noise", format_real(noise)},
      {"acld_heel_delta", format_real(acld_heel_delta)},
      {"acld_toe_delta", format_real(acld_toe_delta)},
      {"sides", sides_name(sides)},
      {"ae_epochs", n(ae_epochs)},
      {"ae_batch", n(ae_batch)},
      {"ae_lr", format_real(ae_lr)},
      {"alpha", format_real(alpha)},
      {"gan_iterations", n(gan_iterations)},
      {"k_d", n(k_d)},
      {"batch", n(batch)},
      {"adam_lr", format_real(adam_lr)},
      {"adam_beta1", format_real(adam_beta1)},
      {"adam_beta2", format_real(adam_beta2)},
      {"clf_epochs", n(clf_epochs)},
      {"clf_batch", n(clf_batch)},
      {"clf_lr", format_real(clf_lr)},
      {"splits", format_real(split_train) + "/" + format_real(split_val) + "/" + format_real(split_test)},
  };
}

void Config::write(std::ostream& out) const {
  for (const auto& [k, v] : entries()) out << k << " = " << v << '\n';
}

synth::CohortSpec Config::cohort() const {
  synth::CohortSpec s;
  s.n_healthy = n_healthy;
  s.n_acld = n_acld;
  s.frames = frames;
  s.rows = rows;
  s.cols = cols;
  s.noise = noise;
  s.acld_heel_delta = acld_heel_delta;
  s.acld_toe_delta = acld_toe_delta;
  s.sides = sides;
  s.seed = seed;
  return s;
}

ae::AeTrainConfig Config::autoencoder() const {
  return {ae_epochs, ae_batch, ae_lr, seed};
}

gan::GanConfig Config::gan() const {
  gan::GanConfig g;
  g.alpha = alpha;
  g.iterations = gan_iterations;
  g.k_d = k_d;
  g.batch = batch;
  g.seed = seed;
  g.adam = {adam_lr, adam_beta1, adam_beta2, 1e-8};
  return g;
}

clf::ClfTrainConfig Config::classifier() const {
  clf::ClfTrainConfig c;
  c.epochs = clf_epochs;
  c.batch = clf_batch;
  c.adam.lr = clf_lr;
  c.seed = seed;
  return c;
}

clf::SplitSpec Config::splits() const {
  return {split_train, split_val, split_test, seed};
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, v] : Config{}.entries()) keys.push_back(k);
  return keys;
}

Config parse_config(std::istream& in, const std::string& origin) {
  Config cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(where + "expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config '" + path.string() + "'");
  return parse_config(in, path.string());
}

}  // namespace n2rpp::cli
