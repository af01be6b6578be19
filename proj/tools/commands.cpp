#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "n2rpp/batch.hpp"
#include "n2rpp/error.hpp"
#include "n2rpp/io.hpp"
#include "n2rpp/nn/grad_check.hpp"
#include "n2rpp/nn/loss.hpp"
#include "n2rpp/preprocess.hpp"
#include "n2rpp/random.hpp"
#include "n2rpp/saliency.hpp"

namespace n2rpp::cli {
namespace {

namespace fs = std::filesystem;
using io::format_real;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  bool quiet = false;
};

struct Filters {
  std::string aggregation;
  std::string side;
  std::string label;

  bool keep(const io::ManifestEntry& e) const {
    if (!aggregation.empty() && to_string(e.aggregation) != aggregation) return false;
    if (!side.empty() && to_string(e.side) != side) return false;
    if (!label.empty() && to_string(e.label) != label) return false;
    return true;
  }
};

class Context {
 public:
  Context(const Globals& g, std::string command, std::ostream& out, std::ostream& err)
      : out_(out), err_(err), quiet_(g.quiet), command_(std::move(command)), dir_(g.out_dir) {
    if (!g.config_path.empty()) cfg_ = load_config(g.config_path);
    if (g.seed) cfg_.seed = *g.seed;
    cfg_.validate();
  }

  const Config& cfg() const { return cfg_; }
  const fs::path& dir() const { return dir_; }

  void info(const std::string& msg) const {
    if (!quiet_) err_ << "[" << command_ << "] " << msg << '\n';
  }
  void warn(const std::string& msg) const { err_ << "[" << command_ << "] warning: " << msg << '\n'; }
  void summary(const std::string& msg) const { out_ << command_ << ": " << msg << '\n'; }

  // Writes the resolved configuration next to the outputs and to the log.
  void log_config() const {
    fs::create_directories(dir_);
    std::ofstream f(dir_ / (command_ + "_config.txt"));
    cfg_.write(f);
    if (!f) throw Error("cannot write config log in '" + dir_.string() + "'");
    if (!quiet_) {
      for (const auto& [k, v] : cfg_.entries()) err_ << "[" << command_ << "] config " << k << " = " << v << '\n';
    }
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  bool quiet_;
  std::string command_;
  fs::path dir_;
  Config cfg_;
};

std::ofstream open_csv(const fs::path& path, const std::string& header) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << header << '\n';
  return f;
}

std::string image_stem(const PressureImage& img) {
  return img.case_id + "_" + std::string(to_string(img.side)) + "_" + std::string(to_string(img.aggregation));
}

struct LoadedImages {
  std::vector<io::ManifestEntry> entries;
  std::vector<PressureImage> images;
};

LoadedImages load_filtered(const std::string& manifest, const Filters& filters) {
  LoadedImages li;
  for (auto& e : io::read_manifest(manifest)) {
    if (e.aggregation == Aggregation::raw) {
      throw Error(manifest + ": '" + e.path.string() + "' is a raw sequence; run preprocess first");
    }
    if (filters.keep(e)) li.entries.push_back(std::move(e));
  }
  li.images = io::load_images(li.entries);
  if (li.images.empty()) throw Error(manifest + ": no images left after filtering");
  return li;
}

void split_by_label(const std::vector<PressureImage>& all, std::vector<PressureImage>& healthy,
                    std::vector<PressureImage>& acld) {
  for (const auto& img : all) (img.label == Label::healthy ? healthy : acld).push_back(img);
}

ae::AutoencoderModel load_ae(const std::string& path) {
  return ae::AutoencoderModel(io::read_model(path, "ae").params);
}

gan::GeneratorModel load_gen(const std::string& path) {
  return gan::GeneratorModel::from_params(io::read_model(path, "gen").params);
}

clf::ClassifierModel load_clf(const std::string& path) {
  return clf::ClassifierModel::from_params(io::read_model(path, "clf").params);
}

std::size_t log_every(std::size_t total) {
  return std::max<std::size_t>(1, total / 20);
}

// ---- synth ----------------------------------------------------------------

void cmd_synth(const Context& ctx) {
  ctx.log_config();
  const auto cohort = synth::generate_cohort(ctx.cfg().cohort());
  std::vector<io::ManifestEntry> entries;
  std::size_t healthy = 0;
  for (const auto& seq : cohort) {
    const fs::path rel = fs::path("sequences") / (seq.case_id + "_" + std::string(to_string(seq.side)) + ".pfs");
    io::write_sequence(ctx.dir() / rel, seq);
    entries.push_back({rel, seq.side, seq.label, seq.case_id, Aggregation::raw});
    healthy += seq.label == Label::healthy ? 1 : 0;
  }
  io::write_manifest(ctx.dir() / "manifest.txt", entries);
  ctx.summary("wrote " + std::to_string(cohort.size()) + " sequences (" + std::to_string(healthy) + " healthy, " +
              std::to_string(cohort.size() - healthy) + " acld) to " + ctx.dir().string());
}

// ---- preprocess -----------------------------------------------------------

void cmd_preprocess(const Context& ctx, const std::string& manifest, const std::string& aggregation) {
  ctx.log_config();
  std::vector<Aggregation> kinds;
  if (aggregation == "all") {
    kinds = {Aggregation::max, Aggregation::sum, Aggregation::avg};
  } else {
    const Aggregation a = parse_aggregation(aggregation);
    if (a == Aggregation::raw) throw Error("preprocess: aggregation must be max, sum, avg or all");
    kinds = {a};
  }

  std::vector<io::ManifestEntry> out_entries;
  std::ofstream rejects = open_csv(ctx.dir() / "rejects.txt", "# path reason");
  std::size_t rejected = 0;
  for (const auto& e : io::read_manifest(manifest)) {
    if (e.aggregation != Aggregation::raw) throw Error(manifest + ": expected raw sequences");
    const auto seq = io::load_sequence(e);
    try {
      preprocess::validate(seq);
    } catch (const Error& err) {
      ctx.warn("skipping " + e.path.string() + ": " + err.what());
      rejects << e.path.generic_string() << ' ' << err.what() << '\n';
      ++rejected;
      continue;
    }
    for (Aggregation kind : kinds) {
      const auto img = preprocess::to_image(seq, kind);
      const fs::path rel = fs::path("images") / (image_stem(img) + ".pimg");
      io::write_image(ctx.dir() / rel, img);
      out_entries.push_back({rel, img.side, img.label, img.case_id, kind});
    }
  }
  io::write_manifest(ctx.dir() / "manifest.txt", out_entries);
  ctx.summary("wrote " + std::to_string(out_entries.size()) + " images, rejected " + std::to_string(rejected) +
              " sequences");
}

// ---- train-ae -------------------------------------------------------------

void cmd_train_ae(const Context& ctx, const std::string& manifest, const Filters& filters) {
  ctx.log_config();
  const auto data = load_filtered(manifest, filters);
  const auto cfg = ctx.cfg().autoencoder();
  auto csv = open_csv(ctx.dir() / "ae_loss.csv", "epoch,mse");
  const std::size_t every = log_every(cfg.epochs);
  const auto result = ae::train_autoencoder(data.images, cfg, [&](std::size_t epoch, double loss) {
    csv << epoch << ',' << format_real(loss) << '\n';
    if (epoch % every == 0 || epoch == cfg.epochs) {
      ctx.info("epoch " + std::to_string(epoch) + "/" + std::to_string(cfg.epochs) + " mse " + format_real(loss));
    }
  });
  const fs::path model = ctx.dir() / "ae.model";
  io::write_model(model, {"ae", result.model.network().params()});
  ctx.summary("images=" + std::to_string(data.images.size()) + " epochs=" + std::to_string(cfg.epochs) +
              " final_mse=" + format_real(result.loss_history.back()) + " model=" + model.string());
}

// ---- train-gan ------------------------------------------------------------

void cmd_train_gan(const Context& ctx, const std::string& manifest, const std::string& ae_path,
                   const Filters& filters) {
  ctx.log_config();
  const auto ae = load_ae(ae_path);
  const auto data = load_filtered(manifest, filters);
  // One generator per (aggregation, side) column.
  for (const auto& img : data.images) {
    if (img.aggregation != data.images.front().aggregation || img.side != data.images.front().side) {
      throw Error("train-gan: images span several (aggregation, side) columns; select one with --aggregation and "
                  "--side");
    }
  }
  std::vector<PressureImage> healthy, patients;
  split_by_label(data.images, healthy, patients);
  if (healthy.empty() || patients.empty()) throw Error("train-gan: need both healthy and acld images");

  const auto cfg = ctx.cfg().gan();
  auto csv = open_csv(ctx.dir() / "gan_trace.csv", "iteration,l_g,l_d,d_accuracy");
  const std::size_t every = log_every(cfg.iterations);
  const auto result = gan::train_n2rpp(
      patients, healthy, ae, cfg,
      [&](const gan::GanTraceRow& r, const gan::GeneratorModel&, const gan::DiscriminatorModel&) {
        csv << r.iteration << ',' << format_real(r.l_g) << ',' << format_real(r.l_d) << ','
            << format_real(r.d_accuracy) << '\n';
        if (r.iteration % every == 0 || r.iteration == cfg.iterations) {
          ctx.info("iteration " + std::to_string(r.iteration) + "/" + std::to_string(cfg.iterations) + " l_g " +
                   format_real(r.l_g) + " l_d " + format_real(r.l_d) + " d_acc " + format_real(r.d_accuracy));
        }
      });
  io::write_model(ctx.dir() / "gen.model", {"gen", result.generator.network.params()});
  io::write_model(ctx.dir() / "disc.model", {"disc", result.discriminator.network.params()});
  const auto& last = result.trace.back();
  ctx.summary("healthy=" + std::to_string(healthy.size()) + " patients=" + std::to_string(patients.size()) +
              " iterations=" + std::to_string(cfg.iterations) + " l_g=" + format_real(last.l_g) +
              " l_d=" + format_real(last.l_d) + " d_accuracy=" + format_real(last.d_accuracy));
}

// ---- train-clf ------------------------------------------------------------

void write_subset(const fs::path& path, const LoadedImages& data, const std::vector<std::size_t>& idx) {
  std::vector<io::ManifestEntry> subset;
  for (std::size_t i : idx) {
    auto e = data.entries[i];
    e.path = fs::absolute(e.path).lexically_normal();
    subset.push_back(std::move(e));
  }
  io::write_manifest(path, subset);
}

void cmd_train_clf(const Context& ctx, const std::string& manifest, const Filters& filters) {
  ctx.log_config();
  const auto data = load_filtered(manifest, filters);
  const auto split = clf::split_dataset(data.images, ctx.cfg().splits());
  write_subset(ctx.dir() / "train_manifest.txt", data, split.train);
  write_subset(ctx.dir() / "val_manifest.txt", data, split.val);
  write_subset(ctx.dir() / "test_manifest.txt", data, split.test);

  const auto cfg = ctx.cfg().classifier();
  auto csv = open_csv(ctx.dir() / "clf_history.csv", "epoch,train_loss,train_accuracy,val_accuracy");
  const auto result = clf::train_classifier(
      clf::select(data.images, split.train), clf::select(data.images, split.val), cfg,
      [&](const clf::EpochStats& s) {
        csv << s.epoch << ',' << format_real(s.train_loss) << ',' << format_real(s.train_accuracy) << ','
            << format_real(s.val_accuracy) << '\n';
        ctx.info("epoch " + std::to_string(s.epoch) + "/" + std::to_string(cfg.epochs) + " loss " +
                 format_real(s.train_loss) + " val_acc " + format_real(s.val_accuracy));
      });
  io::write_model(ctx.dir() / "clf.model", {"clf", result.model.network().params()});
  const auto test = clf::evaluate(result.model, clf::select(data.images, split.test));
  ctx.summary("best_epoch=" + std::to_string(result.best_epoch) +
              " val_accuracy=" + format_real(result.best_val_accuracy) +
              " test_accuracy=" + format_real(test.accuracy) +
              " test_auc=" + (test.auc ? format_real(*test.auc) : std::string("NA")));
}

// ---- eval -----------------------------------------------------------------

constexpr const char* kReportHeader = "set,case_id,side,label,aggregation,score,predicted";
constexpr const char* kSummaryHeader = "n,accuracy,auc,threshold,rebuild_n,rebuild_pass_rate";

void report_rows(std::ostream& csv, const char* set, const std::vector<PressureImage>& images,
                 const std::vector<double>& scores) {
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto& img = images[i];
    const Label predicted = scores[i] >= clf::kDecisionThreshold ? Label::healthy : Label::acld;
    csv << set << ',' << img.case_id << ',' << to_string(img.side) << ',' << to_string(img.label) << ','
        << to_string(img.aggregation) << ',' << format_real(scores[i]) << ',' << to_string(predicted) << '\n';
  }
}

void cmd_eval(const Context& ctx, const std::string& clf_path, const std::string& manifest,
              const std::string& rebuilt, const Filters& filters) {
  if (manifest.empty() && rebuilt.empty()) throw Error("eval: give --manifest and/or --rebuilt");
  ctx.log_config();
  const auto model = load_clf(clf_path);
  auto report = open_csv(ctx.dir() / "eval_report.csv", kReportHeader);

  std::string n = "", acc = "", auc = "", rn = "", rate = "";
  std::string line;
  if (!manifest.empty()) {
    const auto data = load_filtered(manifest, filters);
    const auto r = clf::evaluate(model, data.images);
    if (!r.auc) throw Error("eval: AUC needs both healthy and acld images in " + manifest);
    report_rows(report, "test", data.images, r.scores);
    n = std::to_string(r.n);
    acc = format_real(r.accuracy);
    auc = format_real(*r.auc);
    line += "n=" + n + " accuracy=" + acc + " auc=" + auc;
  }
  if (!rebuilt.empty()) {
    const auto data = load_filtered(rebuilt, filters);
    const auto scores = model.predict_all(data.images);
    report_rows(report, "rebuilt", data.images, scores);
    rn = std::to_string(data.images.size());
    rate = format_real(clf::evaluate_rebuilds(model, data.images));
    line += std::string(line.empty() ? "" : " ") + "rebuild_n=" + rn + " rebuild_pass_rate=" + rate;
  }
  auto summary = open_csv(ctx.dir() / "eval_summary.csv", kSummaryHeader);
  summary << n << ',' << acc << ',' << auc << ',' << format_real(clf::kDecisionThreshold) << ',' << rn << ','
          << rate << '\n';
  ctx.summary(line);
}

// ---- rebuild --------------------------------------------------------------

void cmd_rebuild(const Context& ctx, const std::string& ae_path, const std::string& gen_path,
                 const std::string& manifest, const Filters& filters) {
  ctx.log_config();
  const auto ae = load_ae(ae_path);
  const auto g = load_gen(gen_path);
  const auto data = load_filtered(manifest, filters);
  std::vector<io::ManifestEntry> entries;
  for (const auto& img : data.images) {
    const auto r = gan::rebuild(img, ae, g);
    const fs::path rel = fs::path("rebuilt") / (image_stem(img) + ".pimg");
    io::write_image(ctx.dir() / rel, r);
    entries.push_back({rel, r.side, r.label, r.case_id, r.aggregation});
  }
  io::write_manifest(ctx.dir() / "rebuilt_manifest.txt", entries);
  ctx.summary("rebuilt " + std::to_string(entries.size()) + " images");
}

// ---- visualize ------------------------------------------------------------

Grid positive_part(const Grid& g, double sign) {
  Grid out = g;
  for (double& v : out.values) v = std::max(0.0, sign * v);
  return out;
}

double max_abs(const Grid& g) {
  double m = 0.0;
  for (double v : g.values) m = std::max(m, std::abs(v));
  return m > 0.0 ? m : 1.0;
}

void cmd_visualize(const Context& ctx, const std::string& ae_path, const std::string& gen_path,
                   const std::string& clf_path, const std::string& manifest, const Filters& filters) {
  ctx.log_config();
  const auto ae = load_ae(ae_path);
  const auto g = load_gen(gen_path);
  std::optional<clf::ClassifierModel> model;
  if (!clf_path.empty()) model = load_clf(clf_path);
  const auto data = load_filtered(manifest, filters);

  auto regions = open_csv(ctx.dir() / "region_stats.csv", "case_id,side,aggregation,toes,forefoot,midfoot,heel");
  for (const auto& img : data.images) {
    const fs::path dir = ctx.dir() / "visualize" / image_stem(img);
    const auto r = gan::rebuild(img, ae, g);
    const auto diff = saliency::diff_heatmap(img, r);
    io::write_pgm(dir / "original.pgm", img.grid);
    io::write_pgm(dir / "rebuilt.pgm", r.grid);
    io::write_grid_csv(dir / "diff.csv", diff.grid);
    io::write_grid_csv(dir / "diff_abs.csv", diff.absolute);
    const double scale = max_abs(diff.grid);
    io::write_pgm(dir / "diff_pos.pgm", positive_part(diff.grid, 1.0), 0.0, scale);
    io::write_pgm(dir / "diff_neg.pgm", positive_part(diff.grid, -1.0), 0.0, scale);
    if (model) {
      const auto s = saliency::guided_backprop(*model, r, Label::healthy);
      io::write_grid_csv(dir / "saliency.csv", s.grid);
      Grid mag = s.grid;
      for (double& v : mag.values) v = std::abs(v);
      io::write_pgm(dir / "saliency.pgm", mag, 0.0, max_abs(mag));
    }
    const auto stats = saliency::region_stats(diff);
    regions << img.case_id << ',' << to_string(img.side) << ',' << to_string(img.aggregation);
    std::string line = "regions " + image_stem(img) + ":";
    for (FootRegion reg : kFootRegions) {
      regions << ',' << format_real(stats[reg]);
      line += " " + std::string(to_string(reg)) + "=" + format_real(stats[reg]);
    }
    regions << '\n';
    ctx.summary(line);
  }
}

// ---- gradcheck ------------------------------------------------------------

void cmd_gradcheck(const Context& ctx, std::size_t seeds) {
  bool ok = true;
  for (const auto& r : run_gradchecks(seeds, ctx.cfg().seed)) {
    ok = ok && r.passed();
    ctx.summary(r.name + " max_rel_error=" + format_real(r.max_rel_error) + (r.passed() ? " PASS" : " FAIL"));
  }
  if (!ok) throw Error("gradcheck: relative error above " + format_real(kGradcheckTolerance));
}

void add_filters(CLI::App* cmd, Filters& f) {
  cmd->add_option("--aggregation", f.aggregation, "Only images of this aggregation")
      ->check(CLI::IsMember({"max", "sum", "avg"}));
  cmd->add_option("--side", f.side, "Only this foot side")->check(CLI::IsMember({"L", "R"}));
  cmd->add_option("--label", f.label, "Only this label")->check(CLI::IsMember({"healthy", "acld"}));
}

Tensor random_tensor(Shape shape, Rng& rng, double lo, double hi) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

nn::OutputLoss mse_to(Tensor target) {
  return [target = std::move(target)](const Tensor& out) { return nn::mse_loss(out, target); };
}

nn::OutputLoss bce_to(std::vector<int> labels) {
  return [labels = std::move(labels)](const Tensor& out) {
    nn::TensorLoss l{0.0, Tensor(out.shape())};
    const double n = static_cast<double>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto b = nn::bce_loss(out[i], labels[i]);
      l.value += b.value / n;
      l.grad[i] = b.grad / n;
    }
    return l;
  };
}

constexpr std::size_t kBatch = 2;
constexpr double kKinkMargin = 1e-3;

// Smallest |x| over all inputs to relu / leaky_relu layers.
double kink_distance(const nn::Network& net, const Tensor& x) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const auto kind = net.layers()[i].kind;
    if (kind != nn::LayerKind::relu && kind != nn::LayerKind::leaky_relu) continue;
    const Tensor pre = i == 0 ? x : net.prefix(i).predict(x);
    for (double v : pre.values()) d = std::min(d, std::abs(v));
  }
  return d;
}

}  // namespace

std::vector<GradcheckResult> run_gradchecks(std::size_t seeds, std::uint64_t first_seed) {
  using nn::LayerSpec;
  struct Case {
    std::string name;
    std::function<nn::Network(std::uint64_t)> make;
    bool probability_output;
    double input_lo, input_hi;
  };
  auto plain = [](std::vector<LayerSpec> layers, Shape in) {
    return [layers = std::move(layers), in = std::move(in)](std::uint64_t s) { return nn::Network(layers, in, s); };
  };
  const std::vector<Case> cases = {
      {"layer dense", plain({LayerSpec::dense("a", 5, 4)}, {5}), false, -1, 1},
      {"layer conv2d", plain({LayerSpec::conv2d("a", 2, 3)}, {2, 6, 4}), false, -1, 1},
      {"layer deconv2d", plain({LayerSpec::deconv2d("a", 2, 3)}, {2, 3, 2}), false, -1, 1},
      {"layer relu", plain({LayerSpec::dense("a", 5, 6), LayerSpec::relu(), LayerSpec::dense("b", 6, 3)}, {5}), false,
       -1, 1},
      {"layer leaky_relu",
       plain({LayerSpec::dense("a", 5, 6), LayerSpec::leaky_relu(0.2), LayerSpec::dense("b", 6, 3)}, {5}), false, -1,
       1},
      {"layer sigmoid", plain({LayerSpec::dense("a", 5, 6), LayerSpec::sigmoid(), LayerSpec::dense("b", 6, 3)}, {5}),
       false, -1, 1},
      {"layer flatten",
       plain({LayerSpec::conv2d("a", 2, 2), LayerSpec::flatten(), LayerSpec::dense("b", 2 * 3 * 2, 3)}, {2, 6, 4}),
       false, -1, 1},
      {"network ae", [](std::uint64_t s) { return ae::make_autoencoder_network(s, {24, 6}); }, false, 0, 1},
      {"network gen", [](std::uint64_t s) { return gan::make_generator_network(s, {8, 2, 2, 3, 2}); }, false, -2, 2},
      {"network disc", [](std::uint64_t s) { return gan::make_discriminator_network(s, {8, 8, 2, 3}); }, true, 0, 1},
      {"network clf", [](std::uint64_t s) { return clf::make_classifier_network(s, {8, 8, 2, 3, 4}); }, true, 0, 1},
  };

  std::vector<GradcheckResult> results;
  for (const auto& c : cases) {
    GradcheckResult r{c.name, 0.0};
    for (std::uint64_t s = first_seed; s < first_seed + seeds; ++s) {
      // Draws with a rectifier input within kKinkMargin of 0 are redrawn: a
      // central difference there straddles the kink and measures nothing.
      nn::Network net;
      Tensor x;
      Rng rng(0);
      for (std::uint64_t attempt = 0;; ++attempt) {
        net = c.make(derive_seed(s, 1 + 2 * attempt));
        rng = Rng(derive_seed(s, 2 + 2 * attempt));
        for (auto& p : net.mutable_params())
          for (double& v : p.tensor.values()) v += rng.uniform(-0.1, 0.1);
        Shape in{kBatch};
        in.insert(in.end(), net.input_shape().begin(), net.input_shape().end());
        x = random_tensor(in, rng, c.input_lo, c.input_hi);
        if (kink_distance(net, x) >= kKinkMargin) break;
      }
      nn::OutputLoss loss;
      if (c.probability_output) {
        std::vector<int> labels(kBatch);
        for (int& l : labels) l = rng.uniform() < 0.5 ? 1 : 0;
        loss = bce_to(labels);
      } else {
        Shape out{kBatch};
        out.insert(out.end(), net.output_shape().begin(), net.output_shape().end());
        loss = mse_to(random_tensor(out, rng, 0.0, 1.0));
      }
      r.max_rel_error = std::max({r.max_rel_error, nn::grad_check(net, x, loss).max_rel_error,
                                  nn::grad_check_input(net, x, loss)});
    }
    results.push_back(r);
  }
  return results;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plantar-pressure rebuild pipeline: synthetic data, autoencoder, adversarial rebuild, "
               "classifier and visualization.",
               "n2rpp"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--config", g.config_path, "Configuration file (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress logging");

  std::string manifest, aggregation = "max", ae_path, gen_path, clf_path, rebuilt;
  std::size_t seeds = 20;
  Filters filters;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort of raw pressure sequences");
  auto* pre = app.add_subcommand("preprocess", "Aggregate, crop, resample and normalize sequences");
  pre->add_option("--manifest", manifest, "Manifest of raw sequences")->required()->check(CLI::ExistingFile);
  pre->add_option("--aggregation", aggregation, "max, sum, avg or all")
      ->check(CLI::IsMember({"max", "sum", "avg", "all"}))
      ->capture_default_str();
  auto* tae = app.add_subcommand("train-ae", "Train the feature autoencoder");
  tae->add_option("--manifest", manifest, "Image manifest")->required()->check(CLI::ExistingFile);
  add_filters(tae, filters);
  auto* tgan = app.add_subcommand("train-gan", "Train the rebuild generator and discriminator");
  tgan->add_option("--manifest", manifest, "Image manifest (healthy and acld)")->required()->check(CLI::ExistingFile);
  tgan->add_option("--ae", ae_path, "Trained autoencoder model")->required()->check(CLI::ExistingFile);
  add_filters(tgan, filters);
  auto* tclf = app.add_subcommand("train-clf", "Train the healthy-vs-ACLD classifier");
  tclf->add_option("--manifest", manifest, "Image manifest")->required()->check(CLI::ExistingFile);
  add_filters(tclf, filters);
  auto* ev = app.add_subcommand("eval", "Score images and rebuilds with a trained classifier");
  ev->add_option("--clf", clf_path, "Trained classifier model")->required()->check(CLI::ExistingFile);
  ev->add_option("--manifest", manifest, "Labeled image manifest")->check(CLI::ExistingFile);
  ev->add_option("--rebuilt", rebuilt, "Manifest of rebuilt images")->check(CLI::ExistingFile);
  add_filters(ev, filters);
  auto* reb = app.add_subcommand("rebuild", "Rebuild images through the autoencoder and generator");
  reb->add_option("--ae", ae_path, "Trained autoencoder model")->required()->check(CLI::ExistingFile);
  reb->add_option("--gen", gen_path, "Trained generator model")->required()->check(CLI::ExistingFile);
  reb->add_option("--manifest", manifest, "Image manifest")->required()->check(CLI::ExistingFile);
  add_filters(reb, filters);
  auto* vis = app.add_subcommand("visualize", "Render originals, rebuilds, difference and saliency maps");
  vis->add_option("--ae", ae_path, "Trained autoencoder model")->required()->check(CLI::ExistingFile);
  vis->add_option("--gen", gen_path, "Trained generator model")->required()->check(CLI::ExistingFile);
  vis->add_option("--clf", clf_path, "Trained classifier model (enables saliency)")->check(CLI::ExistingFile);
  vis->add_option("--manifest", manifest, "Image manifest")->required()->check(CLI::ExistingFile);
  add_filters(vis, filters);
  auto* gc = app.add_subcommand("gradcheck", "Finite-difference gradient checks at reduced width");
  gc->add_option("--seeds", seeds, "Seeds per check")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* cmd = app.get_subcommands().front();
  try {
    const Context ctx(g, cmd->get_name(), out, err);
    if (cmd == synth) cmd_synth(ctx);
    else if (cmd == pre) cmd_preprocess(ctx, manifest, aggregation);
    else if (cmd == tae) cmd_train_ae(ctx, manifest, filters);
    else if (cmd == tgan) cmd_train_gan(ctx, manifest, ae_path, filters);
    else if (cmd == tclf) cmd_train_clf(ctx, manifest, filters);
    else if (cmd == ev) cmd_eval(ctx, clf_path, manifest, rebuilt, filters);
    else if (cmd == reb) cmd_rebuild(ctx, ae_path, gen_path, manifest, filters);
    else if (cmd == vis) cmd_visualize(ctx, ae_path, gen_path, clf_path, manifest, filters);
    else if (cmd == gc) cmd_gradcheck(ctx, seeds);
  } catch (const std::exception& e) {
    err << "n2rpp " << cmd->get_name() << ": error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace n2rpp::cli
