// vesselseg: retinal vessel segmentation with matched filters and FDOG-driven
// local thresholds.
//
//   vesselseg segment --image 01_test.tif --mask 01_test_mask.gif [--truth 01_manual1.gif] --out out/
//   vesselseg run     --data DRIVE --split test --out out/ [--jobs 4]
//   vesselseg tune    --data DRIVE --split training --grid 1.5,2.3,3.5 --out tune/
//   vesselseg kernels --out kernels/
//   vesselseg config  > pipeline.cfg

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vesselseg/config.hpp"
#include "vesselseg/dataset.hpp"
#include "vesselseg/error.hpp"
#include "vesselseg/io.hpp"
#include "vesselseg/pipeline.hpp"

namespace fs = std::filesystem;
using namespace vesselseg;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string observer;
  std::optional<double> c;
  std::string convolution;
};

PipelineConfig resolve_config(const CommonOptions& opts) {
  PipelineConfig cfg = opts.config_path.empty() ? PipelineConfig{} : load_config(opts.config_path);
  if (!opts.observer.empty()) cfg.observer = parse_observer(opts.observer);
  if (opts.c) cfg.c = *opts.c;
  if (!opts.convolution.empty()) cfg.convolution = parse_convolution_strategy(opts.convolution);
  cfg.validate();
  return cfg;
}

void print_metrics(const std::string& label, const Metrics& m) {
  std::printf("%-10s Se=%.4f Sp=%.4f Acc=%.4f\n", label.c_str(), m.sensitivity, m.specificity, m.accuracy);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidArgument("--grid: '" + item + "' is not a number");
    grid.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retinal vessel segmentation (matched filter with FDOG thresholds)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vesselseg 1.0.0");

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Pipeline config file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--observer", common.observer, "Ground truth observer: 1 or 2")
        ->check(CLI::IsMember({"1", "2", "first", "second"}));
    sub->add_option("--c", common.c, "Override the reference-threshold multiplier")->check(CLI::PositiveNumber);
    sub->add_option("--convolution", common.convolution, "Convolution strategy: auto, direct or fft")
        ->check(CLI::IsMember({"auto", "direct", "fft"}));
  };

  std::string out_dir;
  bool debug_stages = false;
  int jobs = 1;

  // segment
  auto* seg = app.add_subcommand("segment", "Segment a single image");
  std::string image, mask, truth, id;
  seg->add_option("--image", image, "Fundus image")->required()->check(CLI::ExistingFile);
  seg->add_option("--mask", mask, "Field-of-view mask")->required()->check(CLI::ExistingFile);
  seg->add_option("--truth", truth, "Manual segmentation; enables the metrics CSV")->check(CLI::ExistingFile);
  seg->add_option("--id", id, "Output file prefix (default: image stem)");
  seg->add_option("--out", out_dir, "Output directory")->required();
  seg->add_flag("--debug-stages", debug_stages, "Also write intermediate stages");
  add_common(seg);

  // run
  auto* run = app.add_subcommand("run", "Segment and score a DRIVE split");
  std::string data_root, split_name = "test";
  run->add_option("--data", data_root, "DRIVE root or split directory")->required();
  run->add_option("--split", split_name, "test or training")->check(CLI::IsMember({"test", "training"}));
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  run->add_flag("--debug-stages", debug_stages, "Also write intermediate stages");
  add_common(run);

  // tune
  auto* tune = app.add_subcommand("tune", "Grid-search c on a DRIVE split");
  std::string grid_text = "1.5,1.8,2.0,2.3,2.6,3.0,3.5";
  std::string save_config;
  tune->add_option("--data", data_root, "DRIVE root or split directory")->required();
  tune->add_option("--split", split_name, "test or training (default: training)")->check(CLI::IsMember({"test", "training"}));
  tune->add_option("--grid", grid_text, "Comma-separated c values")->capture_default_str();
  tune->add_option("--out", out_dir, "Directory for tune.csv");
  tune->add_option("--save-config", save_config, "Write the config with the selected c here");
  tune->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  add_common(tune);

  // kernels
  auto* kernels = app.add_subcommand("kernels", "Write the filter bank as PNG images");
  int pixel_scale = 8;
  kernels->add_option("--out", out_dir, "Output directory")->required();
  kernels->add_option("--pixel-scale", pixel_scale, "Upscaling factor per kernel tap")->check(CLI::PositiveNumber);
  add_common(kernels);

  // config
  auto* config = app.add_subcommand("config", "Print the effective config");
  add_common(config);

  CLI11_PARSE(app, argc, argv);

  if (tune->parsed() && !tune->count("--split")) split_name = "training";
  if (jobs == 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    const PipelineConfig cfg = resolve_config(common);

    if (seg->parsed()) {
      RunOptions options{out_dir, debug_stages, 1};
      const std::optional<fs::path> gt = truth.empty() ? std::nullopt : std::optional<fs::path>(truth);
      const auto result = run_single(image, mask, gt, cfg, options, id);
      std::size_t vessels = 0;
      for (auto v : result.vessels.data()) vessels += v;
      std::printf("%s: %zu vessel pixels\n", result.id.c_str(), vessels);
      if (result.metrics) print_metrics(result.id, *result.metrics);
      return 0;
    }

    if (run->parsed()) {
      const auto dataset = load_drive_dataset(data_root, parse_split(split_name));
      const auto result = run_dataset(dataset, cfg, {out_dir, debug_stages, jobs});
      if (result.summary) {
        for (const auto& r : result.summary->per_image) print_metrics(r.id, r.metrics);
        print_metrics("average", result.summary->mean);
        print_metrics("std_dev", result.summary->std_dev);
      }
      for (const auto& f : result.failures) std::fprintf(stderr, "error: %s: %s\n", f.id.c_str(), f.message.c_str());
      return result.failures.empty() ? 0 : 1;
    }

    if (tune->parsed()) {
      const auto grid = parse_grid(grid_text);
      const auto dataset = load_drive_dataset(data_root, parse_split(split_name));
      const auto result = tune_c(dataset, cfg, grid, jobs);
      const std::string table = format_tune_csv(result);
      std::fputs(table.c_str(), stdout);
      std::printf("best c = %s\n", format_double(result.best_c).c_str());
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        io::write_bytes(fs::path(out_dir) / "tune.csv",
                        std::span(reinterpret_cast<const std::uint8_t*>(table.data()), table.size()));
      }
      if (!save_config.empty()) {
        PipelineConfig tuned = cfg;
        tuned.c = result.best_c;
        vesselseg::save_config(save_config, tuned);
      }
      return 0;
    }

    if (kernels->parsed()) {
      dump_kernels(build_filter_bank(cfg), out_dir, pixel_scale);
      return 0;
    }

    if (config->parsed()) {
      std::fputs(serialize_config(cfg).c_str(), stdout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
