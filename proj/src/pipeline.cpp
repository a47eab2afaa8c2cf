#include "vesselseg/pipeline.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

#include "vesselseg/io.hpp"

namespace vesselseg {

namespace fs = std::filesystem;

FilterBank build_filter_bank(const PipelineConfig& config) {
  config.validate();
  const auto scales = config.scale_params();
  return build_filter_bank(scales, config.n_orientations);
}

Segmentation segment_image(const RgbImage& img, const FovMask& mask, const PipelineConfig& config,
                           const FilterBank& bank) {
  require_same_shape(img, mask, "segment_image");
  Segmentation seg;
  seg.stages = preprocess(img, mask, config.preprocess_params());
  seg.scales = prepare_scales(seg.stages.enhanced, bank, config.threshold_params(), mask, config.segment_options());
  seg.vessels = fuse_scales(seg.scales, config.c, mask);
  return seg;
}

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_stage_images(const fs::path& dir, const std::string& id, const Segmentation& seg,
                        const PipelineConfig& config) {
  io::write_png(dir / (id + "_inverted_green.png"), seg.stages.inverted_green);
  io::write_png(dir / (id + "_padded.png"), seg.stages.padded);
  io::write_png(dir / (id + "_tophat.png"), seg.stages.top_hat);
  io::write_png(dir / (id + "_clahe.png"), seg.stages.enhanced);
  for (std::size_t s = 0; s < seg.scales.size(); ++s) {
    const auto& scale = seg.scales[s];
    const std::string tag = id + "_scale" + std::to_string(s);
    io::write_png(dir / (tag + "_H.png"), io::visualize(scale.response.h));
    io::write_png(dir / (tag + "_D.png"), io::visualize(scale.response.d));
    std::vector<double> t(scale.modulation.size());
    const double reference = config.c * scale.mean_h;
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = (1.0 + scale.modulation[i]) * reference;
    io::write_png(dir / (tag + "_T.png"),
                  io::visualize(ResponseField(scale.modulation.width(), scale.modulation.height(), std::move(t))));
    io::write_png(dir / (tag + "_binary.png"), binarize_scale(scale, config.c));
  }
}

void write_outputs(const fs::path& dir, const std::string& id, const RgbImage& img, const Segmentation& seg,
                   const PipelineConfig& config, bool debug) {
  io::write_png(dir / (id + "_vessels.png"), seg.vessels);
  io::write_rgb_png(dir / (id + "_overlay.png"), io::overlay(img, seg.vessels));
  if (debug) write_stage_images(dir, id, seg, config);
}

void write_text(const fs::path& path, const std::string& text) {
  io::write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Runs task(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SingleResult run_single(const fs::path& image, const fs::path& mask, const std::optional<fs::path>& truth,
                        const PipelineConfig& config, const RunOptions& options, std::string id) {
  config.validate();
  const RgbImage img = io::read_rgb(image);
  const FovMask fov = io::read_mask(mask);
  require_same_shape(img, fov, "mask");
  std::optional<BinaryMap> gt;
  if (truth) {
    gt = io::read_binary(*truth);
    require_same_shape(img, *gt, "ground truth");
  }
  if (id.empty()) id = image.stem().string();

  const FilterBank bank = build_filter_bank(config);
  Segmentation seg = segment_image(img, fov, config, bank);

  SingleResult result{id, seg.vessels, std::nullopt};
  if (gt) result.metrics = metrics(confusion_counts(seg.vessels, *gt, fov));

  fs::create_directories(options.out_dir);
  write_outputs(options.out_dir, id, img, seg, config, options.debug_stages);
  if (result.metrics) {
    const auto& m = *result.metrics;
    write_text(options.out_dir / (id + "_metrics.csv"),
               "id,sensitivity,specificity,accuracy\n" + id + "," + fixed(m.sensitivity) + "," +
                   fixed(m.specificity) + "," + fixed(m.accuracy) + "\n");
  }
  return result;
}

DatasetRun run_dataset(const DriveDataset& dataset, const PipelineConfig& config, const RunOptions& options) {
  config.validate();
  fs::create_directories(options.out_dir);
  const FilterBank bank = build_filter_bank(config);

  const std::size_t n = dataset.records.size();
  std::vector<std::optional<ImageMetrics>> results(n);
  std::vector<std::optional<ImageFailure>> failures(n);
  parallel_for(n, options.jobs, [&](std::size_t i) {
    const auto& rec = dataset.records[i];
    try {
      const RgbImage img = io::read_rgb(rec.image);
      const FovMask fov = io::read_mask(rec.mask);
      const BinaryMap gt = io::read_binary(rec.truth(config.observer));
      require_same_shape(img, fov, "mask");
      require_same_shape(img, gt, "ground truth");
      const Segmentation seg = segment_image(img, fov, config, bank);
      const Metrics m = metrics(confusion_counts(seg.vessels, gt, fov));
      write_outputs(options.out_dir, rec.id, img, seg, config, options.debug_stages);
      results[i] = ImageMetrics{rec.id, m};
    } catch (const std::exception& e) {
      failures[i] = ImageFailure{rec.id, e.what()};
    }
  });

  DatasetRun run;
  std::vector<ImageMetrics> ok;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i]) ok.push_back(*results[i]);
    if (failures[i]) run.failures.push_back(*failures[i]);
  }
  std::sort(ok.begin(), ok.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  if (!ok.empty()) run.summary = aggregate(ok);

  if (run.summary) write_text(options.out_dir / "metrics.csv", format_metrics_csv(*run.summary));
  write_text(options.out_dir / "summary.json", format_summary_json(run, config));
  return run;
}

TuneResult tune_c(const DriveDataset& dataset, const PipelineConfig& config, std::span<const double> grid, int jobs) {
  if (grid.empty()) throw InvalidArgument("tune_c: empty grid");
  for (double c : grid) {
    if (!(c > 0.0)) throw InvalidArgument("tune_c: grid values must be > 0");
  }
  config.validate();
  const FilterBank bank = build_filter_bank(config);

  const std::size_t n = dataset.records.size();
  // per_image[i][g] = metrics of image i at grid value g
  std::vector<std::vector<Metrics>> per_image(n);
  std::vector<std::string> errors(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto& rec = dataset.records[i];
    try {
      const RgbImage img = io::read_rgb(rec.image);
      const FovMask fov = io::read_mask(rec.mask);
      const BinaryMap gt = io::read_binary(rec.truth(config.observer));
      const Segmentation seg = segment_image(img, fov, config, bank);
      for (double c : grid) {
        per_image[i].push_back(metrics(confusion_counts(fuse_scales(seg.scales, c, fov), gt, fov)));
      }
    } catch (const std::exception& e) {
      errors[i] = rec.id + ": " + e.what();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw DatasetError("tune_c: " + e);
  }

  TuneResult result;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<ImageMetrics> column;
    for (std::size_t i = 0; i < n; ++i) column.push_back({dataset.records[i].id, per_image[i][g]});
    result.table.push_back({grid[g], aggregate(column).mean});
  }
  const TuneRow* best = &result.table.front();
  for (const auto& row : result.table) {
    if (row.mean.accuracy > best->mean.accuracy ||
        (row.mean.accuracy == best->mean.accuracy && row.c < best->c)) {
      best = &row;
    }
  }
  result.best_c = best->c;
  return result;
}

std::string format_metrics_csv(const Summary& summary) {
  std::string out = "# std_dev is the population standard deviation\nid,sensitivity,specificity,accuracy\n";
  auto row = [&](const std::string& id, const Metrics& m) {
    out += id + "," + fixed(m.sensitivity) + "," + fixed(m.specificity) + "," + fixed(m.accuracy) + "\n";
  };
  for (const auto& r : summary.per_image) row(r.id, r.metrics);
  row("average", summary.mean);
  row("std_dev", summary.std_dev);
  return out;
}

std::string format_summary_json(const DatasetRun& run, const PipelineConfig& config) {
  using nlohmann::json;
  auto metrics_json = [](const Metrics& m) {
    return json{{"sensitivity", m.sensitivity}, {"specificity", m.specificity}, {"accuracy", m.accuracy}};
  };
  json doc;
  doc["std_dev_kind"] = "population";
  doc["observer"] = std::string(to_string(config.observer));
  doc["config"] = serialize_config(config);
  doc["images"] = json::array();
  if (run.summary) {
    for (const auto& r : run.summary->per_image) {
      json entry = metrics_json(r.metrics);
      entry["id"] = r.id;
      doc["images"].push_back(entry);
    }
    doc["average"] = metrics_json(run.summary->mean);
    doc["std_dev"] = metrics_json(run.summary->std_dev);
  }
  doc["failures"] = json::array();
  for (const auto& f : run.failures) doc["failures"].push_back({{"id", f.id}, {"error", f.message}});
  return doc.dump(2) + "\n";
}

std::string format_tune_csv(const TuneResult& result) {
  std::string out = "c,sensitivity,specificity,accuracy\n";
  for (const auto& row : result.table) {
    out += format_double(row.c) + "," + fixed(row.mean.sensitivity) + "," + fixed(row.mean.specificity) + "," +
           fixed(row.mean.accuracy) + "\n";
  }
  return out;
}

void dump_kernels(const FilterBank& bank, const fs::path& out_dir, int pixel_scale) {
  if (pixel_scale < 1) throw InvalidArgument("dump_kernels: pixel_scale must be >= 1");
  fs::create_directories(out_dir);
  auto write = [&](const Kernel& k, const char* kind) {
    const int n = k.stencil.size();
    const ResponseField raw(n, n, std::vector<double>(k.stencil.weights().begin(), k.stencil.weights().end()));
    const GrayImage norm = normalize_minmax(raw);
    const int big = n * pixel_scale;
    std::vector<double> up(static_cast<std::size_t>(big) * big);
    for (int y = 0; y < big; ++y) {
      for (int x = 0; x < big; ++x) up[static_cast<std::size_t>(y) * big + x] = norm(x / pixel_scale, y / pixel_scale);
    }
    char name[96];
    std::snprintf(name, sizeof name, "%s_L%d_s%s_o%03d.png", kind, k.scale.length,
                  format_double(k.scale.sigma).c_str(), static_cast<int>(std::lround(k.orientation_deg)));
    io::write_png(out_dir / name, GrayImage(big, big, std::move(up)));
  };
  for (std::size_t s = 0; s < bank.scale_count(); ++s) {
    for (std::size_t o = 0; o < bank.orientation_count(); ++o) {
      write(bank.mf[s][o], "mf");
      write(bank.fdog[s][o], "fdog");
    }
  }
}

}  // namespace vesselseg
