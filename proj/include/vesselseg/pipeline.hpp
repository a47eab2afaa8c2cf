#pragma once

// End-to-end orchestration: one image, a whole DRIVE split, the c grid search,
// and filter-bank export. Outputs for image `id` land in `out_dir` as
//
//   <id>_vessels.png    binary vessel map
//   <id>_overlay.png    detections tinted over the input
//   <id>_metrics.csv    (single-image runs with ground truth)
//   <id>_<stage>.png    with debug_stages
//
// and a dataset run adds metrics.csv (one row per image, then average and
// std_dev rows) plus summary.json.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vesselseg/config.hpp"
#include "vesselseg/dataset.hpp"
#include "vesselseg/eval.hpp"
#include "vesselseg/kernel.hpp"
#include "vesselseg/preprocess.hpp"
#include "vesselseg/segment.hpp"

namespace vesselseg {

struct Segmentation {
  PreprocessStages stages;
  std::vector<PreparedScale> scales;
  BinaryMap vessels;
};

FilterBank build_filter_bank(const PipelineConfig& config);

/// Preprocessing, per-scale responses and the fused map at config.c.
Segmentation segment_image(const RgbImage& img, const FovMask& mask, const PipelineConfig& config,
                           const FilterBank& bank);

struct RunOptions {
  std::filesystem::path out_dir;
  bool debug_stages = false;
  int jobs = 1;
};

struct SingleResult {
  std::string id;
  BinaryMap vessels;
  std::optional<Metrics> metrics;
};

/// Decodes every input before writing anything, so a bad input leaves no partial outputs.
SingleResult run_single(const std::filesystem::path& image, const std::filesystem::path& mask,
                        const std::optional<std::filesystem::path>& truth, const PipelineConfig& config,
                        const RunOptions& options, std::string id = {});

struct ImageFailure {
  std::string id;
  std::string message;
};

struct DatasetRun {
  std::optional<Summary> summary;  ///< absent only if every image failed
  std::vector<ImageFailure> failures;
};

/// Images run independently on `options.jobs` threads; results are sorted by
/// id before reporting, so output bytes do not depend on the job count.
DatasetRun run_dataset(const DriveDataset& dataset, const PipelineConfig& config, const RunOptions& options);

struct TuneRow {
  double c = 0.0;
  Metrics mean;
};

struct TuneResult {
  double best_c = 0.0;
  std::vector<TuneRow> table;  ///< one row per grid value, in grid order
};

/// Grid value with the highest mean accuracy over the dataset; ties go to the
/// smaller c. Filtering runs once per image; only thresholds vary with c.
TuneResult tune_c(const DriveDataset& dataset, const PipelineConfig& config, std::span<const double> grid,
                  int jobs = 1);

/// Metrics CSV: a comment line, header, one row per image, then
/// `average` and `std_dev` rows.
std::string format_metrics_csv(const Summary& summary);
std::string format_summary_json(const DatasetRun& run, const PipelineConfig& config);
std::string format_tune_csv(const TuneResult& result);

/// Writes each kernel of the bank as a normalized grayscale PNG.
void dump_kernels(const FilterBank& bank, const std::filesystem::path& out_dir, int pixel_scale = 8);

}  // namespace vesselseg
