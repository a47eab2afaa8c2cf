#pragma once

// Pipeline configuration and its text format.
//
// The file is flat `key = value` lines with `#` comments, e.g.
//
//   schema_version = 1
//   scales = 9:1, 13:1.5, 17:2
//   c = 2.3
//
// Keys that are absent keep their defaults; unknown keys are rejected.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vesselseg/convolution.hpp"
#include "vesselseg/kernel.hpp"
#include "vesselseg/preprocess.hpp"
#include "vesselseg/segment.hpp"

namespace vesselseg {

inline constexpr int kConfigSchemaVersion = 1;

enum class Observer { First, Second };

std::string_view to_string(Observer o);
Observer parse_observer(std::string_view s);

struct ScaleSpec {
  int length = 9;
  double sigma = 1.0;
  bool operator==(const ScaleSpec&) const = default;
};

struct PipelineConfig {
  std::vector<ScaleSpec> scales{{9, 1.0}, {13, 1.5}, {17, 2.0}};
  double t = 3.0;
  int n_orientations = 12;
  double c = 2.3;
  int w = 31;
  int se_diameter = 11;
  ClaheParams clahe;
  int pad_width = 25;
  OrientationPairing orientation_pairing = OrientationPairing::ArgmaxH;
  EdgeNormalization normalization = EdgeNormalization::Abs;
  Observer observer = Observer::First;
  ConvolutionStrategy convolution = ConvolutionStrategy::Auto;

  /// Throws InvalidArgument on the first field that violates its invariant.
  void validate() const;

  [[nodiscard]] std::vector<ScaleParams> scale_params() const;
  [[nodiscard]] ThresholdParams threshold_params() const;
  [[nodiscard]] PreprocessParams preprocess_params() const;
  [[nodiscard]] SegmentOptions segment_options() const;

  bool operator==(const PipelineConfig&) const = default;
};

std::string serialize_config(const PipelineConfig& config);
PipelineConfig parse_config(std::string_view text);

PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const PipelineConfig& config);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace vesselseg
