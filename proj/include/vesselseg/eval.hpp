#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vesselseg/image.hpp"

namespace vesselseg {

/// Pixel tallies inside the field of view.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  [[nodiscard]] std::uint64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
  bool operator==(const Metrics&) const = default;
};

struct ImageMetrics {
  std::string id;
  Metrics metrics;
};

struct Summary {
  std::vector<ImageMetrics> per_image;
  Metrics mean;
  Metrics std_dev;  ///< population standard deviation
};

ConfusionCounts confusion_counts(const BinaryMap& pred, const BinaryMap& truth, const FovMask& mask);

/// Se = tp/(tp+fn), Sp = tn/(fp+tn), Acc = (tp+tn)/total.
/// Throws DegenerateMetrics when the FOV holds no vessel or no background pixel.
Metrics metrics(const ConfusionCounts& counts);

/// Mean and population standard deviation per metric. Throws on an empty list.
Summary aggregate(std::span<const ImageMetrics> results);

}  // namespace vesselseg
