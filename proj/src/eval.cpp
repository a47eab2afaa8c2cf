#include "vesselseg/eval.hpp"

#include <cmath>

namespace vesselseg {

ConfusionCounts confusion_counts(const BinaryMap& pred, const BinaryMap& truth, const FovMask& mask) {
  require_same_shape(pred, truth, "confusion_counts truth");
  require_same_shape(pred, mask, "confusion_counts mask");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i]) continue;
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) throw DegenerateMetrics("sensitivity undefined: no vessel pixels in the field of view");
  if (c.fp + c.tn == 0) throw DegenerateMetrics("specificity undefined: no background pixels in the field of view");
  const auto d = [](std::uint64_t v) { return static_cast<double>(v); };
  return {d(c.tp) / d(c.tp + c.fn), d(c.tn) / d(c.fp + c.tn), d(c.tp + c.tn) / d(c.total())};
}

Summary aggregate(std::span<const ImageMetrics> results) {
  if (results.empty()) throw InvalidArgument("aggregate: no results");
  Summary s;
  s.per_image.assign(results.begin(), results.end());
  const double n = static_cast<double>(results.size());

  auto stats = [&](double Metrics::*field, double& mean, double& sd) {
    double sum = 0.0;
    for (const auto& r : results) sum += r.metrics.*field;
    mean = sum / n;
    double sq = 0.0;
    for (const auto& r : results) {
      const double dv = r.metrics.*field - mean;
      sq += dv * dv;
    }
    sd = std::sqrt(sq / n);
  };
  stats(&Metrics::sensitivity, s.mean.sensitivity, s.std_dev.sensitivity);
  stats(&Metrics::specificity, s.mean.specificity, s.std_dev.specificity);
  stats(&Metrics::accuracy, s.mean.accuracy, s.std_dev.accuracy);
  return s;
}

}  // namespace vesselseg
