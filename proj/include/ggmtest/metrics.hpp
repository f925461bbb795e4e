#pragma once

#include "ggmtest/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ggm {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const EdgeSet& truth, const EdgeSet& inferred);

/// Fraction of trials with at least one false positive. Throws on empty input.
double fwer(std::span<const std::size_t> trial_fp_counts);

/// fp / (fp + tp), 0 when nothing was discovered.
double fdr(const ConfusionCounts& c);

double sensitivity(const ConfusionCounts& c);
double specificity(const ConfusionCounts& c);

struct RiskValue {
  double alpha = 0.0;
  double value = 0.0;
};

/// mean_fp (1 - alpha) + mean_fn alpha.
RiskValue risk(double mean_fp, double mean_fn, double alpha);

struct RocPoint {
  double x = 0.0;  // 1 - specificity
  double y = 0.0;  // sensitivity
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;
};

/// ROC curve from scores where smaller means "more likely an edge", under
/// the rule score < threshold. One point per distinct score, plus (0, 0).
/// Throws ErrorKind::InvalidArgument when the labels are all true or all
/// false.
RocCurve roc_curve(std::span<const double> scores, const std::vector<bool>& is_edge);
RocCurve roc_curve(const EdgePValues& adjusted, const EdgeSet& truth);

/// Trapezoidal area under the piecewise-linear curve.
double auc(const RocCurve& curve);

/// Subset of at most max_points vertices, endpoints kept.
RocCurve thin(const RocCurve& curve, std::size_t max_points);

}  // namespace ggm
