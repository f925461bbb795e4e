#include "ggmtest/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace ggm {

ConfusionCounts confusion(const EdgeSet& truth, const EdgeSet& inferred) {
  if (truth.dim() != inferred.dim()) throw Error(ErrorKind::InvalidArgument, "edge sets over different vertex counts");
  ConfusionCounts c;
  const auto& t = truth.mask();
  const auto& s = inferred.mask();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] && s[k]) ++c.tp;
    else if (s[k]) ++c.fp;
    else if (t[k]) ++c.fn;
  }
  c.tn = pair_count(truth.dim()) - c.tp - c.fp - c.fn;
  return c;
}

double fwer(std::span<const std::size_t> trial_fp_counts) {
  if (trial_fp_counts.empty()) throw Error(ErrorKind::InvalidArgument, "fwer of an empty trial list");
  const auto hits = std::count_if(trial_fp_counts.begin(), trial_fp_counts.end(), [](std::size_t v) { return v > 0; });
  return static_cast<double>(hits) / static_cast<double>(trial_fp_counts.size());
}

double fdr(const ConfusionCounts& c) {
  const auto discoveries = c.fp + c.tp;
  return discoveries == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(discoveries);
}

double sensitivity(const ConfusionCounts& c) {
  const auto pos = c.tp + c.fn;
  return pos == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(pos);
}

double specificity(const ConfusionCounts& c) {
  const auto neg = c.tn + c.fp;
  return neg == 0 ? 0.0 : static_cast<double>(c.tn) / static_cast<double>(neg);
}

RiskValue risk(double mean_fp, double mean_fn, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidArgument, "risk weight must lie in [0, 1]");
  if (!(mean_fp >= 0.0 && mean_fn >= 0.0)) throw Error(ErrorKind::InvalidArgument, "error means must be non-negative");
  return {alpha, mean_fp * (1.0 - alpha) + mean_fn * alpha};
}

RocCurve roc_curve(std::span<const double> scores, const std::vector<bool>& is_edge) {
  if (scores.size() != is_edge.size()) throw Error(ErrorKind::InvalidArgument, "scores and labels differ in length");
  const auto positives = static_cast<std::size_t>(std::count(is_edge.begin(), is_edge.end(), true));
  const auto negatives = is_edge.size() - positives;
  if (positives == 0 || negatives == 0)
    throw Error(ErrorKind::InvalidArgument, "ROC curve needs a truth that is neither empty nor complete");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double value = scores[order[k]];
    // every score equal to `value` enters together once the threshold passes it
    for (; k < order.size() && scores[order[k]] == value; ++k) (is_edge[order[k]] ? tp : fp)++;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives)});
  }
  return curve;
}

RocCurve roc_curve(const EdgePValues& adjusted, const EdgeSet& truth) {
  if (adjusted.dim() != truth.dim()) throw Error(ErrorKind::InvalidArgument, "p-values and truth over different vertex counts");
  return roc_curve(std::span<const double>(adjusted.values()), truth.mask());
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const auto& a = curve.points[k - 1];
    const auto& b = curve.points[k];
    area += (b.x - a.x) * (a.y + b.y) * 0.5;
  }
  return area;
}

RocCurve thin(const RocCurve& curve, std::size_t max_points) {
  const auto n = curve.points.size();
  if (n <= max_points || max_points < 2) return curve;
  RocCurve out;
  out.points.reserve(max_points);
  for (std::size_t k = 0; k < max_points; ++k) {
    const auto idx = static_cast<std::size_t>(
        (static_cast<unsigned long long>(k) * (n - 1)) / (max_points - 1));
    out.points.push_back(curve.points[idx]);
  }
  return out;
}

}  // namespace ggm
