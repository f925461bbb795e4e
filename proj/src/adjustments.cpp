#include "ggmtest/adjustments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ggm {

namespace {

// 1 - (1 - p)^m evaluated as -expm1(m log1p(-p)), kept in [p, 1] for m >= 1.
double sidak_inflate(double p, double m) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return std::clamp(-std::expm1(m * std::log1p(-p)), p, 1.0);
}

// Ascending order of raw values, ties broken by original index.
std::vector<std::size_t> ascending_order(std::span<const double> raw) {
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  return order;
}

template <class StepFn>
std::vector<double> step_down(std::span<const double> raw, StepFn step) {
  const auto order = ascending_order(raw);
  const double m = static_cast<double>(raw.size());
  std::vector<double> out(raw.size());
  double running = 0.0;
  for (std::size_t b = 0; b < order.size(); ++b) {
    // rank b + 1 gets multiplier m - (b + 1) + 1
    running = std::max(running, step(raw[order[b]], m - static_cast<double>(b)));
    out[order[b]] = running;
  }
  return out;
}

void check_range(std::span<const double> raw) {
  for (double v : raw)
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p-value outside [0, 1]");
}

AdjustedPValues wrap(ProcedureKind kind, const EdgePValues& raw, std::vector<double> values) {
  return {kind, EdgePValues(raw.dim(), std::move(values))};
}

}  // namespace

std::string_view to_string(ProcedureKind kind) noexcept {
  switch (kind) {
    case ProcedureKind::Simultaneous: return "simultaneous";
    case ProcedureKind::Bonferroni: return "bonferroni";
    case ProcedureKind::Sidak: return "sidak";
    case ProcedureKind::HolmBonferroni: return "holm-bonferroni";
    case ProcedureKind::HolmSidak: return "holm-sidak";
  }
  return "unknown";
}

std::optional<ProcedureKind> parse_procedure(std::string_view name) noexcept {
  for (auto kind : kAllProcedures)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

std::vector<double> adjust_bonferroni(std::span<const double> raw) {
  check_range(raw);
  const double m = static_cast<double>(raw.size());
  std::vector<double> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(), [m](double p) { return std::min(m * p, 1.0); });
  return out;
}

std::vector<double> adjust_sidak(std::span<const double> raw) {
  check_range(raw);
  const double m = static_cast<double>(raw.size());
  std::vector<double> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(), [m](double p) { return sidak_inflate(p, m); });
  return out;
}

std::vector<double> adjust_holm_bonferroni(std::span<const double> raw) {
  check_range(raw);
  return step_down(raw, [](double p, double mult) { return std::min(mult * p, 1.0); });
}

std::vector<double> adjust_holm_sidak(std::span<const double> raw) {
  check_range(raw);
  const double m = static_cast<double>(raw.size());
  // capped by the single-step value so rounding cannot invert the dominance
  return step_down(raw, [m](double p, double mult) { return std::min(sidak_inflate(p, mult), sidak_inflate(p, m)); });
}

std::vector<double> adjust(ProcedureKind kind, std::span<const double> raw) {
  switch (kind) {
    case ProcedureKind::Simultaneous:
      check_range(raw);
      return {raw.begin(), raw.end()};
    case ProcedureKind::Bonferroni: return adjust_bonferroni(raw);
    case ProcedureKind::Sidak: return adjust_sidak(raw);
    case ProcedureKind::HolmBonferroni: return adjust_holm_bonferroni(raw);
    case ProcedureKind::HolmSidak: return adjust_holm_sidak(raw);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown procedure");
}

AdjustedPValues adjust_identity(const EdgePValues& raw) { return {ProcedureKind::Simultaneous, raw}; }

AdjustedPValues adjust_bonferroni(const EdgePValues& raw) {
  return wrap(ProcedureKind::Bonferroni, raw, adjust_bonferroni(std::span<const double>(raw.values())));
}

AdjustedPValues adjust_sidak(const EdgePValues& raw) {
  return wrap(ProcedureKind::Sidak, raw, adjust_sidak(std::span<const double>(raw.values())));
}

AdjustedPValues adjust_holm_bonferroni(const EdgePValues& raw) {
  return wrap(ProcedureKind::HolmBonferroni, raw, adjust_holm_bonferroni(std::span<const double>(raw.values())));
}

AdjustedPValues adjust_holm_sidak(const EdgePValues& raw) {
  return wrap(ProcedureKind::HolmSidak, raw, adjust_holm_sidak(std::span<const double>(raw.values())));
}

AdjustedPValues adjust(ProcedureKind kind, const EdgePValues& raw) {
  if (kind == ProcedureKind::Simultaneous) return adjust_identity(raw);
  return wrap(kind, raw, adjust(kind, std::span<const double>(raw.values())));
}

EdgeSet decide(const AdjustedPValues& adj, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  return decide_below(adj.values, alpha);
}

EdgeSet decide_below(const EdgePValues& values, double threshold) {
  EdgeSet out(values.dim());
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] < threshold) out.insert_index(k);
  return out;
}

}  // namespace ggm
