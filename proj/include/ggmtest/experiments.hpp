#pragma once

#include "ggmtest/adjustments.hpp"
#include "ggmtest/core_stats.hpp"
#include "ggmtest/metrics.hpp"
#include "ggmtest/model_gen.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ggm {

/// Default risk grid: 0, 0.05, ..., 1.
std::vector<double> default_alpha_grid();

struct ExperimentConfig {
  // Exactly one of generator / model_path.
  std::optional<GeneratorSpec> generator;
  std::optional<std::string> model_path;

  std::vector<std::size_t> n_list;
  std::vector<ProcedureKind> procedures;
  double alpha = 0.05;
  std::vector<double> alpha_grid = default_alpha_grid();
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  DfRule df_rule = DfRule::NMinusP;
  // Risk CSV: weight grid at the fixed decision alpha instead of the
  // coupled (threshold = weight) curve.
  bool decouple_risk_weight = false;

  /// Every violated constraint. `p` is the model dimension when known.
  std::vector<std::string> violations(std::optional<std::size_t> p = std::nullopt) const;
};

struct TrialOptions {
  std::span<const double> alpha_grid;
  bool retain_pvalues = false;
};

struct TrialResult {
  std::size_t trial_index = 0;
  std::size_t n = 0;
  ProcedureKind procedure = ProcedureKind::Simultaneous;
  ConfusionCounts confusion;
  double auc = 0.0;  // NaN when the true graph is empty or complete
  // FP / FN when deciding at each alpha_grid value as the threshold
  std::vector<std::size_t> grid_fp;
  std::vector<std::size_t> grid_fn;
  std::vector<double> adjusted;  // only with retain_pvalues
  std::size_t redraws = 0;
};

/// One dataset, raw p-values computed once, every procedure applied to it.
/// Throws ErrorKind::DegenerateSample on a singular sample covariance.
std::vector<TrialResult> run_trial(const TrueModel& model, std::size_t n, std::span<const ProcedureKind> procedures,
                                   double alpha, std::uint64_t trial_seed, DfRule df_rule,
                                   const TrialOptions& options = {});

inline constexpr std::uint64_t kRedrawSalt = 0xD1B54A32D192ED03ULL;
inline constexpr std::size_t kMaxRedraws = 100;

/// run_trial, re-drawing with seed = splitmix64(seed ^ kRedrawSalt) after
/// each degenerate sample. The number of re-draws is stored on each result.
std::vector<TrialResult> run_trial_redrawing(const TrueModel& model, std::size_t n,
                                             std::span<const ProcedureKind> procedures, double alpha,
                                             std::uint64_t trial_seed, DfRule df_rule,
                                             const TrialOptions& options = {});

/// Seed of trial `trial_index` at sample size n.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial_index);

struct SummaryRow {
  ProcedureKind procedure = ProcedureKind::Simultaneous;
  std::size_t n = 0;
  double alpha = 0.05;
  std::size_t trials = 0;
  std::size_t failed_trials = 0;
  double fwer_hat = 0.0;  // fraction of trials with FP > 0
  double p_fn_pos = 0.0;  // fraction of trials with FN > 0
  double mean_fp = 0.0;
  double mean_fn = 0.0;
  double mean_auc = 0.0;
  std::vector<double> alpha_grid;
  std::vector<double> grid_mean_fp;
  std::vector<double> grid_mean_fn;
  std::vector<RiskValue> risk;  // weight grid at the fixed decision alpha
  std::uint64_t seed = 0;
};

/// Aggregates trials of one (procedure, n) cell in the order given.
SummaryRow summarize(std::span<const TrialResult> trials, std::span<const double> alpha_grid, double alpha,
                     std::uint64_t seed);

/// Threshold and risk weight coupled: at each grid value a, procedures are
/// re-decided at a and the risk is weighted by a.
std::vector<RiskValue> risk_curve(const SummaryRow& row);

struct PooledRoc {
  ProcedureKind procedure = ProcedureKind::Simultaneous;
  std::size_t n = 0;
  RocCurve curve;
};

struct ExecutionOptions {
  unsigned threads = 1;  // 0 picks the hardware concurrency
  bool pooled_roc = false;
  std::size_t roc_max_points = 512;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;  // procedure-major, n in config order
  std::vector<PooledRoc> roc;
  std::size_t failed_trials = 0;
};

/// Generated from config.generator, or loaded from config.model_path.
TrueModel build_model(const ExperimentConfig& config);

/// Runs every (n, trial) cell, in parallel when asked; output does not
/// depend on the thread count. Throws ErrorKind::Config listing every
/// violation before any trial runs.
ExperimentResult run_experiment(const ExperimentConfig& config, const TrueModel& model,
                                const ExecutionOptions& options = {});

}  // namespace ggm
