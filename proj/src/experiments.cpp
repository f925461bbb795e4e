#include "ggmtest/experiments.hpp"

#include "ggmtest/io.hpp"
#include "ggmtest/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace ggm {

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);
  return grid;
}

std::vector<std::string> ExperimentConfig::violations(std::optional<std::size_t> p) const {
  std::vector<std::string> out;
  if (generator && model_path) out.push_back("give either generator parameters or model_path, not both");
  if (!generator && !model_path) out.push_back("missing model: give p with m or q, or model_path");
  if (generator) {
    for (auto& v : generator->violations()) out.push_back(v);
    if (!p) p = generator->p;
  }
  if (trials < 1) out.push_back("trials must be at least 1");
  if (n_list.empty()) out.push_back("n_list must not be empty");
  std::set<std::size_t> seen_n;
  for (auto n : n_list) {
    if (!seen_n.insert(n).second) out.push_back("n_list contains " + std::to_string(n) + " more than once");
    if (p) {
      const std::size_t need = *p + (df_rule == DfRule::NMinusP ? 2 : 3);
      if (n < need)
        out.push_back("n = " + std::to_string(n) + " is below the minimum " + std::to_string(need) +
                      " (n >= p + 2 with df rule " + to_string(df_rule) + ")");
    }
  }
  if (procedures.empty()) out.push_back("procedures must not be empty");
  std::set<ProcedureKind> seen_proc;
  for (auto proc : procedures)
    if (!seen_proc.insert(proc).second) out.push_back("procedure " + std::string(to_string(proc)) + " listed twice");
  if (!(alpha > 0.0 && alpha < 1.0)) out.push_back("alpha must lie in (0, 1)");
  for (double a : alpha_grid)
    if (!(a >= 0.0 && a <= 1.0)) {
      std::ostringstream msg;
      msg << "alpha_grid value " << a << " outside [0, 1]";
      out.push_back(msg.str());
    }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::size_t trial_index) {
  return derive_seed(derive_seed(master_seed, n), trial_index);
}

std::vector<TrialResult> run_trial(const TrueModel& model, std::size_t n, std::span<const ProcedureKind> procedures,
                                   double alpha, std::uint64_t seed, DfRule df_rule, const TrialOptions& options) {
  const auto data = sample_mvn(model.covariance, n, seed);
  const auto raw = raw_pvalues(data, df_rule);
  const auto& truth = model.edges;
  const bool roc_defined = !truth.empty() && truth.size() < pair_count(truth.dim());

  std::vector<TrialResult> out;
  out.reserve(procedures.size());
  for (auto proc : procedures) {
    const auto adj = adjust(proc, raw);
    TrialResult r;
    r.n = n;
    r.procedure = proc;
    r.confusion = confusion(truth, decide(adj, alpha));
    r.auc = roc_defined ? auc(roc_curve(adj.values, truth)) : std::numeric_limits<double>::quiet_NaN();
    r.grid_fp.reserve(options.alpha_grid.size());
    r.grid_fn.reserve(options.alpha_grid.size());
    for (double a : options.alpha_grid) {
      const auto c = confusion(truth, decide_below(adj.values, a));
      r.grid_fp.push_back(c.fp);
      r.grid_fn.push_back(c.fn);
    }
    if (options.retain_pvalues) r.adjusted = adj.values.values();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialResult> run_trial_redrawing(const TrueModel& model, std::size_t n,
                                             std::span<const ProcedureKind> procedures, double alpha,
                                             std::uint64_t seed, DfRule df_rule, const TrialOptions& options) {
  for (std::size_t redraws = 0;; ++redraws) {
    try {
      auto results = run_trial(model, n, procedures, alpha, seed, df_rule, options);
      for (auto& r : results) r.redraws = redraws;
      return results;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateSample || redraws + 1 >= kMaxRedraws) throw;
      seed = splitmix64(seed ^ kRedrawSalt);
    }
  }
}

SummaryRow summarize(std::span<const TrialResult> trials, std::span<const double> alpha_grid, double alpha,
                     std::uint64_t seed) {
  if (trials.empty()) throw Error(ErrorKind::InvalidArgument, "cannot summarize zero trials");
  SummaryRow row;
  row.procedure = trials.front().procedure;
  row.n = trials.front().n;
  row.alpha = alpha;
  row.trials = trials.size();
  row.seed = seed;
  row.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  row.grid_mean_fp.assign(alpha_grid.size(), 0.0);
  row.grid_mean_fn.assign(alpha_grid.size(), 0.0);

  std::vector<std::size_t> fps;
  fps.reserve(trials.size());
  std::size_t fn_pos = 0, sum_fp = 0, sum_fn = 0;
  double sum_auc = 0.0;
  for (const auto& t : trials) {
    fps.push_back(t.confusion.fp);
    fn_pos += t.confusion.fn > 0 ? 1 : 0;
    sum_fp += t.confusion.fp;
    sum_fn += t.confusion.fn;
    sum_auc += t.auc;
    row.failed_trials += t.redraws;
    for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
      row.grid_mean_fp[k] += static_cast<double>(t.grid_fp.at(k));
      row.grid_mean_fn[k] += static_cast<double>(t.grid_fn.at(k));
    }
  }
  const double count = static_cast<double>(trials.size());
  row.fwer_hat = fwer(fps);
  row.p_fn_pos = static_cast<double>(fn_pos) / count;
  row.mean_fp = static_cast<double>(sum_fp) / count;
  row.mean_fn = static_cast<double>(sum_fn) / count;
  row.mean_auc = sum_auc / count;
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    row.grid_mean_fp[k] /= count;
    row.grid_mean_fn[k] /= count;
    row.risk.push_back(risk(row.mean_fp, row.mean_fn, alpha_grid[k]));
  }
  return row;
}

std::vector<RiskValue> risk_curve(const SummaryRow& row) {
  std::vector<RiskValue> out;
  out.reserve(row.alpha_grid.size());
  for (std::size_t k = 0; k < row.alpha_grid.size(); ++k)
    out.push_back(risk(row.grid_mean_fp.at(k), row.grid_mean_fn.at(k), row.alpha_grid[k]));
  return out;
}

TrueModel build_model(const ExperimentConfig& config) {
  if (config.model_path) return load_model(*config.model_path);
  if (!config.generator) throw Error(ErrorKind::Config, "experiment config has no model");
  return generate_model(*config.generator);
}

namespace {

PooledRoc pooled_curve(std::span<const TrialResult* const> cell, const EdgeSet& truth, std::size_t max_points) {
  std::vector<double> scores;
  std::vector<bool> labels;
  const auto& mask = truth.mask();
  for (const auto* t : cell) {
    scores.insert(scores.end(), t->adjusted.begin(), t->adjusted.end());
    labels.insert(labels.end(), mask.begin(), mask.end());
  }
  PooledRoc out;
  out.procedure = cell.front()->procedure;
  out.n = cell.front()->n;
  out.curve = thin(roc_curve(scores, labels), max_points);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const TrueModel& model,
                                const ExecutionOptions& options) {
  const auto problems = config.violations(model.dim());
  if (!problems.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw Error(ErrorKind::Config, msg);
  }

  const std::size_t cells = config.n_list.size() * config.trials;
  std::vector<std::vector<TrialResult>> results(cells);
  TrialOptions trial_options{config.alpha_grid, options.pooled_roc};

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      const std::size_t n = config.n_list[cell / config.trials];
      const std::size_t trial = cell % config.trials;
      try {
        auto rs = run_trial_redrawing(model, n, config.procedures, config.alpha,
                                      trial_seed(config.master_seed, n, trial), config.df_rule, trial_options);
        for (auto& r : rs) r.trial_index = trial;
        results[cell] = std::move(rs);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult out;
  const bool roc_defined = !model.edges.empty() && model.edges.size() < pair_count(model.dim());
  for (std::size_t pi = 0; pi < config.procedures.size(); ++pi) {
    for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
      std::vector<TrialResult> cell;
      std::vector<const TrialResult*> cell_refs;
      cell.reserve(config.trials);
      for (std::size_t t = 0; t < config.trials; ++t) {
        const auto& r = results[ni * config.trials + t][pi];
        cell_refs.push_back(&r);
        TrialResult light = r;
        light.adjusted.clear();
        cell.push_back(std::move(light));
      }
      out.rows.push_back(summarize(cell, config.alpha_grid, config.alpha, config.master_seed));
      if (options.pooled_roc && roc_defined) out.roc.push_back(pooled_curve(cell_refs, model.edges, options.roc_max_points));
    }
  }
  for (std::size_t ni = 0; ni < config.n_list.size(); ++ni)
    for (std::size_t t = 0; t < config.trials; ++t)
      out.failed_trials += results[ni * config.trials + t].front().redraws;
  return out;
}

}  // namespace ggm
