// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include "ggmtest/adjustments.hpp"
#include "ggmtest/core_stats.hpp"
#include "ggmtest/experiments.hpp"
#include "ggmtest/io.hpp"
#include "ggmtest/metrics.hpp"
#include "ggmtest/model_gen.hpp"
#include "ggmtest/rng.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace ggm;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ExecutionOptions parallel() {
  ExecutionOptions opts;
  opts.threads = 0;
  return opts;
}

const std::vector<ProcedureKind> kAdjusting = {ProcedureKind::Bonferroni, ProcedureKind::Sidak,
                                               ProcedureKind::HolmBonferroni, ProcedureKind::HolmSidak};

const SummaryRow& row_for(const ExperimentResult& r, ProcedureKind kind, std::size_t n) {
  for (const auto& row : r.rows)
    if (row.procedure == kind && row.n == n) return row;
  throw std::runtime_error("missing summary row");
}

GeneratorSpec density_spec(double q, std::uint64_t seed) {
  GeneratorSpec g;
  g.p = 25;
  g.density = q;
  g.rho_min = 0.2;
  g.rho_max = 0.55;
  g.seed = seed;
  return g;
}

// Summaries produced by the experiment criteria, reused by the risk checks.
std::vector<SummaryRow> g_rows;

void keep(const ExperimentResult& r) { g_rows.insert(g_rows.end(), r.rows.begin(), r.rows.end()); }

Verdict global_null() {
  Verdict v;
  const auto start = Clock::now();
  ExperimentConfig c;
  GeneratorSpec g;
  g.p = 10;
  g.edges = 0;
  c.generator = g;
  c.n_list = {50};
  c.procedures = kAdjusting;
  c.trials = 2000;
  c.master_seed = 101;
  const auto model = build_model(c);
  const auto result = run_experiment(c, model, parallel());
  keep(result);
  v.require(model.concentration.values == Matrix::Identity(10, 10), "edgeless model is the identity");
  for (auto kind : kAdjusting) {
    const double f = row_for(result, kind, 50).fwer_hat;
    v.detail << ' ' << to_string(kind) << '=' << f;
    v.require(f <= 0.0646, std::string(to_string(kind)) + " fwer_hat <= 0.0646");
  }
  const double elapsed = seconds_since(start);
  v.detail << " time=" << elapsed << "s";
  v.require(elapsed <= 120.0, "runtime <= 2 min");
  return v;
}

Verdict moderate_density_trend() {
  Verdict v;
  const auto start = Clock::now();
  ExperimentConfig c;
  c.generator = density_spec(0.2, 1);
  c.n_list = {100, 200, 300, 400, 500};
  c.procedures = {ProcedureKind::Bonferroni};
  c.alpha = 0.05;
  c.trials = 1000;
  c.master_seed = 202;
  const auto model = build_model(c);
  const auto result = run_experiment(c, model, parallel());
  keep(result);
  double prev_fn = std::numeric_limits<double>::infinity();
  for (std::size_t n : c.n_list) {
    const auto& row = row_for(result, ProcedureKind::Bonferroni, n);
    v.detail << " n=" << n << ":fwer=" << row.fwer_hat << ",p_fn_pos=" << row.p_fn_pos << ",mean_fn=" << row.mean_fn;
    v.require(row.fwer_hat >= 0.02 && row.fwer_hat <= 0.12, "fwer_hat in [0.02, 0.12] at n=" + std::to_string(n));
    v.require(row.p_fn_pos == 1.0, "p_fn_pos = 1 at n=" + std::to_string(n));
    v.require(row.mean_fn < prev_fn * 1.05, "mean_fn decreasing within 5% at n=" + std::to_string(n));
    prev_fn = row.mean_fn;
  }
  v.require(row_for(result, ProcedureKind::Bonferroni, 500).mean_fn < row_for(result, ProcedureKind::Bonferroni, 100).mean_fn,
            "mean_fn(500) < mean_fn(100)");
  const double elapsed = seconds_since(start);
  v.detail << " time=" << elapsed << "s";
  v.require(elapsed <= 900.0, "runtime <= 15 min");
  return v;
}

Verdict density_effect() {
  Verdict v;
  std::vector<SummaryRow> rows;
  for (double q : {0.2, 0.6, 0.95}) {
    ExperimentConfig c;
    c.generator = density_spec(q, 1);
    c.n_list = {100};
    c.procedures = {ProcedureKind::HolmSidak};
    c.trials = 1000;
    c.master_seed = 303;
    const auto model = build_model(c);
    const auto result = run_experiment(c, model, parallel());
    keep(result);
    rows.push_back(result.rows.front());
    v.detail << " q=" << q << ":mean_fn=" << rows.back().mean_fn << ",fwer=" << rows.back().fwer_hat
             << ",delta=" << model.delta;
  }
  v.require(rows[2].mean_fn > rows[1].mean_fn, "mean_fn(0.95) > mean_fn(0.6)");
  v.require(rows[1].mean_fn > rows[0].mean_fn, "mean_fn(0.6) > mean_fn(0.2)");
  v.require(rows[2].fwer_hat < rows[0].fwer_hat, "fwer_hat(0.95) < fwer_hat(0.2)");
  return v;
}

ExperimentConfig learning_curve_config() {
  ExperimentConfig c;
  GeneratorSpec g;
  g.p = 7;
  g.edges = 9;
  g.rho_min = 0.2;
  g.rho_max = 0.55;
  g.seed = 1;
  c.generator = g;
  c.n_list = {10, 20, 50, 100, 150};
  c.procedures.assign(kAllProcedures.begin(), kAllProcedures.end());
  c.trials = 500;
  c.master_seed = 404;
  return c;
}

Verdict roc_learning_curve() {
  Verdict v;
  const auto c = learning_curve_config();
  const auto result = run_experiment(c, build_model(c), parallel());
  keep(result);
  for (auto kind : kAllProcedures) {
    const double gain = row_for(result, kind, 150).mean_auc - row_for(result, kind, 10).mean_auc;
    v.detail << ' ' << to_string(kind) << ":gain=" << gain;
    v.require(gain >= 0.15, std::string(to_string(kind)) + " AUC(150) - AUC(10) >= 0.15");
  }
  for (std::size_t n : c.n_list) {
    const double gap = std::fabs(row_for(result, ProcedureKind::Sidak, n).mean_auc -
                                 row_for(result, ProcedureKind::Simultaneous, n).mean_auc);
    v.detail << " n=" << n << ":|sidak-simul|=" << gap;
    v.require(gap <= 0.02, "|AUC(sidak) - AUC(simultaneous)| <= 0.02 at n=" + std::to_string(n));
  }
  return v;
}

Verdict risk_exactness() {
  Verdict v;
  std::size_t checked = 0;
  double worst = 0.0;
  for (const auto& row : g_rows) {
    const double fp = row.mean_fp, fn = row.mean_fn;
    v.require(risk(fp, fn, 0.0).value == fp, "risk(0) = mean_fp");
    v.require(risk(fp, fn, 1.0).value == fn, "risk(1) = mean_fn");
    for (std::size_t k = 0; k < row.risk.size(); ++k) {
      if (row.alpha_grid[k] == 0.0) v.require(row.risk[k].value == fp, "summary risk at weight 0 = mean_fp");
      if (row.alpha_grid[k] == 1.0) v.require(row.risk[k].value == fn, "summary risk at weight 1 = mean_fn");
    }
    const double lhs = risk(fp, fn, 0.3).value + risk(fp, fn, 0.7).value;
    const double rhs = risk(fp, fn, 0.0).value + risk(fp, fn, 1.0).value;
    worst = std::max(worst, std::fabs(lhs - rhs));
    ++checked;
  }
  v.require(worst <= 1e-12, "risk(0.3) + risk(0.7) = risk(0) + risk(1) to 1e-12");
  v.require(checked > 0, "at least one summary");
  v.detail << " summaries=" << checked << " max_linearity_error=" << worst;
  return v;
}

std::vector<double> random_family(Rng& rng) {
  const std::size_t m = 1 + rng.index(300);
  std::vector<double> v(m);
  const int style = static_cast<int>(rng.index(3));
  for (auto& x : v) {
    if (style == 0) {
      x = rng.uniform01();
    } else if (style == 1) {
      x = std::pow(rng.uniform01(), 6.0);  // crowded near zero
    } else {
      switch (rng.index(5)) {
        case 0: x = 0.0; break;
        case 1: x = 1.0; break;
        case 2: x = 0.25; break;
        default: x = rng.uniform01();
      }
    }
  }
  return v;
}

Verdict adjustment_oracles() {
  Verdict v;
  Rng rng(606);
  double worst = 0.0;
  std::size_t violations = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const auto raw = random_family(rng);
    const auto bonf = adjust_bonferroni(raw);
    const auto sid = adjust_sidak(raw);
    const auto hb = adjust_holm_bonferroni(raw);
    const auto hs = adjust_holm_sidak(raw);
    const auto o_bonf = oracle::bonferroni(raw);
    const auto o_sid = oracle::sidak(raw);
    const auto o_hb = oracle::holm_bonferroni(raw);
    const auto o_hs = oracle::holm_sidak(raw);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      worst = std::max({worst, std::fabs(bonf[k] - o_bonf[k]), std::fabs(sid[k] - o_sid[k]),
                        std::fabs(hb[k] - o_hb[k]), std::fabs(hs[k] - o_hs[k])});
      if (!(raw[k] <= hb[k] && hb[k] <= bonf[k])) ++violations;
      if (!(raw[k] <= hs[k] && hs[k] <= sid[k])) ++violations;
    }
  }
  v.detail << " vectors=10000 max_abs_diff=" << worst << " dominance_violations=" << violations;
  v.require(worst <= 1e-12, "oracle agreement to 1e-12");
  v.require(violations == 0, "zero dominance violations");
  return v;
}

Verdict null_calibration() {
  Verdict v;
  const auto model = model_from_concentration(oracle::seven_vertex_matrix());
  std::vector<double> pvals;
  pvals.reserve(2000);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    const auto raw = raw_pvalues(sample_mvn(model.covariance, 100, derive_seed(707, t)), DfRule::NMinusP);
    pvals.push_back(raw.at(0, 2));  // vertices 1 and 3 are not adjacent
  }
  const double d = oracle::ks_uniform(pvals);
  const double crit = oracle::ks_critical_1pct(pvals.size());
  v.detail << " D=" << d << " critical=" << crit;
  v.require(d < crit, "KS statistic below the 1% critical value");
  return v;
}

Verdict confusion_oracle() {
  Verdict v;
  Rng rng(808);
  std::size_t mismatches = 0;
  for (int rep = 0; rep < 500; ++rep) {
    EdgeSet truth(5), inferred(5);
    std::set<std::pair<std::size_t, std::size_t>> t_set, i_set;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) {
        if (rng.uniform01() < 0.5) {
          truth.insert(i, j);
          t_set.insert({i, j});
        }
        if (rng.uniform01() < 0.5) {
          inferred.insert(i, j);
          i_set.insert({i, j});
        }
      }
    const auto got = confusion(truth, inferred);
    const auto want = oracle::confusion(5, t_set, i_set);
    if (got.tp != want.tp || got.fp != want.fp || got.tn != want.tn || got.fn != want.fn) ++mismatches;
  }
  v.detail << " pairs=500 mismatches=" << mismatches;
  v.require(mismatches == 0, "exact agreement");
  return v;
}

Verdict determinism() {
  Verdict v;
  auto c = learning_curve_config();
  c.n_list = {10, 50, 150};
  c.trials = 200;
  const auto model = build_model(c);
  auto render = [&](unsigned threads) {
    ExecutionOptions opts;
    opts.threads = threads;
    opts.pooled_roc = true;
    const auto r = run_experiment(c, model, opts);
    return results_csv(r) + risk_csv(r, false) + risk_csv(r, true) + roc_csv(r);
  };
  const auto first = render(1);
  const auto second = render(1);
  const auto threaded = render(4);
  v.detail << " bytes=" << first.size();
  v.require(first == second, "two single-threaded runs identical");
  v.require(first == threaded, "single-threaded and 4-thread runs identical");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 global-null FWER control", global_null},
      {"2 p=25 q=0.2 bonferroni FWER and miss trend", moderate_density_trend},
      {"3 density effect under holm-sidak", density_effect},
      {"4 ROC AUC learning curve", roc_learning_curve},
      {"5 risk endpoints and linearity", risk_exactness},
      {"6 adjustment oracle equivalence", adjustment_oracles},
      {"7 null p-value calibration", null_calibration},
      {"8 confusion oracle equivalence", confusion_oracle},
      {"9 determinism across runs and threads", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %s:%s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
