// ggmtest command line front end. Every operation goes through the C API.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime or
// numerical error.

#include "ggmtest/ggmtest.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct ModelDeleter {
  void operator()(ggm_model* m) const { ggm_model_free(m); }
};
struct DataDeleter {
  void operator()(ggm_data* d) const { ggm_data_free(d); }
};
struct InferenceDeleter {
  void operator()(ggm_inference* i) const { ggm_inference_free(i); }
};
using ModelPtr = std::unique_ptr<ggm_model, ModelDeleter>;
using DataPtr = std::unique_ptr<ggm_data, DataDeleter>;
using InferencePtr = std::unique_ptr<ggm_inference, InferenceDeleter>;

class CommandFailed : public std::exception {
 public:
  explicit CommandFailed(int code) : code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

void check(ggm_status status, const std::string& context) {
  if (status == GGM_OK) return;
  std::cerr << "ggmtest: " << context << ": " << ggm_last_error() << "\n";
  const bool usage = status == GGM_ERR_CONFIG || status == GGM_ERR_INVALID_ARGUMENT;
  throw CommandFailed(usage ? kExitUsage : kExitRuntime);
}

const CLI::Validator kProcedureName =
    CLI::IsMember({"simultaneous", "bonferroni", "sidak", "holm-bonferroni", "holm-sidak"});
const CLI::Validator kDfRuleName = CLI::IsMember({"n-p", "n-p-2"});

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value must lie strictly between 0 and 1";
    },
    "(0,1)");

struct GenerateArgs {
  std::size_t p = 0;
  std::size_t edges = 0;
  double q = 0.0;
  double rho_min = 0.2;
  double rho_max = 0.55;
  std::uint64_t seed = 0;
  bool random_sign = false;
  std::string out;
};

struct SimulateArgs {
  std::string model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct InferArgs {
  std::string data;
  std::string procedure;
  double alpha = 0.05;
  std::string df_rule = "n-p";
  std::string out;
  std::string truth;
};

struct ExperimentArgs {
  std::string config;
  std::string out_dir;
  unsigned threads = 0;
  bool decouple = false;
};

struct PlotArgs {
  std::string results;
  std::string kind;
  std::size_t n = 0;
  std::string out;
};

void run_generate(const GenerateArgs& a, bool use_density) {
  ggm_generator_spec spec;
  ggm_generator_spec_init(&spec);
  spec.p = a.p;
  spec.use_density = use_density ? 1 : 0;
  spec.edges = a.edges;
  spec.density = a.q;
  spec.rho_min = a.rho_min;
  spec.rho_max = a.rho_max;
  spec.seed = a.seed;
  spec.random_sign = a.random_sign ? 1 : 0;

  ggm_model* raw = nullptr;
  check(ggm_model_generate(&spec, &raw), "generate-model");
  ModelPtr model(raw);
  check(ggm_model_save(model.get(), a.out.c_str()), "generate-model");
  std::cout << "edges: " << ggm_model_edge_count(model.get()) << "\n"
            << "repaired: " << (ggm_model_repaired(model.get()) ? "yes" : "no") << "\n"
            << "delta: " << ggm_model_delta(model.get()) << "\n";
}

void run_simulate(const SimulateArgs& a) {
  ggm_model* raw_model = nullptr;
  check(ggm_model_load(a.model.c_str(), &raw_model), "simulate");
  ModelPtr model(raw_model);
  ggm_data* raw_data = nullptr;
  // a bad model file is a runtime error, whatever the status
  if (ggm_simulate(model.get(), a.n, a.seed, &raw_data) != GGM_OK) {
    std::cerr << "ggmtest: simulate: " << ggm_last_error() << "\n";
    throw CommandFailed(kExitRuntime);
  }
  DataPtr data(raw_data);
  check(ggm_data_save_csv(data.get(), a.out.c_str()), "simulate");
}

void run_infer(const InferArgs& a) {
  ggm_data* raw_data = nullptr;
  check(ggm_data_load_csv(a.data.c_str(), &raw_data), "infer");
  DataPtr data(raw_data);
  ggm_df_rule rule;
  check(ggm_parse_df_rule(a.df_rule.c_str(), &rule), "infer");

  ModelPtr truth;
  if (!a.truth.empty()) {
    ggm_model* raw_model = nullptr;
    check(ggm_model_load(a.truth.c_str(), &raw_model), "infer");
    truth.reset(raw_model);
  }

  ggm_inference* raw_inf = nullptr;
  const auto status = ggm_infer(data.get(), a.procedure.c_str(), a.alpha, rule, &raw_inf);
  if (status == GGM_ERR_INSUFFICIENT_SAMPLE || status == GGM_ERR_DEGENERATE_SAMPLE) {
    std::cerr << "ggmtest: infer: " << ggm_last_error() << "\n";
    throw CommandFailed(kExitRuntime);
  }
  check(status, "infer");
  InferencePtr inference(raw_inf);
  check(ggm_inference_save_json(inference.get(), a.out.c_str()), "infer");
  std::cout << "edges: " << ggm_inference_edge_count(inference.get()) << "\n";

  if (truth) {
    ggm_confusion c;
    check(ggm_inference_confusion(inference.get(), truth.get(), &c), "infer");
    std::cout << "tp: " << c.tp << "\nfp: " << c.fp << "\ntn: " << c.tn << "\nfn: " << c.fn << "\n";
  }
}

void run_experiment(const ExperimentArgs& a) {
  std::size_t failed = 0;
  check(ggm_experiment_run(a.config.c_str(), a.out_dir.c_str(), a.threads, a.decouple ? 1 : -1, &failed),
        "experiment");
  std::cout << "wrote results.csv, risk.csv, roc.csv, manifest.json to " << a.out_dir << "\n"
            << "failed trials: " << failed << "\n";
}

void run_plot(const PlotArgs& a) {
  const auto status = ggm_plot(a.results.c_str(), a.kind.c_str(), a.n, a.out.c_str());
  if (status != GGM_OK) {
    std::cerr << "ggmtest: plot: " << ggm_last_error() << "\n";
    throw CommandFailed(kExitRuntime);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian graphical model identification by multiple testing of partial correlations", "ggmtest"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ggm_version()));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate-model", "Generate a random sparse concentration matrix");
  generate->add_option("--p", gen.p, "Number of vertices")->required()->check(CLI::Range(std::size_t{2}, std::size_t{10000}));
  auto* edges_opt = generate->add_option("--edges", gen.edges, "Exact number of edges");
  auto* q_opt = generate->add_option("--q", gen.q, "Edge density in [0,1]; edges = round(q * C(p,2))")
                    ->check(CLI::Range(0.0, 1.0));
  edges_opt->excludes(q_opt);
  generate->add_option("--rho-min", gen.rho_min, "Smallest off-diagonal magnitude")->capture_default_str();
  generate->add_option("--rho-max", gen.rho_max, "Largest off-diagonal magnitude")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_flag("--random-sign", gen.random_sign, "Give each edge a random sign");
  generate->add_option("--out", gen.out, "Output model JSON")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw multivariate normal observations from a model");
  simulate->add_option("--model", sim.model, "Model JSON")->required();
  simulate->add_option("--n", sim.n, "Number of observations")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output data CSV")->required();

  InferArgs inf;
  auto* infer = app.add_subcommand("infer", "Infer the edge set of one dataset");
  infer->add_option("--data", inf.data, "Data CSV with header Y1,...,Yp")->required();
  infer->add_option("--procedure", inf.procedure,
                    "simultaneous, bonferroni, sidak, holm-bonferroni or holm-sidak")
      ->required()
      ->check(kProcedureName);
  infer->add_option("--alpha", inf.alpha, "Significance level")->check(kOpenUnit)->capture_default_str();
  infer->add_option("--df-rule", inf.df_rule, "Degrees of freedom: n-p or n-p-2")
      ->check(kDfRuleName)
      ->capture_default_str();
  infer->add_option("--out", inf.out, "Output edge list JSON")->required();
  infer->add_option("--truth", inf.truth, "Model JSON to score the inferred graph against");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a JSON config");
  experiment->add_option("--config", exp.config, "Experiment config JSON")->required();
  experiment->add_option("--out-dir", exp.out_dir, "Directory for results.csv, risk.csv, roc.csv, manifest.json")
      ->required();
  experiment->add_option("--threads", exp.threads, "Worker threads, 0 for all cores")->capture_default_str();
  experiment->add_flag("--decouple-risk-weight", exp.decouple,
                       "Risk CSV over a weight grid at the fixed decision alpha");

  PlotArgs plt;
  auto* plot = app.add_subcommand("plot", "Render experiment results as an SVG line chart");
  plot->add_option("--results", plt.results, "roc.csv, risk.csv or results.csv")->required();
  plot->add_option("--kind", plt.kind, "roc, risk or fn-vs-n")->required()->check(CLI::IsMember({"roc", "risk", "fn-vs-n"}));
  plot->add_option("--n", plt.n, "Only plot rows with this n");
  plot->add_option("--out", plt.out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) {
      if (edges_opt->count() == 0 && q_opt->count() == 0) {
        std::cerr << "ggmtest: generate-model: one of --edges or --q is required\n" << generate->help();
        return kExitUsage;
      }
      run_generate(gen, q_opt->count() > 0);
    } else if (*simulate) {
      run_simulate(sim);
    } else if (*infer) {
      run_infer(inf);
    } else if (*experiment) {
      run_experiment(exp);
    } else if (*plot) {
      run_plot(plt);
    }
  } catch (const CommandFailed& e) {
    return e.code();
  }
  return 0;
}
