#include "ggmtest/ggmtest.h"

#include "ggmtest/adjustments.hpp"
#include "ggmtest/core_stats.hpp"
#include "ggmtest/experiments.hpp"
#include "ggmtest/io.hpp"
#include "ggmtest/metrics.hpp"
#include "ggmtest/model_gen.hpp"
#include "ggmtest/plot.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

struct ggm_model {
  ggm::TrueModel model;
};

struct ggm_data {
  ggm::ObservationMatrix data;
};

struct ggm_inference {
  ggm::AdjustedPValues adjusted;
  ggm::EdgeSet edges;
  double alpha = 0.05;
  ggm::DfRule df_rule = ggm::DfRule::NMinusP;
  std::size_t n = 0;
};

namespace {

thread_local std::string g_last_error;

ggm_status status_of(ggm::ErrorKind kind) {
  switch (kind) {
    case ggm::ErrorKind::InvalidArgument: return GGM_ERR_INVALID_ARGUMENT;
    case ggm::ErrorKind::InsufficientSample: return GGM_ERR_INSUFFICIENT_SAMPLE;
    case ggm::ErrorKind::DegenerateSample: return GGM_ERR_DEGENERATE_SAMPLE;
    case ggm::ErrorKind::GenerationFailure: return GGM_ERR_GENERATION_FAILURE;
    case ggm::ErrorKind::Io: return GGM_ERR_IO;
    case ggm::ErrorKind::Parse: return GGM_ERR_PARSE;
    case ggm::ErrorKind::Config: return GGM_ERR_CONFIG;
  }
  return GGM_ERR_INTERNAL;
}

ggm_status fail(ggm_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class Fn>
ggm_status guarded(Fn&& fn) {
  try {
    fn();
    return GGM_OK;
  } catch (const ggm::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GGM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GGM_ERR_INTERNAL, e.what());
  }
}

void require(const void* ptr, const char* what) {
  if (!ptr) throw ggm::Error(ggm::ErrorKind::InvalidArgument, std::string(what) + " must not be null");
}

ggm::DfRule to_rule(ggm_df_rule rule) {
  switch (rule) {
    case GGM_DF_N_MINUS_P: return ggm::DfRule::NMinusP;
    case GGM_DF_N_MINUS_P_MINUS_2: return ggm::DfRule::NMinusPMinus2;
  }
  throw ggm::Error(ggm::ErrorKind::InvalidArgument, "unknown df rule");
}

ggm::ProcedureKind to_procedure(const char* name) {
  require(name, "procedure");
  const auto kind = ggm::parse_procedure(name);
  if (!kind)
    throw ggm::Error(ggm::ErrorKind::InvalidArgument,
                     std::string("unknown procedure '") + name +
                         "' (expected simultaneous, bonferroni, sidak, holm-bonferroni, holm-sidak)");
  return *kind;
}

}  // namespace

extern "C" {

const char* ggm_version(void) { return "1.0.0"; }

const char* ggm_last_error(void) { return g_last_error.c_str(); }

const char* ggm_status_name(ggm_status status) {
  switch (status) {
    case GGM_OK: return "ok";
    case GGM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GGM_ERR_INSUFFICIENT_SAMPLE: return "insufficient sample";
    case GGM_ERR_DEGENERATE_SAMPLE: return "degenerate sample";
    case GGM_ERR_GENERATION_FAILURE: return "generation failure";
    case GGM_ERR_IO: return "i/o error";
    case GGM_ERR_PARSE: return "parse error";
    case GGM_ERR_CONFIG: return "config error";
    case GGM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ggm_generator_spec_init(ggm_generator_spec* spec) {
  if (!spec) return;
  *spec = ggm_generator_spec{};
  spec->p = 2;
  spec->rho_min = 0.2;
  spec->rho_max = 0.55;
}

ggm_status ggm_model_generate(const ggm_generator_spec* spec, ggm_model** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    ggm::GeneratorSpec s;
    s.p = spec->p;
    if (spec->use_density) s.density = spec->density;
    else s.edges = spec->edges;
    s.rho_min = spec->rho_min;
    s.rho_max = spec->rho_max;
    s.seed = spec->seed;
    s.random_sign = spec->random_sign != 0;
    *out = new ggm_model{ggm::generate_model(s)};
  });
}

ggm_status ggm_model_load(const char* path, ggm_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ggm_model{ggm::load_model(path)};
  });
}

ggm_status ggm_model_from_matrix(size_t p, const double* row_major, ggm_model** out) {
  return guarded([&] {
    require(row_major, "matrix");
    require(out, "out");
    if (p < 1) throw ggm::Error(ggm::ErrorKind::InvalidArgument, "p must be at least 1");
    const auto dim = static_cast<Eigen::Index>(p);
    ggm::Matrix k = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        row_major, dim, dim);
    ggm::GeneratorSpec spec;
    spec.p = p;
    auto model = ggm::model_from_concentration(k, spec);
    model.spec.edges = model.edges.size();
    *out = new ggm_model{std::move(model)};
  });
}

ggm_status ggm_model_save(const ggm_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    ggm::save_model(model->model, path);
  });
}

void ggm_model_free(ggm_model* model) { delete model; }

size_t ggm_model_dim(const ggm_model* model) { return model ? model->model.dim() : 0; }

size_t ggm_model_edge_count(const ggm_model* model) { return model ? model->model.edges.size() : 0; }

int ggm_model_repaired(const ggm_model* model) { return model && model->model.repaired ? 1 : 0; }

double ggm_model_delta(const ggm_model* model) { return model ? model->model.delta : 0.0; }

ggm_status ggm_model_concentration(const ggm_model* model, double* out, size_t len) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    const auto p = model->model.dim();
    if (len < p * p) throw ggm::Error(ggm::ErrorKind::InvalidArgument, "output buffer too small");
    const auto& k = model->model.concentration.values;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) out[i * p + j] = k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

ggm_status ggm_simulate(const ggm_model* model, size_t n, uint64_t seed, ggm_data** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = new ggm_data{ggm::sample_mvn(model->model.covariance, n, seed)};
  });
}

ggm_status ggm_data_from_array(size_t n, size_t p, const double* row_major, ggm_data** out) {
  return guarded([&] {
    require(row_major, "data");
    require(out, "out");
    ggm::Matrix y = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        row_major, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    *out = new ggm_data{ggm::ObservationMatrix(std::move(y))};
  });
}

ggm_status ggm_data_load_csv(const char* path, ggm_data** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ggm_data{ggm::data_from_csv(ggm::read_text_file(path))};
  });
}

ggm_status ggm_data_save_csv(const ggm_data* data, const char* path) {
  return guarded([&] {
    require(data, "data");
    require(path, "path");
    ggm::write_text_file(path, ggm::data_to_csv(data->data));
  });
}

void ggm_data_free(ggm_data* data) { delete data; }

size_t ggm_data_rows(const ggm_data* data) { return data ? data->data.rows() : 0; }

size_t ggm_data_cols(const ggm_data* data) { return data ? data->data.cols() : 0; }

int ggm_procedure_valid(const char* name) { return name && ggm::parse_procedure(name) ? 1 : 0; }

ggm_status ggm_parse_df_rule(const char* text, ggm_df_rule* out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    ggm::DfRule rule;
    if (!ggm::parse_df_rule(text, rule))
      throw ggm::Error(ggm::ErrorKind::InvalidArgument, std::string("unknown df rule '") + text + "' (expected n-p or n-p-2)");
    *out = rule == ggm::DfRule::NMinusP ? GGM_DF_N_MINUS_P : GGM_DF_N_MINUS_P_MINUS_2;
  });
}

ggm_status ggm_adjust(const char* procedure, const double* raw, size_t len, double* out) {
  return guarded([&] {
    const auto kind = to_procedure(procedure);
    if (len == 0) return;
    require(raw, "raw");
    require(out, "out");
    const auto adjusted = ggm::adjust(kind, std::span<const double>(raw, len));
    std::copy(adjusted.begin(), adjusted.end(), out);
  });
}

ggm_status ggm_raw_pvalues(const ggm_data* data, ggm_df_rule df_rule, double* out, size_t len) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    const auto raw = ggm::raw_pvalues(data->data, to_rule(df_rule));
    if (len < raw.size()) throw ggm::Error(ggm::ErrorKind::InvalidArgument, "output buffer too small");
    std::copy(raw.values().begin(), raw.values().end(), out);
  });
}

ggm_status ggm_infer(const ggm_data* data, const char* procedure, double alpha, ggm_df_rule df_rule,
                     ggm_inference** out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    const auto kind = to_procedure(procedure);
    if (!(alpha > 0.0 && alpha < 1.0)) throw ggm::Error(ggm::ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
    const auto rule = to_rule(df_rule);
    auto adjusted = ggm::adjust(kind, ggm::raw_pvalues(data->data, rule));
    auto edges = ggm::decide(adjusted, alpha);
    *out = new ggm_inference{std::move(adjusted), std::move(edges), alpha, rule, data->data.rows()};
  });
}

void ggm_inference_free(ggm_inference* inference) { delete inference; }

size_t ggm_inference_edge_count(const ggm_inference* inference) { return inference ? inference->edges.size() : 0; }

ggm_status ggm_inference_edge(const ggm_inference* inference, size_t k, size_t* i, size_t* j) {
  return guarded([&] {
    require(inference, "inference");
    require(i, "i");
    require(j, "j");
    const auto pairs = inference->edges.pairs();
    if (k >= pairs.size()) throw ggm::Error(ggm::ErrorKind::InvalidArgument, "edge index out of range");
    *i = pairs[k].i + 1;
    *j = pairs[k].j + 1;
  });
}

ggm_status ggm_inference_adjusted_pvalues(const ggm_inference* inference, double* out, size_t len) {
  return guarded([&] {
    require(inference, "inference");
    const auto& v = inference->adjusted.values.values();
    if (v.empty()) return;
    require(out, "out");
    if (len < v.size()) throw ggm::Error(ggm::ErrorKind::InvalidArgument, "output buffer too small");
    std::copy(v.begin(), v.end(), out);
  });
}

ggm_status ggm_inference_save_json(const ggm_inference* inference, const char* path) {
  return guarded([&] {
    require(inference, "inference");
    require(path, "path");
    const auto doc = ggm::inference_to_json(inference->adjusted, inference->edges, inference->alpha,
                                            inference->df_rule, inference->n);
    ggm::write_text_file(path, doc.dump(2) + "\n");
  });
}

ggm_status ggm_inference_confusion(const ggm_inference* inference, const ggm_model* truth, ggm_confusion* out) {
  return guarded([&] {
    require(inference, "inference");
    require(truth, "truth");
    require(out, "out");
    if (truth->model.dim() != inference->edges.dim())
      throw ggm::Error(ggm::ErrorKind::InvalidArgument, "truth model and data have different dimensions");
    const auto c = ggm::confusion(truth->model.edges, inference->edges);
    *out = ggm_confusion{c.tp, c.fp, c.tn, c.fn};
  });
}

ggm_status ggm_experiment_run(const char* config_path, const char* out_dir, unsigned threads,
                              int decouple_risk_weight, size_t* failed_trials) {
  return guarded([&] {
    require(config_path, "config_path");
    require(out_dir, "out_dir");
    auto config = ggm::load_config(config_path);
    if (decouple_risk_weight >= 0) config.decouple_risk_weight = decouple_risk_weight != 0;

    ggm::TrueModel model;
    try {
      model = ggm::build_model(config);
    } catch (const ggm::Error& e) {
      if (e.kind() == ggm::ErrorKind::GenerationFailure) throw;
      throw ggm::Error(ggm::ErrorKind::Config, std::string("invalid experiment config:\n  model: ") + e.what());
    }

    ggm::ExecutionOptions options;
    options.threads = threads;
    options.pooled_roc = true;
    const auto result = ggm::run_experiment(config, model, options);

    const auto doc = nlohmann::json::parse(ggm::read_text_file(config_path));
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    ggm::write_text_file((dir / "results.csv").string(), ggm::results_csv(result));
    ggm::write_text_file((dir / "risk.csv").string(), ggm::risk_csv(result, config.decouple_risk_weight));
    ggm::write_text_file((dir / "roc.csv").string(), ggm::roc_csv(result));
    ggm::write_text_file((dir / "manifest.json").string(),
                         ggm::run_manifest(doc, config, model, result).dump(2) + "\n");
    if (failed_trials) *failed_trials = result.failed_trials;
  });
}

ggm_status ggm_plot(const char* results_path, const char* kind, size_t n_filter, const char* out_path) {
  return guarded([&] {
    require(results_path, "results_path");
    require(kind, "kind");
    require(out_path, "out_path");
    const auto plot_kind = ggm::parse_plot_kind(kind);
    if (!plot_kind)
      throw ggm::Error(ggm::ErrorKind::InvalidArgument, std::string("unknown plot kind '") + kind +
                                                            "' (expected roc, risk or fn-vs-n)");
    const auto text = ggm::read_text_file(results_path);
    const auto svg = ggm::render_plot(*plot_kind, text, n_filter ? std::optional<std::size_t>(n_filter) : std::nullopt);
    ggm::write_text_file(out_path, svg);
  });
}

}  // extern "C"
