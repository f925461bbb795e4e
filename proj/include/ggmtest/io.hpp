#pragma once

#include "ggmtest/adjustments.hpp"
#include "ggmtest/experiments.hpp"
#include "ggmtest/metrics.hpp"
#include "ggmtest/model_gen.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ggm {

/// Six significant digits, '.' separator, no locale.
std::string format_number(double value);

/// Shortest representation that reads back to the same double.
std::string format_exact(double value);

std::string read_text_file(const std::string& path);

/// Writes the whole file or nothing observable on failure to open.
void write_text_file(const std::string& path, std::string_view contents);

// Model files: {p, seed, spec, repaired, delta, matrix, edges}; edges as
// [i, j, value] with 1-based vertices.
nlohmann::json model_to_json(const TrueModel& model);
TrueModel model_from_json(const nlohmann::json& doc);
void save_model(const TrueModel& model, const std::string& path);
TrueModel load_model(const std::string& path);

/// Parses the experiment config keys p, q, m, rho_min, rho_max, n_list,
/// procedures, alpha, alpha_grid, trials, master_seed, df_rule plus the
/// optional model_path, model_seed, random_sign, decouple_risk_weight.
/// Throws ErrorKind::Config with every violation, one per line.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Data CSV with header Y1,...,Yp.
std::string data_to_csv(const ObservationMatrix& data);
ObservationMatrix data_from_csv(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable parse_csv(std::string_view text);

inline constexpr std::string_view kResultsHeader =
    "procedure,n,alpha,trials,failed_trials,fwer_hat,p_fn_pos,mean_fp,mean_fn,mean_auc";
inline constexpr std::string_view kRiskHeader = "procedure,n,alpha_weight,risk";
inline constexpr std::string_view kRocHeader = "procedure,n,fpr,tpr";

std::string results_csv(const ExperimentResult& result);
/// Coupled risk curve, or the weight grid at fixed alpha when `decoupled`.
std::string risk_csv(const ExperimentResult& result, bool decoupled);
std::string roc_csv(const ExperimentResult& result);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

nlohmann::json run_manifest(const nlohmann::json& config_doc, const ExperimentConfig& config,
                            const TrueModel& model, const ExperimentResult& result);

/// {procedure, alpha, df_rule, p, n, edges: [[i, j], ...],
///  adjusted_pvalues: [[i, j, value], ...]}, 1-based vertices.
nlohmann::json inference_to_json(const AdjustedPValues& adjusted, const EdgeSet& edges, double alpha,
                                 DfRule df_rule, std::size_t n);

}  // namespace ggm
