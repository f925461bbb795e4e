#include "ggmtest/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace ggm {

using nlohmann::json;

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return {buf, res.ptr};
}

std::string format_exact(double value) {
  if (value == 0.0) value = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

// ---------------------------------------------------------------- models

json model_to_json(const TrueModel& model) {
  const auto p = model.dim();
  const auto& k = model.concentration.values;
  json spec = {{"p", p},
               {"rho_min", model.spec.rho_min},
               {"rho_max", model.spec.rho_max},
               {"seed", model.spec.seed},
               {"random_sign", model.spec.random_sign}};
  spec["m"] = model.spec.edges ? json(*model.spec.edges) : json(nullptr);
  spec["q"] = model.spec.density ? json(*model.spec.density) : json(nullptr);

  json matrix = json::array();
  for (std::size_t i = 0; i < p; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < p; ++j) row.push_back(k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    matrix.push_back(std::move(row));
  }
  json edges = json::array();
  for (const auto& e : model.edges.pairs())
    edges.push_back({e.i + 1, e.j + 1, k(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j))});

  return {{"p", p},         {"seed", model.spec.seed}, {"spec", spec},  {"repaired", model.repaired},
          {"delta", model.delta}, {"matrix", matrix}, {"edges", edges}};
}

TrueModel model_from_json(const json& doc) {
  try {
    const auto p = doc.at("p").get<std::size_t>();
    if (p < 1) throw Error(ErrorKind::Parse, "model p must be at least 1");
    const auto& rows = doc.at("matrix");
    if (!rows.is_array() || rows.size() != p) throw Error(ErrorKind::Parse, "model matrix must have p rows");
    Matrix k(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
      if (!rows[i].is_array() || rows[i].size() != p) throw Error(ErrorKind::Parse, "model matrix must be p x p");
      for (std::size_t j = 0; j < p; ++j)
        k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
    if (!k.allFinite()) throw Error(ErrorKind::Parse, "model matrix has non-finite entries");

    GeneratorSpec spec;
    if (doc.contains("spec") && doc["spec"].is_object()) {
      const auto& s = doc["spec"];
      if (s.contains("m") && !s["m"].is_null()) spec.edges = s["m"].get<std::size_t>();
      if (s.contains("q") && !s["q"].is_null()) spec.density = s["q"].get<double>();
      spec.rho_min = s.value("rho_min", spec.rho_min);
      spec.rho_max = s.value("rho_max", spec.rho_max);
      spec.random_sign = s.value("random_sign", false);
    }
    spec.seed = doc.value("seed", std::uint64_t{0});
    const bool repaired = doc.value("repaired", false);
    const double delta = doc.value("delta", 0.0);

    TrueModel model;
    try {
      model = model_from_concentration(k, spec, repaired, delta);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, std::string("invalid model matrix: ") + e.what());
    }

    if (doc.contains("edges")) {
      EdgeSet listed(p);
      for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() < 2) throw Error(ErrorKind::Parse, "edge entries must be [i, j, value]");
        const auto i = e[0].get<std::size_t>();
        const auto j = e[1].get<std::size_t>();
        if (i < 1 || j < 1 || i > p || j > p || i == j) throw Error(ErrorKind::Parse, "edge vertex out of range");
        listed.insert(i - 1, j - 1);
      }
      if (!(listed == model.edges)) throw Error(ErrorKind::Parse, "edge list disagrees with the matrix zero pattern");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrueModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

TrueModel load_model(const std::string& path) {
  const auto text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
  return model_from_json(doc);
}

// ---------------------------------------------------------------- config

namespace {

template <class T>
bool read_unsigned(const json& doc, const char* key, T& out, std::vector<std::string>& problems) {
  if (!doc.contains(key)) return false;
  const auto& v = doc[key];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    problems.push_back(std::string(key) + " must be a non-negative integer");
    return false;
  }
  out = v.get<T>();
  return true;
}

bool read_number(const json& doc, const char* key, double& out, std::vector<std::string>& problems) {
  if (!doc.contains(key)) return false;
  if (!doc[key].is_number()) {
    problems.push_back(std::string(key) + " must be a number");
    return false;
  }
  out = doc[key].get<double>();
  return true;
}

bool read_bool(const json& doc, const char* key, bool& out, std::vector<std::string>& problems) {
  if (!doc.contains(key)) return false;
  if (!doc[key].is_boolean()) {
    problems.push_back(std::string(key) + " must be true or false");
    return false;
  }
  out = doc[key].get<bool>();
  return true;
}

const std::vector<std::string> kConfigKeys = {
    "p",          "q",          "m",      "rho_min",    "rho_max",     "n_list",     "procedures",
    "alpha",      "alpha_grid", "trials", "master_seed", "df_rule",    "model_path", "model_seed",
    "random_sign", "decouple_risk_weight"};

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  std::vector<std::string> problems;
  ExperimentConfig cfg;
  if (!doc.is_object()) throw Error(ErrorKind::Config, "invalid experiment config:\n  top level must be an object");

  for (const auto& item : doc.items())
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), item.key()) == kConfigKeys.end())
      problems.push_back("unknown key '" + item.key() + "'");

  read_unsigned(doc, "trials", cfg.trials, problems);
  read_unsigned(doc, "master_seed", cfg.master_seed, problems);
  read_number(doc, "alpha", cfg.alpha, problems);
  read_bool(doc, "decouple_risk_weight", cfg.decouple_risk_weight, problems);

  if (doc.contains("df_rule")) {
    if (!doc["df_rule"].is_string() || !parse_df_rule(doc["df_rule"].get<std::string>(), cfg.df_rule))
      problems.push_back("df_rule must be \"n-p\" or \"n-p-2\"");
  }

  if (!doc.contains("n_list")) {
    problems.push_back("missing required key n_list");
  } else if (!doc["n_list"].is_array()) {
    problems.push_back("n_list must be an array of integers");
  } else {
    for (const auto& v : doc["n_list"]) {
      if (v.is_number_integer() && v.get<long long>() > 0) cfg.n_list.push_back(v.get<std::size_t>());
      else problems.push_back("n_list entries must be positive integers");
    }
  }

  if (!doc.contains("procedures")) {
    problems.push_back("missing required key procedures");
  } else if (!doc["procedures"].is_array()) {
    problems.push_back("procedures must be an array of names");
  } else {
    for (const auto& v : doc["procedures"]) {
      const auto kind = v.is_string() ? parse_procedure(v.get<std::string>()) : std::nullopt;
      if (kind) cfg.procedures.push_back(*kind);
      else problems.push_back("unknown procedure " + v.dump() +
                              " (expected simultaneous, bonferroni, sidak, holm-bonferroni, holm-sidak)");
    }
  }

  if (doc.contains("alpha_grid")) {
    cfg.alpha_grid.clear();
    if (!doc["alpha_grid"].is_array()) problems.push_back("alpha_grid must be an array of numbers");
    else
      for (const auto& v : doc["alpha_grid"]) {
        if (v.is_number()) cfg.alpha_grid.push_back(v.get<double>());
        else problems.push_back("alpha_grid entries must be numbers");
      }
  }

  const bool has_generator = doc.contains("p") || doc.contains("q") || doc.contains("m");
  if (doc.contains("model_path")) {
    if (doc["model_path"].is_string()) cfg.model_path = doc["model_path"].get<std::string>();
    else problems.push_back("model_path must be a string");
  }
  if (has_generator) {
    GeneratorSpec spec;
    if (!read_unsigned(doc, "p", spec.p, problems) && !doc.contains("p")) problems.push_back("missing required key p");
    std::size_t m = 0;
    if (read_unsigned(doc, "m", m, problems)) spec.edges = m;
    double q = 0.0;
    if (read_number(doc, "q", q, problems)) spec.density = q;
    if (!doc.contains("m") && !doc.contains("q")) problems.push_back("give the edge count m or the density q");
    read_number(doc, "rho_min", spec.rho_min, problems);
    read_number(doc, "rho_max", spec.rho_max, problems);
    read_bool(doc, "random_sign", spec.random_sign, problems);
    spec.seed = cfg.master_seed;
    read_unsigned(doc, "model_seed", spec.seed, problems);
    cfg.generator = spec;
  }

  for (auto& v : cfg.violations()) {
    // already reported from the parse step
    if (v.rfind("missing model", 0) == 0 && (has_generator || doc.contains("model_path"))) continue;
    if (v.rfind("n_list must not be empty", 0) == 0 && !doc.contains("n_list")) continue;
    if (v.rfind("procedures must not be empty", 0) == 0 && !doc.contains("procedures")) continue;
    if (std::find(problems.begin(), problems.end(), v) == problems.end()) problems.push_back(v);
  }

  if (!problems.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw Error(ErrorKind::Config, msg);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  const auto text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "invalid experiment config:\n  " + path + " is not valid JSON: " + e.what());
  }
  auto cfg = config_from_json(doc);
  if (cfg.model_path) {
    std::filesystem::path model(*cfg.model_path);
    if (model.is_relative()) cfg.model_path = (std::filesystem::path(path).parent_path() / model).string();
  }
  return cfg;
}

// ---------------------------------------------------------------- CSV

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && e[-1] == ' ') --e;
  if (b < e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
  return v;
}

}  // namespace

std::string data_to_csv(const ObservationMatrix& data) {
  std::string out;
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (j) out += ',';
    out += "Y" + std::to_string(j + 1);
  }
  out += '\n';
  const auto& y = data.values();
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      if (j) out += ',';
      out += format_exact(y(i, j));
    }
    out += '\n';
  }
  return out;
}

ObservationMatrix data_from_csv(std::string_view text) {
  const auto table = parse_csv(text);
  const auto p = table.header.size();
  if (p == 0) throw Error(ErrorKind::Parse, "data file has no header");
  if (table.rows.empty()) throw Error(ErrorKind::Parse, "data file has no rows");
  Matrix y(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].size() != p)
      throw Error(ErrorKind::Parse, "data row " + std::to_string(i + 1) + " has " +
                                        std::to_string(table.rows[i].size()) + " fields, expected " +
                                        std::to_string(p));
    for (std::size_t j = 0; j < p; ++j)
      y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(table.rows[i][j]);
  }
  try {
    return ObservationMatrix(std::move(y));
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

std::string results_csv(const ExperimentResult& result) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : result.rows) {
    out += std::string(to_string(r.procedure)) + ',' + std::to_string(r.n) + ',' + format_number(r.alpha) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.failed_trials) + ',' + format_number(r.fwer_hat) + ',' +
           format_number(r.p_fn_pos) + ',' + format_number(r.mean_fp) + ',' + format_number(r.mean_fn) + ',' +
           format_number(r.mean_auc) + '\n';
  }
  return out;
}

std::string risk_csv(const ExperimentResult& result, bool decoupled) {
  std::string out(kRiskHeader);
  out += '\n';
  for (const auto& r : result.rows) {
    const auto values = decoupled ? r.risk : risk_curve(r);
    for (const auto& v : values)
      out += std::string(to_string(r.procedure)) + ',' + std::to_string(r.n) + ',' + format_number(v.alpha) + ',' +
             format_number(v.value) + '\n';
  }
  return out;
}

std::string roc_csv(const ExperimentResult& result) {
  std::string out(kRocHeader);
  out += '\n';
  for (const auto& c : result.roc)
    for (const auto& pt : c.curve.points)
      out += std::string(to_string(c.procedure)) + ',' + std::to_string(c.n) + ',' + format_number(pt.x) + ',' +
             format_number(pt.y) + '\n';
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json run_manifest(const json& config_doc, const ExperimentConfig& config, const TrueModel& model,
                  const ExperimentResult& result) {
  std::map<std::size_t, std::size_t> failed_by_n;
  for (const auto& r : result.rows) failed_by_n[r.n] = r.failed_trials;
  json by_n = json::object();
  for (auto [n, f] : failed_by_n) by_n[std::to_string(n)] = f;
  return {{"config_hash", fnv1a_hex(config_doc.dump())},
          {"master_seed", config.master_seed},
          {"trials", config.trials},
          {"df_rule", to_string(config.df_rule)},
          {"risk_mode", config.decouple_risk_weight ? "decoupled" : "coupled"},
          {"failed_trials", result.failed_trials},
          {"failed_trials_by_n", by_n},
          {"model",
           {{"p", model.dim()}, {"edges", model.edges.size()}, {"repaired", model.repaired}, {"delta", model.delta}}}};
}

json inference_to_json(const AdjustedPValues& adjusted, const EdgeSet& edges, double alpha, DfRule df_rule,
                       std::size_t n) {
  json edge_list = json::array();
  for (const auto& e : edges.pairs()) edge_list.push_back({e.i + 1, e.j + 1});
  json pv = json::array();
  const auto pairs = all_pairs(adjusted.values.dim());
  for (std::size_t k = 0; k < pairs.size(); ++k) pv.push_back({pairs[k].i + 1, pairs[k].j + 1, adjusted.values[k]});
  return {{"procedure", to_string(adjusted.procedure)},
          {"alpha", alpha},
          {"df_rule", to_string(df_rule)},
          {"p", adjusted.values.dim()},
          {"n", n},
          {"edges", edge_list},
          {"adjusted_pvalues", pv}};
}

}  // namespace ggm
