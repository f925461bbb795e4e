#include <doctest.h>

#include "ggmtest/io.hpp"
#include "ggmtest/plot.hpp"

#include "oracles.hpp"

#include <filesystem>
#include <regex>

using namespace ggm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ggmtest_io_plot";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::vector<std::string> polyline_points(const std::string& svg) {
  std::vector<std::string> out;
  const std::regex re("<polyline[^>]*points=\"([^\"]*)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1]);
  return out;
}

ExperimentResult small_experiment() {
  ExperimentConfig c;
  c.model_path = GGMTEST_FIXTURE_DIR "/seven_vertex.json";
  c.n_list = {15, 40};
  c.procedures.assign(kAllProcedures.begin(), kAllProcedures.end());
  c.trials = 20;
  c.master_seed = 2;
  return run_experiment(c, build_model(c), {1, true, 512});
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.05) == "0.05");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(263.4771234) == "263.477");
  CHECK(format_number(1234567.0) == "1.23457e+06");
  CHECK(format_number(2.5e-7) == "2.5e-07");
  CHECK(format_exact(0.1) == "0.1");
  CHECK(std::stod(format_exact(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("fnv1a_hex") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("model files") {
  const auto model = load_model(GGMTEST_FIXTURE_DIR "/seven_vertex.json");
  CHECK(model.dim() == 7);
  CHECK(model.concentration.values == oracle::seven_vertex_matrix());
  CHECK(model.edges.size() == 9);

  GeneratorSpec g;
  g.p = 12;
  g.density = 0.4;
  g.seed = 77;
  g.random_sign = true;
  const auto generated = generate_model(g);
  const auto path = scratch("model.json").string();
  save_model(generated, path);
  const auto back = load_model(path);
  CHECK(back.concentration.values == generated.concentration.values);
  CHECK(back.edges == generated.edges);
  CHECK(back.repaired == generated.repaired);
  CHECK(back.delta == generated.delta);
  CHECK(back.spec.seed == 77);
  CHECK(back.spec.random_sign);

  SUBCASE("malformed documents") {
    auto doc = model_to_json(model);
    doc["edges"].erase(0);
    CHECK_THROWS_AS(model_from_json(doc), Error);
    auto asym = model_to_json(model);
    asym["matrix"][0][1] = 0.3;
    CHECK_THROWS_AS(model_from_json(asym), Error);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"p": 2})")), Error);
    write_text_file(scratch("broken.json").string(), "{not json");
    try {
      load_model(scratch("broken.json").string());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
    }
    try {
      load_model(scratch("missing.json").string());
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }
}

TEST_CASE("experiment configs") {
  const auto good = nlohmann::json::parse(R"({
    "p": 25, "q": 0.2, "n_list": [100, 200], "procedures": ["bonferroni", "holm-sidak"],
    "alpha": 0.05, "trials": 10, "master_seed": 3, "df_rule": "n-p-2"
  })");
  const auto cfg = config_from_json(good);
  REQUIRE(cfg.generator.has_value());
  CHECK(cfg.generator->p == 25);
  CHECK(cfg.generator->edge_count() == 60);
  CHECK(cfg.generator->seed == 3);
  CHECK(cfg.n_list == std::vector<std::size_t>{100, 200});
  CHECK(cfg.procedures == std::vector<ProcedureKind>{ProcedureKind::Bonferroni, ProcedureKind::HolmSidak});
  CHECK(cfg.df_rule == DfRule::NMinusPMinus2);
  CHECK(cfg.alpha_grid == default_alpha_grid());

  const auto bad = nlohmann::json::parse(R"({
    "p": 25, "q": 0.2, "n_list": [10], "procedures": ["bh"], "alpha": 2,
    "trials": 0, "colour": "red"
  })");
  try {
    config_from_json(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    const std::string what = e.what();
    CHECK(what.find("colour") != std::string::npos);
    CHECK(what.find("bh") != std::string::npos);
    CHECK(what.find("alpha") != std::string::npos);
    CHECK(what.find("trials") != std::string::npos);
    CHECK(what.find("27") != std::string::npos);  // smallest admissible n
  }
}

TEST_CASE("data CSV") {
  Matrix y(2, 3);
  y << 0.1, -2.5, 1e-300, 3.0, 1.0 / 3.0, -0.0;
  const auto text = data_to_csv(ObservationMatrix(y));
  CHECK(text.rfind("Y1,Y2,Y3\n", 0) == 0);
  const auto back = data_from_csv(text);
  CHECK(back.values() == y);
  CHECK_THROWS_AS(data_from_csv("Y1,Y2\n1,2\n3\n"), Error);
  CHECK_THROWS_AS(data_from_csv("Y1,Y2\n1,abc\n"), Error);
  CHECK_THROWS_AS(data_from_csv("Y1,Y2\n"), Error);
  CHECK(data_from_csv("Y1,Y2\r\n1,2\r\n3,4\r\n").rows() == 2);
}

TEST_CASE("result CSVs") {
  const auto result = small_experiment();
  const auto results = parse_csv(results_csv(result));
  CHECK(results.rows.size() == 10);
  std::string header;
  for (const auto& h : results.header) header += (header.empty() ? "" : ",") + h;
  CHECK(header == kResultsHeader);
  CHECK(results.rows[0][0] == "simultaneous");
  CHECK(results.rows[0][1] == "15");

  const auto coupled = parse_csv(risk_csv(result, false));
  CHECK(coupled.rows.size() == 10 * 21);
  CHECK(coupled.rows[0][3] == "0");
  const auto decoupled = parse_csv(risk_csv(result, true));
  CHECK(decoupled.rows.size() == 10 * 21);
  CHECK(decoupled.rows[0][3] == format_number(result.rows[0].mean_fp));

  const auto roc = parse_csv(roc_csv(result));
  CHECK(roc.rows.front()[2] == "0");
  CHECK(roc.rows.front()[3] == "0");
  CHECK(roc.rows.back()[2] == "1");
  CHECK(roc.rows.back()[3] == "1");
}

TEST_CASE("render_plot") {
  const auto result = small_experiment();
  SUBCASE("risk: one polyline per series") {
    const auto svg = render_plot(PlotKind::Risk, risk_csv(result, false), std::size_t{15});
    CHECK(count_of(svg, "<polyline") == 5);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(render_plot(PlotKind::Risk, risk_csv(result, false)).find("<polyline") != std::string::npos);
    CHECK(count_of(render_plot(PlotKind::Risk, risk_csv(result, false)), "<polyline") == 10);
  }
  SUBCASE("roc endpoints") {
    const auto svg = render_plot(PlotKind::Roc, roc_csv(result), std::size_t{40});
    const auto lines = polyline_points(svg);
    REQUIRE(lines.size() == 5);
    for (const auto& pts : lines) {
      CHECK(pts.rfind("70.00,400.00", 0) == 0);
      CHECK(pts.size() >= 13);
      CHECK(pts.substr(pts.size() - 12) == "510.00,40.00");
    }
  }
  SUBCASE("fn against n") {
    const auto svg = render_plot(PlotKind::FnVsN, results_csv(result));
    CHECK(count_of(svg, "<polyline") == 5);
  }
  SUBCASE("deterministic") {
    CHECK(render_plot(PlotKind::Roc, roc_csv(result)) == render_plot(PlotKind::Roc, roc_csv(result)));
  }
  SUBCASE("schema errors") {
    CHECK_THROWS_AS(render_plot(PlotKind::Roc, ""), Error);
    CHECK_THROWS_AS(render_plot(PlotKind::Roc, std::string(kRocHeader) + "\n"), Error);
    CHECK_THROWS_AS(render_plot(PlotKind::Roc, risk_csv(result, false)), Error);
    CHECK_THROWS_AS(render_plot(PlotKind::Risk, risk_csv(result, false), std::size_t{999}), Error);
  }
  CHECK(parse_plot_kind("fn-vs-n") == PlotKind::FnVsN);
  CHECK_FALSE(parse_plot_kind("bar").has_value());
}

TEST_CASE("manifest and inference documents") {
  ExperimentConfig c;
  c.model_path = GGMTEST_FIXTURE_DIR "/seven_vertex.json";
  c.n_list = {20};
  c.procedures = {ProcedureKind::Sidak};
  c.trials = 5;
  const auto doc = nlohmann::json::parse(R"({"n_list": [20]})");
  const auto model = build_model(c);
  const auto result = run_experiment(c, model);
  const auto manifest = run_manifest(doc, c, model, result);
  CHECK(manifest["config_hash"] == fnv1a_hex(doc.dump()));
  CHECK(manifest["trials"] == 5);
  CHECK(manifest["failed_trials"] == 0);
  CHECK(manifest["model"]["edges"] == 9);

  const auto raw = EdgePValues(3, {0.001, 0.5, 0.02});
  const auto adj = adjust_bonferroni(raw);
  const auto edges = decide(adj, 0.05);
  const auto inf = inference_to_json(adj, edges, 0.05, DfRule::NMinusP, 40);
  CHECK(inf["procedure"] == "bonferroni");
  CHECK(inf["p"] == 3);
  CHECK(inf["edges"] == nlohmann::json::parse("[[1, 2]]"));
  REQUIRE(inf["adjusted_pvalues"].size() == 3);
  CHECK(inf["adjusted_pvalues"][2][0] == 2);
  CHECK(inf["adjusted_pvalues"][2][1] == 3);
  CHECK(inf["adjusted_pvalues"][2][2].get<double>() == doctest::Approx(0.06));
}
