#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "vekua/config.hpp"
#include "vekua/field_io.hpp"
#include "vekua/run.hpp"

using namespace vekua;
using nlohmann::json;

namespace {

json circle_operator() {
  return {{"factors", {{{"kind", "circle"}, {"lambda", 0.0}, {"p0", 0.3}}}},
          {"delta", 0.0},
          {"alpha", 2.0},
          {"s", 0.0},
          {"q", 1.0}};
}

json unit_forcing() {
  return {{"modes", {{{"index", {{{"k", 1}}}}, {"f", {{"trig", {{"re", 1.0}}}}}}}}};
}

std::string error_of(const json& doc, const Overrides& o = {}) {
  try {
    parse_config(doc, o);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("vekua_test_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string prefix() const { return (path / "out_").string(); }
};

json read_json(const std::string& file) { return json::parse(read_text(file)); }

}  // namespace

TEST_CASE("minimal solve config") {
  const RunConfig cfg = parse_config(json{{"operator", circle_operator()}, {"forcing", {{"field", unit_forcing()}}}});
  CHECK(cfg.task == Task::Solve);
  CHECK(cfg.params.group.size() == 1);
  CHECK(cfg.params.alpha == Complex(2.0));
  CHECK(cfg.truncation == Truncation{2});
  CHECK(cfg.nt == 256);
  CHECK(cfg.params.drift.empty());
}

TEST_CASE("config diagnostics carry the field path") {
  json doc{{"task", "classify"}, {"operator", circle_operator()}};
  doc["operator"]["alpha"] = 0.0;
  const std::string a0 = error_of(doc);
  CHECK(a0.find("$.operator.alpha") == 0);
  CHECK(a0.find("alpha in C \\ {0}") != std::string::npos);

  CHECK(error_of(json{{"operator", circle_operator()}}).find("forcing required") != std::string::npos);

  json bad = {{"task", "classify"}, {"operator", circle_operator()}, {"truncation", {{"bounds", {-1}}}}};
  CHECK(error_of(bad).find("$.truncation.bounds[0]") == 0);
  bad = {{"task", "classify"}, {"operator", circle_operator()}, {"extra", 1}};
  CHECK(error_of(bad).find("$.extra: unknown field") == 0);
  bad = {{"task", "classify"}, {"operator", circle_operator()}};
  bad["operator"]["q"] = {{"mean", 0.2}, {"harmonics", {{{"k", 1}, {"cos", 1.0}}}}};
  CHECK(error_of(bad).find("$.operator") == 0);
  bad = {{"task", "classify"}, {"operator", circle_operator()}};
  bad["operator"]["factors"][0]["p0"] = "x";
  CHECK(error_of(bad).find("$.operator.factors[0].p0: expected a number") == 0);
  CHECK_THROWS_AS(parse_config(std::string("{ not json")), ConfigError);
}

TEST_CASE("overrides enter the hashed document") {
  const json doc{{"task", "classify"}, {"operator", circle_operator()}};
  const RunConfig plain = parse_config(doc);
  Overrides o;
  o.delta = 0.25;
  o.alpha_im = 1.0;
  o.trunc_L = 6;
  o.nt = 64;
  const RunConfig over = parse_config(doc, o);
  CHECK(over.params.delta == 0.25);
  CHECK(over.params.alpha == Complex(2.0, 1.0));
  CHECK(over.truncation == Truncation{6});
  CHECK(over.nt == 64);
  CHECK(sha256_hex(plain.effective.dump()) != sha256_hex(over.effective.dump()));
  CHECK(sha256_hex(plain.effective.dump()) == sha256_hex(parse_config(doc).effective.dump()));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("drift factors and trig specs") {
  json op = circle_operator();
  op["factors"][0].erase("p0");
  op["factors"][0]["p"] = {{"mean", 0.5}, {"harmonics", {{{"k", 2}, {"sin", 0.1}}}}};
  const RunConfig cfg = parse_config(json{{"task", "classify"}, {"operator", op}});
  REQUIRE(cfg.params.drift.size() == 1);
  CHECK(cfg.params.group.p0[0] == 0.5);
  CHECK(trig_to_json(cfg.params.drift[0])["harmonics"][0]["sin"] == 0.1);
}

TEST_CASE("field documents round trip") {
  std::mt19937_64 rng(77);
  const GroupModel g{{{FactorKind::Circle}, {FactorKind::SU2}}, {0.0, 0.0}, {0.2, 0.4}};
  CoefficientField series = testing::random_field(rng, g, {1, 2}, 3, 16);
  const PairedField paired = pair_with_conjugate(g, series);
  const FieldDocument back = field_from_json(field_to_json(g, paired.primal, &paired.conj), g, {0, 0}, 8);
  REQUIRE(back.conj.has_value());
  CHECK(back.primal.truncation == Truncation{1, 2});
  CHECK(back.primal.nt == 16);
  CHECK(max_abs_difference(back.primal, paired.primal) == 0.0);
  CHECK(max_abs_difference(*back.conj, paired.conj) == 0.0);

  const CoefficientField sampled_field = sampled(series);
  const FieldDocument s = field_from_json(field_to_json(g, sampled_field, nullptr), g, {0, 0}, 8);
  CHECK_FALSE(s.conj.has_value());
  CHECK(max_abs_difference(s.primal, series) < 1e-15);

  json bad = field_to_json(g, series, nullptr);
  bad["modes"][0]["index"][1]["two_m"] = 7;
  CHECK_THROWS_AS(field_from_json(bad, g, {1, 2}, 16), ConfigError);
  bad = field_to_json(g, series, nullptr);
  bad["truncation"] = {0, 0};
  CHECK_THROWS_WITH_AS(field_from_json(bad, g, {1, 2}, 16), doctest::Contains("outside the truncation"), ConfigError);
  CHECK_THROWS_AS(read_field("/nonexistent/field.json", g, {1, 2}, 16), FileError);
}

TEST_CASE("run: classify case 1 and the resonance witness") {
  TempDir tmp;
  RunConfig cfg = parse_config(json{{"task", "classify"}, {"operator", circle_operator()}});
  cfg.output_prefix = tmp.prefix();
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == kExitOk);
  CHECK(out.report["result"]["verdict"] == "case 1: solvable");
  const json file = read_json(out.files.back());
  CHECK(file["config_sha256"] == sha256_hex(cfg.effective.dump()));
  CHECK(file["truncation"] == json::array({2}));

  const json witness{{"task", "resonances"},
                     {"operator",
                      {{"factors", {{{"kind", "su2"}, {"lambda", 0.0}, {"p0", 0.0}}}},
                       {"delta", std::sqrt(2.0)},
                       {"alpha", 1.0}}}};
  cfg = parse_config(witness);
  cfg.output_prefix = tmp.prefix();
  out = run(cfg);
  CHECK(out.exit_code == kExitOk);
  CHECK(out.report["result"]["distinct_k"] == nlohmann::ordered_json::array({-1, 1}));
  CHECK(out.report["result"]["paths_agree"] == true);
}

TEST_CASE("run: solve writes a reloadable solution and is deterministic") {
  TempDir tmp;
  json doc{{"operator", circle_operator()}, {"forcing", {{"field", unit_forcing()}}}, {"truncation", {{"nt", 32}}}};
  doc["operator"]["delta"] = 0.5;
  doc["operator"]["s"] = {{"mean", 0.2}, {"harmonics", {{{"k", 1}, {"cos", 0.1}}}}};
  RunConfig cfg = parse_config(doc);
  cfg.output_prefix = tmp.prefix();
  const RunOutcome a = run(cfg);
  REQUIRE(a.exit_code == kExitOk);
  CHECK(a.report["result"]["residual_max"].get<double>() < 1e-10);
  const RunOutcome b = run(cfg);
  CHECK(report_body(a.report) == report_body(b.report));

  const FieldDocument sol = read_field(a.files.front(), cfg.params.group, cfg.truncation, cfg.nt);
  REQUIRE(sol.conj.has_value());
  const PairedField u{sol.primal, *sol.conj};
  const PairedField f = apply_P(cfg.params, u);
  CoefficientField expected;
  expected.truncation = cfg.truncation;
  expected.nt = 32;
  expected.modes.emplace(ModeIndex{{CircleMode{1}}}, ComplexSeries::constant(1.0));
  CHECK(max_abs_difference(f.primal, expected) < 1e-10);
}

TEST_CASE("run: exit codes") {
  TempDir tmp;
  const json resonant{{"operator",
                       {{"factors", {{{"kind", "su2"}, {"lambda", 0.0}, {"p0", 0.0}}}},
                        {"delta", std::sqrt(2.0)},
                        {"alpha", 1.0}}},
                      {"forcing", {{"field", {{"modes", {{{"index", {{{"two_l", 0}, {"two_m", 0}, {"two_n", 0}}}}, {"f", {{"trig", {{"re", 1.0}}}}}}}}}}}},
                      {"truncation", {{"nt", 16}}}};
  RunConfig cfg = parse_config(resonant);
  cfg.output_prefix = tmp.prefix();
  RunOutcome out = run(cfg);
  CHECK(out.exit_code == kExitResonance);
  CHECK(out.report["error"]["mode"] == "(2l=0,2m=0,2n=0)");

  json h{{"task", "classify"}, {"operator", circle_operator()}};
  h["operator"]["delta"] = 2.0;
  cfg = parse_config(h);
  cfg.output_prefix = tmp.prefix();
  CHECK(run(cfg).exit_code == kExitHypothesis);

  json missing{{"operator", circle_operator()}, {"forcing", {{"path", "no_such_forcing.json"}}}};
  cfg = parse_config(missing);
  cfg.output_prefix = tmp.prefix();
  CHECK(run(cfg, tmp.path.string()).exit_code == kExitFile);

  cfg = parse_config(json{{"task", "classify"}, {"operator", circle_operator()}});
  cfg.output_prefix = (tmp.path / "missing_dir" / "x_").string();
  CHECK(run(cfg).exit_code == kExitFile);

  CHECK(exit_code_for(TruncationAsymmetry("x")) == kExitTruncationAsymmetry);
  CHECK(exit_code_for(QuadratureFailure("x")) == kExitNumerical);
  CHECK(exit_code_for(InconsistentField("x")) == kExitConfig);
  CHECK(exit_code_for(DegenerateRho("x")) == kExitHypothesis);
}

TEST_CASE("run: diophantine and oracle") {
  TempDir tmp;
  json doc{{"task", "diophantine"}, {"operator", circle_operator()}, {"truncation", {{"bounds", {40}}}}};
  doc["operator"]["delta"] = 1.5;
  doc["operator"]["alpha"] = 0.5;
  doc["operator"]["factors"][0]["p0"] = 0.6180339887498949;
  RunConfig cfg = parse_config(doc);
  cfg.output_prefix = tmp.prefix();
  RunOutcome out = run(cfg);
  REQUIRE(out.exit_code == kExitOk);
  CHECK(out.report["result"]["dc_applicable"] == true);
  CHECK(out.report["result"]["equivalence"]["agree"] == true);

  doc["task"] = "oracle";
  doc["truncation"] = {{"bounds", {2}}, {"nt", 32}};
  doc["operator"]["factors"][0].erase("p0");
  doc["operator"]["factors"][0]["p"] = {{"mean", 0.3}, {"harmonics", {{{"k", 1}, {"cos", 0.4}}}}};
  doc["operator"]["factors"][0]["lambda"] = 0.3;
  cfg = parse_config(doc);
  cfg.output_prefix = tmp.prefix();
  out = run(cfg);
  REQUIRE(out.exit_code == kExitOk);
  CHECK(out.report["result"]["modes"].size() == 5);
  CHECK(out.report["result"]["max_relative_deviation"].get<double>() < 1e-6);
}
