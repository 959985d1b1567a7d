#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ttr/cli.hpp"
#include "ttr/report.hpp"

using namespace ttr;
using nlohmann::json;

namespace {

struct Output {
  int code;
  std::string out, err;
};

Output run_cfg(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& s) {
  std::vector<json> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) v.push_back(json::parse(l));
  return v;
}

RunConfig quartic_family(const std::string& twist_kind) {
  json j = {{"command", "verify"},
            {"curve", {{"kind", "hyperelliptic"}, {"P", {-1, 0, 0, 0, 1}}}},
            {"family", {{"a_pair", {{1, 0}, {-1, 0}}}, {"b_pair", {{-1, 0}, {0, 1}}}}},
            {"seed", 20261019}};
  if (twist_kind == "generic")
    j["twist"] = {"1", "-247/210", "101/210", "-17/210", "1/210"};
  else
    j["twist"] = {1, 0, 0, 0, -1};
  return RunConfig::from_json(j);
}

}  // namespace

TEST_CASE("config round trip is lossless") {
  RunConfig a = quartic_family("generic");
  a.recursion.mode = "numeric";
  a.recursion.series_order = 40;
  a.tolerances.rauch = 2e-5;
  a.family.direction = cplx(0.5, -0.25);
  a.suite = {"rauch", "taylor"};
  a.dims.canonical = true;
  a.threads = 2;
  const json j = a.to_json();
  const RunConfig b = RunConfig::from_json(j);
  CHECK(b.to_json() == j);
  CHECK(b.family.direction == cplx(0.5, -0.25));
  CHECK(b.recursion.series_order == 40);
  // Defaults are materialized.
  const json d = RunConfig::from_json(json::object()).to_json();
  CHECK(d["tolerances"]["dm_cubic"] == 1e-3);
  CHECK(d["suite"] == json::array({"properties"}));
  CHECK(RunConfig::from_json(d).to_json() == d);
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(RunConfig::from_json({{"bogus", 1}}), InvalidInput);
  CHECK_THROWS_AS(RunConfig::from_json({{"seed", "one"}}), InvalidInput);
  RunConfig c;
  c.tolerances.rauch = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  CHECK(run_cfg(c).code == kExitInvalid);
  c = RunConfig();
  c.curve = {{"kind", "named"}, {"name", "nonexistent"}};
  const Output o = run_cfg(c);
  CHECK(o.code == kExitInvalid);
  CHECK(o.out.empty());
  CHECK_FALSE(o.err.empty());
}

TEST_CASE("coefficient parsing") {
  const json exact = {1, "-3/4", 0};
  CHECK(coefficients_exact(exact));
  CHECK_FALSE(coefficients_exact(json{1, 0.5}));
  const PolyQ q = poly_q_from_json(exact);
  CHECK(q.c.at(1) == Rational(-3, 4));
  const PolyC p = poly_c_from_json(json{json{0, 1}, 2.5});
  CHECK(p.c.at(0) == cplx(0, 1));
  CHECK(p.c.at(1) == cplx(2.5, 0));
  CHECK_THROWS_AS(poly_q_from_json(json{0.5}), InvalidInput);
}

TEST_CASE("dims command") {
  RunConfig c;
  c.command = "dims";
  c.dims.rank = 2;
  c.dims.deg_l = 2;
  c.dims.genus = 0;
  const Output o = run_cfg(c);
  CHECK(o.code == kExitOk);
  CHECK(o.out == "moduli_dim 9\nhitchin_base_dim 8\neffective_base_dim 1\nspectral_genus 1\n");
  c.dims.rank = 0;
  CHECK(run_cfg(c).code == kExitInvalid);
}

TEST_CASE("recursion command, exact airy") {
  RunConfig c;
  c.command = "recursion";
  const Output o = run_cfg(c);
  CHECK(o.code == kExitOk);
  CHECK(o.out == "-1 * z0^-2 * z1^-2 * z2^-2 * dz0dz1dz2\n");
  c.recursion.g = 1;
  c.recursion.n = 1;
  CHECK(run_cfg(c).out == "-1/8 * z0^-4 * dz0\n");
  c.recursion.g = 0;
  c.recursion.n = 2;
  CHECK(run_cfg(c).code == kExitInvalid);
}

TEST_CASE("recursion command, numeric csv agrees with exact") {
  RunConfig c;
  c.command = "recursion";
  c.recursion.mode = "numeric";
  c.recursion.samples = 4;
  const Output o = run_cfg(c);
  REQUIRE(o.code == kExitOk);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# W(0,3)", 0) == 0);
  std::getline(in, line);
  CHECK(line == "p0_re,p0_im,p1_re,p1_im,p2_re,p2_im,w_re,w_im");
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) v.push_back(std::stod(f));
    REQUIRE(v.size() == 8);
    cplx prod = 1.0;
    for (int i = 0; i < 3; ++i) prod *= cplx(v[2 * i], v[2 * i + 1]);
    const cplx expected = -1.0 / (prod * prod);
    CHECK(std::abs(cplx(v[6], v[7]) - expected) < 1e-9 * std::abs(expected));
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("periods command") {
  RunConfig c;
  c.command = "periods";
  c.curve = {{"kind", "named"}, {"name", "lemniscatic"}};
  const Output o = run_cfg(c);
  REQUIRE(o.code == kExitOk);
  const json j = json::parse(o.out);
  const cplx tau = complex_from_json(j["tau"]);
  // Any basis gives a tau in the SL2(Z)-orbit of i, so j(tau) = 1728.
  CHECK(std::abs(complex_from_json(j["j_invariant"]) - 1728.0) < 1e-6);
  CHECK(tau.imag() > 0.0);
  CHECK(j["cycles"]["a"].is_object());
  c.curve = {{"kind", "named"}, {"name", "airy"}};
  CHECK(run_cfg(c).code == kExitInvalid);
}

TEST_CASE("verify emits valid records and the files") {
  RunConfig c = quartic_family("generic");
  c.suite = {"taylor", "bergman-normalization"};
  c.recursion.samples = 3;
  const auto dir = std::filesystem::temp_directory_path() / "ttr_test_cli_out";
  std::filesystem::remove_all(dir);
  c.output.dir = dir.string();
  const Output o = run_cfg(c);
  CHECK(o.code == kExitOk);
  const auto recs = lines(o.out);
  REQUIRE(recs.size() == 2 + 2 * 3 + 2);
  for (const auto& r : recs) {
    std::string why;
    CHECK_MESSAGE(validate_record(r, &why), why);
    CHECK(r["pass"] == true);
    CHECK(r["detail"]["config"] == c.to_json());
  }
  CHECK(recs[1]["check"] == "taylor.m3");
  CHECK(recs[1]["rel_err"].get<double>() < 1e-3);
  std::ifstream f(dir / "report.jsonl");
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == o.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify on the rescaling family uses absolute checks") {
  RunConfig c = quartic_family("degenerate");
  c.suite = {"dm-cubic"};
  const Output o = run_cfg(c);
  CHECK(o.code == kExitOk);
  for (const auto& r : lines(o.out)) {
    CHECK(r["detail"]["mode"] == "absolute");
    CHECK(r["rel_err"].get<double>() < 1e-7);
  }
}

TEST_CASE("verify reports a failing check with exit code 1") {
  RunConfig c = quartic_family("generic");
  c.suite = {"taylor"};
  c.tolerances.taylor = 1e-14;  // below the finite-difference accuracy
  const Output o = run_cfg(c);
  CHECK(o.code == kExitCheckFailed);
  CHECK(lines(o.out).at(1)["pass"] == false);
}

TEST_CASE("inapplicable checks are input errors") {
  RunConfig c;
  c.suite = {"rauch"};
  CHECK(run_cfg(c).code == kExitInvalid);
  c.suite = {"bergman-normalization"};
  CHECK(run_cfg(c).code == kExitInvalid);
}

TEST_CASE("output is deterministic for a fixed seed") {
  RunConfig c = quartic_family("generic");
  c.suite = {"rauch"};
  c.family.pairs = 2;
  const Output a = run_cfg(c), b = run_cfg(c);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  c.threads = 3;
  CHECK(run_cfg(c).out.size() > 0);
  c.seed = 99;
  CHECK(run_cfg(c).out != a.out);
}
