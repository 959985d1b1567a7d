#pragma once

// Run configuration: a single JSON document with every default materialized.
//
// Curves:
//   {"kind": "named", "name": "airy" | "joukowski" | "quartic" | "lemniscatic" | "equianharmonic"}
//   {"kind": "hyperelliptic", "P": [c0, c1, ...]}
//   {"kind": "parametric", "x": {"num": [...], "den": [...]}, "y": {...}}
// Coefficients are lowest degree first; each is an integer, a string "p/q",
// a real number, or [re, im]. Integers and strings are exact.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttr/curve.hpp"
#include "ttr/hitchin.hpp"
#include "ttr/kernels.hpp"

namespace ttr {

struct FamilyConfig {
  cplx direction{1.0, 0.0};
  double radius = 0.05;
  double step = 1e-3;
  std::optional<std::pair<cplx, cplx>> a_pair, b_pair;
  double separation = 0.1;
  int pairs = 5;  // random (p, q) pairs for the variational check
};

struct RecursionConfig {
  int g = 0, n = 3;
  int g_max = 2, n_max = 3;
  int max_euler = 8;  // bound on 2g - 2 + n; clips the (g_max, n_max) property grid
  std::string variant = "ordinary";
  std::string mode = "exact";  // exact | numeric
  int series_order = 0;        // 0 = automatic
  int contour_nodes = 64;
  int samples = 10;  // sampled tuples for CSV output and property and normalization checks
  nlohmann::json multiplier;  // Hitchin-global m(x) coefficients, or null
};

struct Tolerances {
  double properties = 1e-10;  // exact mode
  double properties_numeric = 1e-7;
  double rauch = 1e-4;
  double dm_cubic = 1e-3;
  double taylor = 1e-3;
  double taylor_m2 = 1e-8;
  double bergman_a = 1e-8;
  double bergman_b = 1e-6;
  double cauchy = 1e-9;
  double quadrature = 1e-9;
  double degenerate_floor = 1e-7;
};

struct OutputConfig {
  std::string dir;  // empty: stdout only
  std::string report = "report.jsonl";
  std::string csv = "values.csv";
};

struct RunConfig {
  std::string command = "verify";
  nlohmann::json curve = {{"kind", "named"}, {"name", "airy"}};
  nlohmann::json twist;  // null or coefficient list
  FamilyConfig family;
  RecursionConfig recursion;
  ModuliSpec dims;
  Tolerances tolerances;
  std::vector<std::string> suite{"properties"};  // "all" expands to every check
  OutputConfig output;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  RunConfig();
  void validate() const;  // InvalidInput on bad values
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);  // missing keys take defaults
};

// Coefficient helpers shared with the CLI.
bool coefficients_exact(const nlohmann::json& list);
PolyC poly_c_from_json(const nlohmann::json& list);
PolyQ poly_q_from_json(const nlohmann::json& list);

SpectralCurve curve_from_json(const nlohmann::json& curve, const nlohmann::json& twist);
KernelSpec kernel_spec(const RecursionConfig& r);
std::optional<PolyQ> exact_multiplier(const RecursionConfig& r);

}  // namespace ttr
