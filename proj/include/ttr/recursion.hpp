#pragma once

// Topological recursion in two modes: exact rational expressions on genus-0
// curves with rational ramification points, and pointwise evaluation by
// contour quadrature around each ramification point.
//
// Normalization: with K = [integral from sigma(q) to q of B] / Omega and
// W = sum of residues of K times the bracket, the stable W(g, n) equal
// (-2)^(2g-2+n) times the values of the usual 1/2-normalized kernel.

#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ttr/exact.hpp"
#include "ttr/kernels.hpp"

namespace ttr {

constexpr int kKernelNormalization = -2;

struct RecursionOptions {
  KernelSpec kernel;
  std::optional<PolyQ> multiplier_exact;  // HitchinGlobal m(x) for exact mode
  bool include_unstable_terms = false;    // negative control: keep the (0, empty) terms
  int series_order = 0;                   // exact mode: initial truncation, 0 = automatic
  int nodes = 64;                         // trapezoid nodes; doubled once for the error check
  double tol = 1e-9;
};

class ExactRecursion {
 public:
  explicit ExactRecursion(const SpectralCurve& c, RecursionOptions opts = {});

  // Stable W(g, n), slots z0..z{n-1}.
  const ExactExpr& w(int g, int n);
  // Sum over ramification points of Res B B B / (dx dy), in the engine normalization.
  ExactExpr w03_direct();

  const std::vector<Rational>& ram_locations() const { return ram_; }
  std::string serialize(const ExactExpr& e) const { return e.serialize(ram_); }
  cplx evaluate(int g, const std::vector<cplx>& z);
  const SpectralCurve& curve() const { return curve_; }
  Variant variant() const { return opts_.kernel.variant; }
  // Largest polar coefficient of W(z) + sigma^* W(z) in any slot at any ramification point.
  double oddness_defect(const ExactExpr& e);

 private:
  struct Local;  // per-ramification series data
  using TExpr = std::map<MonoKey, SeriesQ>;

  SpectralCurve curve_;
  RecursionOptions opts_;
  std::vector<Rational> ram_;
  std::map<std::tuple<int, int, int>, ExactExpr> memo_;
  std::map<int, std::vector<std::shared_ptr<Local>>> locals_;  // keyed by truncation order
  std::unique_ptr<ExactRecursion> control_partner_;

  const std::vector<std::shared_ptr<Local>>& locals(int order);
  ExactExpr compute(int g, int n, int order);
  TExpr bracket(int g, int n, Local& L, int order);
  TExpr substitute(const ExactExpr& e, const std::vector<int>& where, const std::vector<int>& target, int out_slots,
                   Local& L);
};

class NumericRecursion {
 public:
  NumericRecursion(std::shared_ptr<const EvalGeometry> geo, RecursionOptions opts = {});

  // Stable W(g, n) (or W(0,2)) at the points, per d(coord) in each slot.
  cplx w(int g, const std::vector<CurvePoint>& p) const;
  cplx w03_direct(const std::vector<CurvePoint>& p) const;

  const EvalGeometry& geometry() const { return *geo_; }
  const RecursionOptions& options() const { return opts_; }

 private:
  std::shared_ptr<const EvalGeometry> geo_;
  RecursionOptions opts_;
  std::vector<RecursionKernel> kernels_;

  cplx w_prepared(int g, const std::vector<CurvePoint>& p) const;
  cplx residue_sum(const RamPoint& r, const std::vector<CurvePoint>& args,
                   const std::function<cplx(const LocalNode&)>& integrand) const;
};

// Contour radius (in t) around r: 0.2 of the local scale, at most half the
// distance to any of the given points, 1 when nothing else is nearby.
double residue_radius(const EvalGeometry& geo, const RamPoint& r, const std::vector<CurvePoint>& avoid);

// Res_{t=0} f dt by the trapezoid rule with N and 2N nodes on |t| = radius.
// Raises ConvergenceError when the two disagree beyond tol relative to the
// result plus floor relative to the mean absolute summand.
cplx checked_residue(const EvalGeometry& geo, const RamPoint& r, double radius,
                     const std::function<cplx(const LocalNode&)>& per_dt, int nodes, double tol,
                     double floor = 1e-13);

struct PropertyReport {
  int g = 0, n = 0;
  double symmetry_defect = 0.0;
  double oddness_defect = 0.0;
  bool poles_only_at_ramification = true;
  int max_pole_order = 0;
  int pole_bound = 0;
  bool residue_free_at_infinity = true;
  bool pass() const;
  nlohmann::json to_json() const;
};

PropertyReport check_properties(ExactRecursion& e, int g, int n);
PropertyReport check_properties(const NumericRecursion& r, int g, const std::vector<std::vector<CurvePoint>>& samples);

// Stable-W scaling exponent for a constant twist s = c: twisted = c^(2g-2+n) ordinary.
inline int constant_twist_exponent(int g, int n) { return 2 * g - 2 + n; }

}  // namespace ttr
