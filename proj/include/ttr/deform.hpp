#pragma once

// One-parameter families P_t = P0 - phi(t) c s of genus-1 spectral curves,
// with cycles held fixed in the x-plane, and the numerical checks built on
// them: derivatives of tau, the variational formula for B, the cubic c, and
// the b-period expansion of tau.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttr/kernels.hpp"
#include "ttr/periods.hpp"
#include "ttr/report.hpp"

namespace ttr {

struct FamilyOptions {
  double radius = 0.05;  // admissibility radius in t
  double step = 1e-3;    // finite-difference step
  int admissibility_samples = 16;
  CycleOptions cycles;
  std::function<cplx(cplx)> reparam;  // t -> phi(t); identity when empty
};

class CurveFamily {
 public:
  CurveFamily(SpectralCurve base, cplx direction, FamilyOptions opts = {});

  const SpectralCurve& base() const { return base_; }
  cplx direction() const { return c_; }
  const FamilyOptions& options() const { return opts_; }
  const CycleBasis& cycles() const { return cb_; }
  const PolyC& twist() const { return base_.twist().s; }
  // Twist proportional to P0: every fibre is a rescaling of the base.
  bool degenerate() const { return base_.twist().canonical; }

  cplx phi(cplx t) const { return opts_.reparam ? opts_.reparam(t) : t; }
  PolyC P_at(cplx t) const;
  SpectralCurve curve_at(cplx t) const;
  // Fibre value over x at parameter t nearest to y0.
  cplx y_at(cplx t, cplx x, cplx y0) const;
  CurvePoint point_at(cplx t, const CurvePoint& base_point) const;

  PeriodData periods_at(cplx t) const;
  cplx lambda_at(cplx t) const;
  std::shared_ptr<const Uniformization> uniformization_at(cplx t) const;

 private:
  SpectralCurve base_;
  cplx c_;
  FamilyOptions opts_;
  CycleBasis cb_;
  cplx a_y0_{}, b_y0_{};

  void check_admissible() const;
};

// Once-extrapolated central difference of a vector-valued f at 0:
// (4 D(h/2) - D(h)) / 3.
struct FdResult {
  std::vector<cplx> value;
  std::vector<cplx> central;  // D(h/2), for step-stability reporting
};
FdResult richardson(const std::function<std::vector<cplx>(double)>& f, double h);

struct FdTau {
  cplx dtau_dt{}, dlambda_dt{};
  std::optional<cplx> dtau_dlambda;  // empty when |dlambda/dt| < 1e-12
  double step = 0.0;
  nlohmann::json to_json() const;
};
FdTau fd_tau(const CurveFamily& f, std::optional<double> step = {});

// delta B(p, q) at fixed x by finite differences against
// -sum Res s delta(Theta) B(u, p) B(u, q) / (dx dy).
struct RauchValues {
  cplx fd, residue;
};
std::vector<RauchValues> rauch_values(const CurveFamily& f, const std::vector<std::pair<CurvePoint, CurvePoint>>& pq,
                                      std::optional<double> step = {});
std::vector<CheckRecord> rauch_check(const CurveFamily& f, const std::vector<std::pair<CurvePoint, CurvePoint>>& pq,
                                     double tol = 1e-4);

struct DmOptions {
  int nodes = 64;          // residue trapezoid nodes (doubled for the check)
  double tol = 1e-3;       // pairwise relative agreement
  double abs_floor = 1e-7; // degenerate families: all entries below this
  double quad_tol = 1e-9;
};

struct CubicReport {
  std::optional<cplx> c_fd, c_res, c_int;
  std::map<std::string, std::string> skipped;  // entry -> reason
  double tol = 0.0, abs_floor = 0.0;
  bool degenerate = false;
  double b_period_defect = 0.0;  // max |oint_b B(q, .) - 2 pi i v(q)| / |2 pi i v(q)| over residue nodes
  double w03_spot_defect = 0.0;  // cached triple sum against w03_direct, relative to the summand scale

  std::vector<CheckRecord> records() const;
  bool pass() const;
  nlohmann::json to_json() const;
};

// c_res = -2 pi i sum Res s v^3 / (dx dy).
cplx dm_residue(const CurveFamily& f, const DmOptions& o = {});

struct TripleIntegral {
  cplx value;              // -(i/2pi)^2 oint oint oint W03 (1/2-normalized twisted W03)
  double b_period_defect;
  double w03_spot_defect;
};
TripleIntegral dm_triple_integral(const CurveFamily& f, const DmOptions& o = {});

CubicReport dm_cubic(const CurveFamily& f, const DmOptions& o = {});

// m = 2: tau against -(i/2pi) oint_b oint_b' B. m = 3: d tau / d lambda
// against -(i/2pi)^2 oint oint oint W03.
CheckRecord taylor_check(const CurveFamily& f, int m, double tol = 1e-3);

// c_fd for two twists over the same base; reported, not asserted.
nlohmann::json s_independence(const PolyC& P0, const PolyC& s1, const PolyC& s2, cplx direction,
                              FamilyOptions opts = {});

}  // namespace ttr
