#pragma once

// Homology cycles of genus-1 hyperelliptic curves, their periods, the Abel
// map and the twisted canonical one-form.

#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ttr/curve.hpp"
#include "ttr/quadrature.hpp"

namespace ttr {

struct PathPiece {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  cplx from{}, to{};                             // Line
  cplx center{};                                 // Arc
  double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

  static PathPiece line(cplx a, cplx b);
  static PathPiece arc(cplx c, double r, double t0, double t1);
  cplx at(double s) const;     // s in [0, 1]
  cplx deriv(double s) const;  // d/ds
  PathPiece reversed() const;
  double distance_to(cplx z) const;
};

// Closed path in the x-plane. The fibre value starts at
// sheet * sqrt(P(start)) (principal root) and is continued along the path.
struct Contour {
  std::vector<PathPiece> pieces;
  int sheet = +1;

  cplx start() const { return pieces.front().at(0.0); }
  double length_param() const { return static_cast<double>(pieces.size()); }
  cplx at(double S) const;
  cplx deriv(double S) const;
  Contour reversed() const;
  double distance_to(cplx z) const;

  nlohmann::json to_json() const;
  static Contour from_json(const nlohmann::json& j);
};

// Counterclockwise loop at distance r around the segment [p, q].
Contour stadium(cplx p, cplx q, double r);

// Continues a square root along a parametrized path by the nearest-root rule.
class SheetTracker {
 public:
  SheetTracker(std::function<cplx(double)> square, double s0, double s1, cplx initial_root, int initial_samples = 64);
  cplx operator()(double s) const;
  cplx end_value() const { return roots_.back(); }

 private:
  std::function<cplx(double)> square_;
  std::vector<double> s_;
  std::vector<cplx> roots_;
};

// Quadrature node on a contour with the fibre value already continued.
struct PathNode {
  cplx x, y;
  cplx wdx;  // quadrature weight times dx/dS
};

// Discretizes a contour for y^2 = P with a fixed composite rule. When
// start_y is given it replaces the sheet flag for the initial root.
std::vector<PathNode> discretize(const Contour& c, const PolyC& P, const std::vector<QuadNode>& rule,
                                 std::optional<cplx> start_y = {});

// Composite Gauss-Legendre rule adapted to the integrands returned by probe(x, y).
std::vector<QuadNode> contour_rule(const Contour& c, const PolyC& P,
                                   const std::function<std::vector<cplx>(cplx, cplx)>& probe, double tol);

cplx integrate(const std::vector<PathNode>& nodes, const std::function<cplx(cplx, cplx)>& per_dx);

struct CycleOptions {
  std::optional<std::pair<cplx, cplx>> a_pair, b_pair;  // branch points (x-values) encircled
  double separation = 0.1;     // fraction of the smallest branch-point distance
  double radius_factor = 0.4;  // loop radius as a fraction of the corridor clearance
  double tol = 1e-12;
};

struct CycleBasis {
  Contour a, b;
  std::vector<QuadNode> rule_a, rule_b;
  std::pair<int, int> a_pair{0, 1}, b_pair{1, 2};  // indices into branch_points()
  int intersection[2][2] = {{0, 1}, {-1, 0}};
  double separation = 0.0;  // absolute corridor margin that was enforced
};

CycleBasis cycle_basis(const SpectralCurve& c, const CycleOptions& opts = {});

// Raises InvalidInput when any cycle passes within the enforced margin of the
// given points.
void check_corridor(const CycleBasis& cb, const std::vector<cplx>& points);

struct PeriodData {
  cplx omega_a, omega_b;  // periods of dx/y
  cplx tau;
};

// Periods on the curve y^2 = P carried by the (fixed) cycle contours.
PeriodData periods_on(const CycleBasis& cb, const PolyC& P, std::optional<cplx> a_start_y = {},
                      std::optional<cplx> b_start_y = {});
PeriodData period_data(const SpectralCurve& c, const CycleBasis& cb);

// v = dx / (omega_A y), per unit dx.
cplx normalized_v(const PeriodData& pd, cplx y);

// Abel map and torus kernel data of a genus-1 hyperelliptic curve. The base
// point is the first finite branch point.
class Uniformization {
 public:
  Uniformization(const SpectralCurve& c, const PeriodData& pd);
  Uniformization(const SpectralCurve& c, const CycleBasis& cb);

  const CycleBasis* basis() const { return basis_ ? &*basis_ : nullptr; }

  const PeriodData& periods() const { return pd_; }
  cplx tau() const { return pd_.tau; }
  cplx omega_a() const { return pd_.omega_a; }

  cplx abel(cplx x, cplx y) const;  // modulo the lattice
  CurvePoint attach(CurvePoint p) const;
  cplx branch_image(const RamPoint& r) const;
  // u - u(branch point) in the local coordinate of ram_frame.
  const SeriesC& local_abel_series(const RamPoint& r) const;

  double lattice_distance(cplx w) const;  // distance of w to the nearest lattice point
  cplx reduce(cplx w) const;              // lattice representative near 0

  cplx bergman_constant() const { return c_; }
  cplx flat_kernel(cplx w) const;     // p(w) + c
  cplx flat_primitive(cplx w) const;  // antiderivative of flat_kernel (quasi-periodic)

 private:
  SpectralCurve curve_;
  PeriodData pd_;
  std::optional<CycleBasis> basis_;
  std::vector<cplx> images_;          // per ramification index
  std::vector<SeriesC> local_;        // per ramification index
  cplx c_{}, drift_{};                // drift_ = c + theta'''(0)/(3 theta'(0))

  cplx route_from(int k, cplx x, cplx y, bool* matched) const;
  cplx abel_from_infinity(cplx x_mid, cplx y_mid) const;
};

struct PoleRecord {
  cplx x, y;
  int order = 1;
  cplx residue;
};

// One-form evaluated per unit dx at (x, y).
struct OneForm {
  std::function<cplx(cplx, cplx)> eval;
  std::vector<PoleRecord> poles;
  std::vector<cplx> b_divisor;  // x-values of tagged simple poles
};

// Theta = y dx / s(x).
OneForm theta_form(const SpectralCurve& c);

// lambda_A = integral of Theta over the A-cycle.
cplx lambda_coordinate(const CycleBasis& cb, const PolyC& P, const PolyC& s, std::optional<cplx> a_start_y = {});
std::vector<cplx> lambda_coordinates(const SpectralCurve& c, const CycleBasis& cb);

}  // namespace ttr
