#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttr/localexp.hpp"
#include "ttr/polynomial.hpp"

namespace ttr {

enum class ModelKind { Parametric, Hyperelliptic };

// Section s of K*(x)L on the base line; Z = zeros of s.
struct TwistSection {
  PolyC s;
  std::optional<PolyQ> exact;  // set when all coefficients are rational
  std::vector<cplx> zeros;
  bool canonical = false;  // s proportional to P: zeros sit on the branch points

  static TwistSection from_coefficients(const PolyC& s);
  static TwistSection from_rational(const PolyQ& s);
  cplx operator()(cplx x) const { return s(x); }
};

// A point on the curve. coord is z for parametric models and x for
// hyperelliptic ones; y is the fibre value; flat is the Abel coordinate
// (genus 1, attached by the uniformization).
struct CurvePoint {
  cplx coord{};
  cplx y{};
  std::optional<cplx> flat;
};

struct RamPoint {
  int index = 0;
  cplx location{};  // z or x
  bool at_infinity = false;
  std::optional<Rational> exact_location;
  SeriesC involution;  // sigma_p(t) in the local coordinate
};

// Expansions of x, y and s(x) in a local coordinate t.
struct LocalFrame {
  SeriesC x, y, s;
};

struct GoodReport {
  bool good = true;
  bool all_simple = true;
  bool dx_dy_disjoint = true;
  bool twist_disjoint = true;
  std::vector<cplx> ramification;
  std::vector<std::string> entries;
};

// Solves x(sigma(t)) = x(t), sigma(t) = -t + ..., from the expansion X of x
// at a simple ramification point (valuation of X - X(0) equal to 2).
template <class C>
LocalSeries<C> involution_from_x(const LocalSeries<C>& X) {
  using S = LocalSeries<C>;
  const int n = X.truncation_order();
  S shifted = X - S::constant(X.coeff(0), n);
  if (shifted.is_zero() || shifted.lowest_order() != 2)
    throw DomainError("zero pivot in the involution solve: ramification is not simple");
  S phi = shifted.shifted(-2);
  const C phi0 = phi.coeff(0);
  S unit = phi.scaled(CoeffTraits<C>::one() / phi0);
  S psi = unit.sqrt(+1).shifted(1);  // x - x(0) = phi0 * psi^2
  S inv = psi.reversion();
  return inv.compose(-psi);
}

class SpectralCurve {
 public:
  static SpectralCurve parametric(const RatFnQ& x, const RatFnQ& y, std::optional<TwistSection> twist = {});
  static SpectralCurve parametric(const RatFnC& x, const RatFnC& y, std::optional<TwistSection> twist = {});
  static SpectralCurve hyperelliptic(const PolyC& P, std::optional<TwistSection> twist = {});

  ModelKind model() const { return model_; }
  int genus() const { return model_ == ModelKind::Parametric ? 0 : 1; }
  bool has_twist() const { return twist_.has_value(); }
  const TwistSection& twist() const;
  SpectralCurve with_twist(std::optional<TwistSection> twist) const;

  // Hyperelliptic data.
  const PolyC& P() const { return P_; }
  const std::vector<cplx>& branch_points() const { return roots_; }  // finite roots of P
  bool branch_at_infinity() const { return model_ == ModelKind::Hyperelliptic && P_.degree() == 3; }

  // Parametric data.
  const RatFnC& x_fn() const { return x_; }
  const RatFnC& y_fn() const { return y_; }
  bool exact_available() const { return xq_.has_value() && yq_.has_value(); }
  const RatFnQ& x_exact() const;
  const RatFnQ& y_exact() const;

  GoodReport validate_good() const;
  const std::vector<RamPoint>& ramification_points() const;  // requires a good curve
  SeriesC local_involution(const RamPoint& p, int order) const;
  LocalFrame ram_frame(const RamPoint& p, int order) const;
  LocalFrame local_frame(const CurvePoint& p, int order, bool pole_free = false) const;

  CurvePoint point(cplx z) const;                 // parametric
  CurvePoint point(cplx x, cplx y) const;         // hyperelliptic, checks y^2 = P(x)
  CurvePoint point_on_sheet(cplx x, int sheet) const;  // y = sheet * principal sqrt(P(x))
  CurvePoint involution(const CurvePoint& p) const;    // global hyperelliptic involution

  cplx x_of(const CurvePoint& p) const;
  cplx dx(const CurvePoint& p) const;  // dx per unit coord
  cplx dy(const CurvePoint& p) const;  // dy per unit coord
  cplx s_of(const CurvePoint& p) const;

  // Points of the curve (in coord units) where s(x) vanishes, excluding
  // canonical zeros that sit on branch points.
  std::vector<cplx> twist_zero_coords() const;
  // Poles of x or y (parametric) that bound residue contours.
  std::vector<cplx> singular_coords() const;

 private:
  ModelKind model_ = ModelKind::Parametric;
  std::optional<TwistSection> twist_;
  PolyC P_;
  std::vector<cplx> roots_;
  RatFnC x_, y_;
  std::optional<RatFnQ> xq_, yq_;
  std::vector<RamPoint> ram_;
  GoodReport report_;

  void build_parametric_data();
  void build_hyperelliptic_data();
};

}  // namespace ttr
