#include "ttr/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ttr {

namespace {

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

double poly_scale(const PolyC& p) {
  double s = 0.0;
  for (const auto& c : p.c) s = std::max(s, std::abs(c));
  return s;
}

// Numerator of s(x(z)) for x = num/den: sum s_k num^k den^(d-k).
PolyC compose_numerator(const PolyC& s, const RatFnC& x) {
  const int d = s.degree();
  PolyC acc;
  for (int k = 0; k <= d; ++k) {
    PolyC term(std::vector<cplx>{s.c[static_cast<std::size_t>(k)]});
    for (int i = 0; i < k; ++i) term = term * x.num;
    for (int i = k; i < d; ++i) term = term * x.den;
    acc = acc + term;
  }
  return acc;
}

constexpr int kDefaultOrder = 24;

}  // namespace

TwistSection TwistSection::from_coefficients(const PolyC& s) {
  if (s.is_zero()) throw InvalidInput("twist section is identically zero");
  TwistSection t;
  t.s = s;
  for (const auto& r : polynomial_roots(s)) {
    if (r.repeated) throw InvalidInput("twist section has a repeated zero near " + fmt(r.value));
    t.zeros.push_back(r.value);
  }
  return t;
}

TwistSection TwistSection::from_rational(const PolyQ& s) {
  TwistSection t = from_coefficients(to_complex(s));
  t.exact = s;
  return t;
}

SpectralCurve SpectralCurve::parametric(const RatFnQ& x, const RatFnQ& y, std::optional<TwistSection> twist) {
  SpectralCurve c = parametric(to_complex(x), to_complex(y), std::move(twist));
  c.xq_ = x;
  c.yq_ = y;
  c.build_parametric_data();
  return c;
}

SpectralCurve SpectralCurve::parametric(const RatFnC& x, const RatFnC& y, std::optional<TwistSection> twist) {
  if (x.num.is_zero() && x.den.is_zero()) throw InvalidInput("malformed rational function for x");
  if (x.den.is_zero() || y.den.is_zero()) throw InvalidInput("rational function with zero denominator");
  if (x.is_constant()) throw InvalidInput("x must be non-constant");
  if (x.derivative_numerator().is_zero()) throw InvalidInput("x must be non-constant");
  SpectralCurve c;
  c.model_ = ModelKind::Parametric;
  c.x_ = x;
  c.y_ = y;
  c.twist_ = std::move(twist);
  c.build_parametric_data();
  return c;
}

SpectralCurve SpectralCurve::hyperelliptic(const PolyC& P, std::optional<TwistSection> twist) {
  if (P.degree() != 3 && P.degree() != 4) throw InvalidInput("hyperelliptic model needs deg P = 3 or 4");
  SpectralCurve c;
  c.model_ = ModelKind::Hyperelliptic;
  c.P_ = P;
  c.roots_ = simple_roots(P);
  c.twist_ = std::move(twist);
  c.build_hyperelliptic_data();
  return c;
}

SpectralCurve SpectralCurve::with_twist(std::optional<TwistSection> twist) const {
  if (model_ == ModelKind::Hyperelliptic) return hyperelliptic(P_, std::move(twist));
  if (xq_ && yq_) return parametric(*xq_, *yq_, std::move(twist));
  return parametric(x_, y_, std::move(twist));
}

const TwistSection& SpectralCurve::twist() const {
  if (!twist_) throw InvalidInput("curve carries no twist section");
  return *twist_;
}

const RatFnQ& SpectralCurve::x_exact() const {
  if (!xq_) throw DomainError("curve has no exact rational data");
  return *xq_;
}
const RatFnQ& SpectralCurve::y_exact() const {
  if (!yq_) throw DomainError("curve has no exact rational data");
  return *yq_;
}

void SpectralCurve::build_parametric_data() {
  ram_.clear();
  report_ = GoodReport{};
  const PolyC dxn = x_.derivative_numerator();
  const PolyC dyn = y_.derivative_numerator();
  std::optional<std::vector<std::pair<Rational, int>>> exact_roots;
  if (xq_) {
    try {
      exact_roots = rational_roots(xq_->derivative_numerator());
    } catch (const DomainError&) {
      exact_roots.reset();
    }
  }
  int idx = 0;
  for (const auto& r : polynomial_roots(dxn)) {
    const cplx z = r.value;
    if (std::abs(x_.den(z)) < 1e-10 * std::max(1.0, poly_scale(x_.den))) continue;  // pole of x
    // Multiple roots are reported once.
    bool dup = false;
    for (const auto& rp : ram_)
      if (std::abs(rp.location - z) < 1e-6) dup = true;
    if (dup) continue;
    RamPoint rp;
    rp.index = idx++;
    rp.location = z;
    if (exact_roots) {
      for (const auto& [q, m] : *exact_roots)
        if (std::abs(q.get_d() - z.real()) < 1e-7 && std::abs(z.imag()) < 1e-7) rp.exact_location = q;
    }
    report_.ramification.push_back(z);
    if (r.repeated) {
      report_.all_simple = false;
      report_.entries.push_back("ramification at z=" + fmt(z) + " is not simple");
    }
    if (std::abs(dyn(z)) < 1e-9 * std::max(1.0, poly_scale(dyn))) {
      report_.dx_dy_disjoint = false;
      report_.entries.push_back("zeros of dx and dy coincide at z=" + fmt(z));
    }
    if (twist_) {
      const cplx sx = twist_->s(x_(z));
      if (std::abs(sx) < 1e-9 * std::max(1.0, poly_scale(twist_->s))) {
        report_.twist_disjoint = false;
        report_.entries.push_back("twist zero coincides with ramification at z=" + fmt(z));
      }
    }
    ram_.push_back(std::move(rp));
  }
  report_.good = report_.all_simple && report_.dx_dy_disjoint && report_.twist_disjoint;
  if (report_.good) {
    for (auto& rp : ram_) rp.involution = local_involution(rp, kDefaultOrder);
    report_.entries.push_back(std::to_string(ram_.size()) + " simple ramification point(s)");
  }
}

void SpectralCurve::build_hyperelliptic_data() {
  ram_.clear();
  report_ = GoodReport{};
  double span = 0.0;
  for (const auto& a : roots_)
    for (const auto& b : roots_) span = std::max(span, std::abs(a - b));
  if (twist_) {
    const PolyC& s = twist_->s;
    if (s.degree() == P_.degree()) {
      PolyC diff = s.scaled(P_.leading()) - P_.scaled(s.leading());
      if (poly_scale(diff) <= 1e-12 * poly_scale(s) * std::abs(P_.leading())) twist_->canonical = true;
    }
    if (!twist_->canonical) {
      for (const auto& z : twist_->zeros)
        for (const auto& a : roots_)
          if (std::abs(z - a) < 1e-9 * std::max(1.0, span))
            throw InvalidInput("twist zero collides with branch point " + fmt(a));
    }
  }
  int idx = 0;
  for (const auto& a : roots_) {
    RamPoint rp;
    rp.index = idx++;
    rp.location = a;
    rp.involution = SeriesC(1, {cplx(-1.0)}, kDefaultOrder);
    ram_.push_back(rp);
    report_.ramification.push_back(a);
  }
  if (branch_at_infinity()) {
    RamPoint rp;
    rp.index = idx++;
    rp.at_infinity = true;
    rp.location = cplx(std::numeric_limits<double>::infinity(), 0.0);
    rp.involution = SeriesC(1, {cplx(-1.0)}, kDefaultOrder);
    ram_.push_back(rp);
  }
  report_.entries.push_back(std::to_string(ram_.size()) + " simple branch point(s)");
}

GoodReport SpectralCurve::validate_good() const { return report_; }

const std::vector<RamPoint>& SpectralCurve::ramification_points() const {
  if (!report_.good) throw InvalidInput("curve is not good: " + (report_.entries.empty() ? std::string() : report_.entries.front()));
  return ram_;
}

SeriesC SpectralCurve::local_involution(const RamPoint& p, int order) const {
  if (model_ == ModelKind::Hyperelliptic) return SeriesC(1, {cplx(-1.0)}, order);
  SeriesC X = x_.series_at(p.location, order + 2);
  return involution_from_x(X).truncated(order);
}

LocalFrame SpectralCurve::ram_frame(const RamPoint& p, int order) const {
  LocalFrame f;
  if (model_ == ModelKind::Parametric) {
    f.x = x_.series_at(p.location, order);
    f.y = y_.series_at(p.location, order);
  } else if (!p.at_infinity) {
    // P(a + w) = w Q(w); x = a + t^2, y = t sqrt(Q(t^2)).
    SeriesC Pw = P_.series_at(p.location, order);
    std::vector<cplx> q(static_cast<std::size_t>(order + 1), cplx{});
    for (int k = 1; 2 * (k - 1) <= order && k <= std::min(P_.degree(), order); ++k) q[static_cast<std::size_t>(2 * (k - 1))] = Pw.coeff(k);
    SeriesC Q(0, q, order);
    f.x = SeriesC(0, {p.location, cplx{}, cplx(1.0)}, order);
    f.y = Q.sqrt(+1).shifted(1);
  } else {
    // x = t^-2, y = t^-3 sqrt(Q(t^2)) with Q(w) = w^3 P(1/w).
    std::vector<cplx> q(static_cast<std::size_t>(order + 4), cplx{});
    for (int k = 0; k <= 3; ++k) q[static_cast<std::size_t>(2 * k)] = P_.c[static_cast<std::size_t>(3 - k)];
    SeriesC Q(0, q, order + 3);
    f.x = SeriesC::monomial(cplx(1.0), -2, order);
    f.y = Q.sqrt(+1).shifted(-3);
  }
  f.s = twist_ ? twist_->s.compose(f.x) : SeriesC::constant(cplx(1.0), order);
  return f;
}

LocalFrame SpectralCurve::local_frame(const CurvePoint& p, int order, bool pole_free) const {
  LocalFrame f;
  if (model_ == ModelKind::Parametric) {
    for (const auto& r : ram_)
      if (std::abs(r.location - p.coord) < 1e-12) return ram_frame(r, order);
    f.x = x_.series_at(p.coord, order);
    f.y = y_.series_at(p.coord, order);
  } else {
    for (const auto& r : ram_)
      if (!r.at_infinity && std::abs(r.location - p.coord) < 1e-12) return ram_frame(r, order);
    f.x = SeriesC(0, {p.coord, cplx(1.0)}, order);
    SeriesC Px = P_.series_at(p.coord, order);
    f.y = Px.sqrt(+1);
    if (std::abs(f.y.coeff(0) + p.y) < std::abs(f.y.coeff(0) - p.y)) f.y = -f.y;
  }
  f.s = twist_ ? twist_->s.compose(f.x) : SeriesC::constant(cplx(1.0), order);
  if (pole_free && twist_ && !f.s.is_zero() && f.s.lowest_order() > 0)
    throw DomainError("frame requested at a twist zero " + fmt(x_of(p)));
  return f;
}

CurvePoint SpectralCurve::point(cplx z) const {
  if (model_ != ModelKind::Parametric) throw InvalidInput("point(z) needs a parametric curve");
  return CurvePoint{z, y_(z), std::nullopt};
}

CurvePoint SpectralCurve::point(cplx x, cplx y) const {
  if (model_ != ModelKind::Hyperelliptic) throw InvalidInput("point(x, y) needs a hyperelliptic curve");
  const cplx px = P_(x);
  if (std::abs(y * y - px) > 1e-8 * std::max(1.0, std::abs(px))) throw InvalidInput("point is not on the curve");
  return CurvePoint{x, y, std::nullopt};
}

CurvePoint SpectralCurve::point_on_sheet(cplx x, int sheet) const {
  if (model_ != ModelKind::Hyperelliptic) throw InvalidInput("point_on_sheet needs a hyperelliptic curve");
  cplx y = std::sqrt(P_(x));
  return CurvePoint{x, sheet >= 0 ? y : -y, std::nullopt};
}

CurvePoint SpectralCurve::involution(const CurvePoint& p) const {
  if (model_ != ModelKind::Hyperelliptic) throw DomainError("global involution exists only on hyperelliptic models");
  CurvePoint q{p.coord, -p.y, std::nullopt};
  if (p.flat) q.flat = -*p.flat;
  return q;
}

cplx SpectralCurve::x_of(const CurvePoint& p) const {
  return model_ == ModelKind::Parametric ? x_(p.coord) : p.coord;
}

cplx SpectralCurve::dx(const CurvePoint& p) const {
  if (model_ == ModelKind::Hyperelliptic) return 1.0;
  const cplx d = x_.den(p.coord);
  return x_.derivative_numerator()(p.coord) / (d * d);
}

cplx SpectralCurve::dy(const CurvePoint& p) const {
  if (model_ == ModelKind::Hyperelliptic) return P_.derivative()(p.coord) / (2.0 * p.y);
  const cplx d = y_.den(p.coord);
  return y_.derivative_numerator()(p.coord) / (d * d);
}

cplx SpectralCurve::s_of(const CurvePoint& p) const { return twist_ ? twist_->s(x_of(p)) : cplx(1.0); }

std::vector<cplx> SpectralCurve::twist_zero_coords() const {
  if (!twist_ || twist_->canonical) return {};
  if (model_ == ModelKind::Hyperelliptic) return twist_->zeros;
  std::vector<cplx> out;
  for (const auto& r : polynomial_roots(compose_numerator(twist_->s, x_))) out.push_back(r.value);
  return out;
}

std::vector<cplx> SpectralCurve::singular_coords() const {
  if (model_ != ModelKind::Parametric) return {};
  std::vector<cplx> out;
  for (const auto& r : polynomial_roots(x_.den)) out.push_back(r.value);
  for (const auto& r : polynomial_roots(y_.den)) out.push_back(r.value);
  return out;
}

}  // namespace ttr
