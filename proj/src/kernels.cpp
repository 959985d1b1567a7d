#include "ttr/kernels.hpp"

#include <cmath>
#include <limits>

namespace ttr {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Ordinary:
      return "ordinary";
    case Variant::HitchinGlobal:
      return "hitchin-global";
    case Variant::Twisted:
      return "twisted";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "ordinary") return Variant::Ordinary;
  if (s == "hitchin-global") return Variant::HitchinGlobal;
  if (s == "twisted") return Variant::Twisted;
  throw InvalidInput("unknown kernel variant '" + s + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CurvePoint with_flat(const Uniformization& u, const CurvePoint& p) { return p.flat ? p : u.attach(p); }

std::shared_ptr<const Uniformization> default_uniformization(const SpectralCurve& c) {
  return std::make_shared<Uniformization>(c, cycle_basis(c));
}

}  // namespace

Bidifferential bergman(const SpectralCurve& c, std::shared_ptr<const Uniformization> uni) {
  Bidifferential B;
  B.b_divisor = c.twist_zero_coords();
  if (c.genus() == 0) {
    B.mode = GenusMode::ExactGenus0;
    B.eval = [](const CurvePoint& p, const CurvePoint& q) {
      const cplx d = p.coord - q.coord;
      return 1.0 / (d * d);
    };
    return B;
  }
  if (!uni) throw InvalidInput("genus-1 Bergman kernel needs a uniformization");
  B.mode = GenusMode::Elliptic;
  B.eval = [uni](const CurvePoint& p0, const CurvePoint& q0) {
    CurvePoint p = with_flat(*uni, p0), q = with_flat(*uni, q0);
    const cplx wa = uni->omega_a();
    return uni->flat_kernel(*p.flat - *q.flat) / (wa * wa * p.y * q.y);
  };
  return B;
}

Bidifferential symmetrize_b(const SpectralCurve& c, const Bidifferential& B) {
  if (!c.has_twist()) throw InvalidInput("symmetrization needs a twist section");
  Bidifferential S = B;
  S.b_divisor = c.twist_zero_coords();
  S.eval = [B](const CurvePoint& p, const CurvePoint& q) { return 0.5 * (B(p, q) + B(q, p)); };
  return S;
}

CauchyKernel cauchy_kernel(const SpectralCurve& c, const CurvePoint& a, const CurvePoint& b,
                           std::shared_ptr<const Uniformization> uni) {
  CauchyKernel k;
  if (std::abs(a.coord - b.coord) == 0.0 && a.y == b.y) throw InvalidInput("Cauchy kernel needs a != b");
  for (const auto& r : c.ramification_points())
    if (!r.at_infinity && (std::abs(r.location - a.coord) < 1e-12 || std::abs(r.location - b.coord) < 1e-12))
      throw InvalidInput("Cauchy kernel endpoints must avoid ramification points");
  if (c.genus() == 0) {
    k.a = a;
    k.b = b;
    k.eval = [a, b](const CurvePoint& z) { return 1.0 / (z.coord - a.coord) - 1.0 / (z.coord - b.coord); };
    return k;
  }
  if (!uni) throw InvalidInput("genus-1 Cauchy kernel needs a uniformization");
  if (!uni->basis()) throw InvalidInput("genus-1 Cauchy kernel needs a uniformization built from a cycle basis");
  k.a = with_flat(*uni, a);
  k.b = with_flat(*uni, b);
  const cplx ub = *k.b.flat;
  auto make = [uni, ub](cplx D) {
    return [uni, D, ub](const CurvePoint& z0) {
      CurvePoint z = with_flat(*uni, z0);
      const cplx w = uni->reduce(ub - *z.flat);
      return (uni->flat_primitive(D + w) - uni->flat_primitive(w)) / (uni->omega_a() * z.y);
    };
  };
  // The lattice representative of u(a) - u(b) fixes the path class; shifting it
  // by tau changes the A-period by 2 pi i.
  cplx D = *k.a.flat - *k.b.flat;
  const CycleBasis& cb = *uni->basis();
  const auto nodes = discretize(cb.a, c.P(), cb.rule_a);
  auto a_period = [&](cplx d) {
    auto f = make(d);
    return integrate(nodes, [&](cplx x, cplx y) { return f(CurvePoint{x, y, {}}); });
  };
  const double n = std::round((a_period(D) / kTwoPiI).real());
  D -= n * uni->tau();
  if (std::abs(a_period(D)) > 1e-6) throw ConvergenceError("Cauchy kernel A-period normalization failed");
  k.eval = make(D);
  return k;
}

cplx EvalGeometry::ydx(const CurvePoint& p) const { return p.y * curve_.dx(p); }
cplx EvalGeometry::dxdy(const CurvePoint& p) const { return curve_.dx(p) * curve_.dy(p); }

ParametricGeometry::ParametricGeometry(SpectralCurve c) : EvalGeometry(std::move(c)) {
  const SpectralCurve& cv = curve();
  std::vector<cplx> special = cv.twist_zero_coords();
  for (const auto& z : cv.singular_coords()) special.push_back(z);
  for (const auto& r : ram()) {
    double d = kInf;
    for (const auto& o : ram())
      if (o.index != r.index) d = std::min(d, std::abs(o.location - r.location));
    for (const auto& z : special) d = std::min(d, std::abs(z - r.location));
    scale_.push_back(d);
  }
}

cplx ParametricGeometry::bergman(const CurvePoint& p, const CurvePoint& q) const {
  const cplx d = p.coord - q.coord;
  return 1.0 / (d * d);
}

cplx ParametricGeometry::numerator(const CurvePoint& p0, const LocalNode& n, const RamPoint&) const {
  return 1.0 / (n.sq.coord - p0.coord) - 1.0 / (n.q.coord - p0.coord);
}

cplx ParametricGeometry::sigma(const RamPoint& r, cplx z) const {
  const RatFnC& X = curve().x_fn();
  cplx w = r.location + r.involution.evaluate(z - r.location);
  // (N(w) D(z) - N(z) D(w)) / (w - z) as a polynomial in w.
  const cplx Nz = X.num(z), Dz = X.den(z);
  const std::size_t len = std::max(X.num.c.size(), X.den.c.size());
  std::vector<cplx> c(len, cplx{});
  for (std::size_t k = 0; k < X.num.c.size(); ++k) c[k] += X.num.c[k] * Dz;
  for (std::size_t k = 0; k < X.den.c.size(); ++k) c[k] -= Nz * X.den.c[k];
  std::vector<cplx> q(len > 1 ? len - 1 : 1, cplx{});
  cplx carry{};
  for (std::size_t k = len; k-- > 1;) {
    carry = c[k] + carry * z;
    q[k - 1] = carry;
  }
  const PolyC g(q);
  const PolyC dg = g.derivative();
  for (int it = 0; it < 60; ++it) {
    const cplx step = g(w) / dg(w);
    w -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

LocalNode ParametricGeometry::node(const RamPoint& r, cplx t) const {
  LocalNode n;
  n.t = t;
  const cplx z = r.location + t;
  n.q = curve().point(z);
  n.sq = curve().point(sigma(r, z));
  n.dcoord_dt = 1.0;
  n.sigma_jac = curve().dx(n.q) / curve().dx(n.sq);
  return n;
}

double ParametricGeometry::local_scale(const RamPoint& r) const { return scale_.at(static_cast<std::size_t>(r.index)); }

double ParametricGeometry::local_distance(const RamPoint& r, const CurvePoint& p) const {
  return std::abs(p.coord - r.location);
}

EllipticGeometry::EllipticGeometry(SpectralCurve c, std::shared_ptr<const Uniformization> uni)
    : EvalGeometry(std::move(c)), uni_(std::move(uni)) {
  if (!uni_) uni_ = default_uniformization(curve());
  const auto& roots = curve().branch_points();
  const auto zeros = curve().twist_zero_coords();
  for (const auto& r : ram()) {
    frames_.push_back(curve().ram_frame(r, 24));
    double d = kInf;
    auto dist = [&](cplx e) { return r.at_infinity ? 1.0 / std::sqrt(std::abs(e)) : std::sqrt(std::abs(e - r.location)); };
    for (const auto& e : roots)
      if (r.at_infinity || std::abs(e - r.location) > 0.0) d = std::min(d, dist(e));
    for (const auto& z : zeros) d = std::min(d, dist(z));
    scale_.push_back(d);
  }
}

CurvePoint EllipticGeometry::prepare(CurvePoint p) const { return with_flat(*uni_, p); }

cplx EllipticGeometry::bergman(const CurvePoint& p0, const CurvePoint& q0) const {
  CurvePoint p = with_flat(*uni_, p0), q = with_flat(*uni_, q0);
  const cplx wa = uni_->omega_a();
  return uni_->flat_kernel(*p.flat - *q.flat) / (wa * wa * p.y * q.y);
}

cplx EllipticGeometry::numerator(const CurvePoint& p00, const LocalNode& n, const RamPoint& r) const {
  CurvePoint p0 = with_flat(*uni_, p00);
  const cplx u0 = *p0.flat;
  const cplx d = uni_->branch_image(r) - u0;
  const cplx shift = d - uni_->reduce(d);
  const cplx w1 = *n.q.flat - u0 - shift, w2 = *n.sq.flat - u0 - shift;
  return (uni_->flat_primitive(w1) - uni_->flat_primitive(w2)) / (uni_->omega_a() * p0.y);
}

LocalNode EllipticGeometry::node(const RamPoint& r, cplx t) const {
  const LocalFrame& f = frames_.at(static_cast<std::size_t>(r.index));
  LocalNode n;
  n.t = t;
  const cplx x = r.at_infinity ? 1.0 / (t * t) : r.location + t * t;
  const cplx yser = f.y.evaluate(t);
  cplx y = std::sqrt(curve().P()(x));
  if (std::abs(y - yser) > std::abs(y + yser)) y = -y;
  const cplx ua = uni_->branch_image(r);
  const cplx U = uni_->local_abel_series(r).evaluate(t);
  n.q = CurvePoint{x, y, ua + U};
  n.sq = CurvePoint{x, -y, ua - U};
  n.dcoord_dt = r.at_infinity ? -2.0 / (t * t * t) : 2.0 * t;
  n.sigma_jac = 1.0;
  return n;
}

double EllipticGeometry::local_scale(const RamPoint& r) const { return scale_.at(static_cast<std::size_t>(r.index)); }

double EllipticGeometry::local_distance(const RamPoint& r, const CurvePoint& p) const {
  if (r.at_infinity) return 1.0 / std::sqrt(std::abs(p.coord));
  return std::sqrt(std::abs(p.coord - r.location));
}

std::shared_ptr<EvalGeometry> make_geometry(const SpectralCurve& c, std::shared_ptr<const Uniformization> uni) {
  if (c.model() == ModelKind::Parametric) return std::make_shared<ParametricGeometry>(c);
  return std::make_shared<EllipticGeometry>(c, std::move(uni));
}

RecursionKernel::RecursionKernel(std::shared_ptr<const EvalGeometry> geo, const RamPoint& r, KernelSpec spec)
    : geo_(std::move(geo)), r_(r), spec_(std::move(spec)) {
  if (spec_.variant == Variant::Twisted && !geo_->curve().has_twist())
    throw InvalidInput("twisted kernel needs a twist section");
  if (spec_.base_point && geo_->mode() != GenusMode::ExactGenus0)
    throw InvalidInput("a fixed base point is supported on genus-0 curves only");
}

cplx w01_value(const EvalGeometry& g, const CurvePoint& p, const KernelSpec& spec) {
  cplx v = g.ydx(p);
  if (spec.variant == Variant::HitchinGlobal && spec.w01_multiplier) v *= spec.w01_multiplier(g.curve().x_of(p));
  if (spec.variant == Variant::Twisted) v /= g.s_at(p);
  return v;
}

cplx RecursionKernel::omega(const LocalNode& n) const {
  const SpectralCurve& c = geo_->curve();
  cplx om = (n.q.y - n.sq.y) * c.dx(n.q);
  if (spec_.variant == Variant::HitchinGlobal && spec_.w01_multiplier) om *= spec_.w01_multiplier(c.x_of(n.q));
  if (spec_.variant == Variant::Twisted) om /= c.s_of(n.q);
  return om;
}

cplx RecursionKernel::value(const CurvePoint& p0, const LocalNode& n) const {
  cplx num;
  if (spec_.base_point) {
    const cplx a = *spec_.base_point;
    if (std::abs(a - p0.coord) < 1e-14 * std::max(1.0, std::abs(a)))
      throw InvalidInput("base point sits at the pole of the kernel integrand");
    num = 1.0 / (a - p0.coord) - 1.0 / (n.q.coord - p0.coord);
  } else {
    num = geo_->numerator(p0, n, r_);
  }
  return num / omega(n);
}

SeriesC RecursionKernel::laurent(const CurvePoint& p00, int lo, int hi, double radius, int nodes) const {
  CurvePoint p0 = geo_->prepare(p00);
  std::vector<cplx> c(static_cast<std::size_t>(hi - lo + 1), cplx{});
  for (int j = 0; j < nodes; ++j) {
    const cplx t = std::polar(radius, 2.0 * kPi * j / nodes);
    LocalNode n = geo_->node(r_, t);
    const cplx kt = value(p0, n) / n.dcoord_dt;
    for (int k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k - lo)] += kt * std::pow(t, -k);
  }
  for (auto& x : c) x /= static_cast<double>(nodes);
  return SeriesC(lo, c, hi);
}

BergmanPeriods bergman_periods(const SpectralCurve& c, std::shared_ptr<const Uniformization> uni, const CurvePoint& z0) {
  if (!uni || !uni->basis()) throw InvalidInput("Bergman periods need a uniformization with its cycle basis");
  const CycleBasis& cb = *uni->basis();
  const Bidifferential B = bergman(c, uni);
  const CurvePoint z = uni->attach(z0);
  const PolyC& P = c.P();
  auto period = [&](const Contour& cont) {
    auto probe = [&](cplx x, cplx y) { return std::vector<cplx>{1.0 / y, B(CurvePoint{x, y, {}}, z)}; };
    const auto rule = contour_rule(cont, P, probe, 1e-13);
    return integrate(discretize(cont, P, rule), [&](cplx x, cplx y) { return B(CurvePoint{x, y, {}}, z); });
  };
  return {period(cb.a), period(cb.b), kTwoPiI * normalized_v(uni->periods(), z.y)};
}

std::pair<cplx, cplx> cauchy_residues(const SpectralCurve& c, const CurvePoint& a, const CurvePoint& b,
                                      std::shared_ptr<const Uniformization> uni, double radius, int nodes) {
  const CauchyKernel w = cauchy_kernel(c, a, b, uni);
  auto residue = [&](const CurvePoint& ref) {
    auto run = [&](int N) {
      cplx acc{};
      for (int j = 0; j < N; ++j) {
        const cplx e = std::polar(radius, 2.0 * kPi * j / N);
        CurvePoint z = c.point_on_sheet(ref.coord + e, 1);
        if (std::abs(z.y - ref.y) > std::abs(z.y + ref.y)) z.y = -z.y;
        acc += e * w(z);
      }
      return acc / static_cast<double>(N);
    };
    const cplx r1 = run(nodes), r2 = run(2 * nodes);
    if (std::abs(r2 - r1) > 1e-11) throw ConvergenceError("Cauchy residue quadrature did not converge");
    return r2;
  };
  return {residue(a), residue(b)};
}

}  // namespace ttr
