#include <doctest.h>

#include "ttr/kernels.hpp"

using namespace ttr;

namespace {

PolyC pc(std::vector<cplx> c) { return PolyC(std::move(c)); }
PolyQ pq(std::vector<Rational> c) { return PolyQ(std::move(c)); }

SpectralCurve airy(std::optional<TwistSection> tw = {}) {
  return SpectralCurve::parametric(RatFnQ{pq({0, 0, 1}), pq({1})}, RatFnQ{pq({0, 1}), pq({1})}, tw);
}

struct Quartic {
  SpectralCurve c = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}));
  CycleBasis cb;
  std::shared_ptr<const Uniformization> uni;
  Quartic() {
    CycleOptions o;
    o.a_pair = {cplx(1, 0), cplx(-1, 0)};
    o.b_pair = {cplx(-1, 0), cplx(0, 1)};
    cb = cycle_basis(c, o);
    uni = std::make_shared<Uniformization>(c, cb);
  }
  CurvePoint at(cplx x, int sheet = 1) const { return CurvePoint{x, double(sheet) * std::sqrt(c.P()(x)), {}}; }
};

}  // namespace

TEST_CASE("airy recursion kernel") {
  auto c = airy();
  auto geo = make_geometry(c);
  const RamPoint& r = c.ramification_points().at(0);
  RecursionKernel K(geo, r, {});
  CurvePoint p0 = c.point(cplx(0.9, 0.4));
  for (cplx t : {cplx(0.1, 0.05), cplx(-0.2, 0.13)}) {
    LocalNode n = geo->node(r, t);
    CHECK(std::abs(n.sq.coord + t) < 1e-14);
    CHECK(std::abs(K.omega(n) - 4.0 * t * t) < 1e-14);
    cplx z0 = p0.coord;
    CHECK(std::abs(K.value(p0, n) - 1.0 / (2.0 * t * (z0 * z0 - t * t))) < 1e-12);
  }
  // Laurent expansion in t: 1/(2 z0^2 t) + 1/(2 z0^4) t + ...
  SeriesC L = K.laurent(p0, -2, 3, 0.2);
  cplx z0 = p0.coord;
  CHECK(std::abs(L.coeff(-1) - 1.0 / (2.0 * z0 * z0)) < 1e-12);
  CHECK(std::abs(L.coeff(0)) < 1e-12);
  CHECK(std::abs(L.coeff(1) - 1.0 / (2.0 * std::pow(z0, 4))) < 1e-12);
  CHECK(std::abs(L.coeff(-2)) < 1e-12);
}

TEST_CASE("twisted and global kernels rescale omega") {
  auto s = pc({2.0, 1.0});
  auto c = airy(TwistSection::from_coefficients(s));
  auto geo = make_geometry(c);
  const RamPoint& r = c.ramification_points().at(0);
  KernelSpec tw{Variant::Twisted, {}, {}};
  KernelSpec hg{Variant::HitchinGlobal, [](cplx x) { return x + 3.0; }, {}};
  RecursionKernel K0(geo, r, {}), Kt(geo, r, tw), Kh(geo, r, hg);
  CurvePoint p0 = c.point(cplx(1.1, -0.3));
  LocalNode n = geo->node(r, cplx(0.07, 0.11));
  cplx x = c.x_of(n.q);
  CHECK(std::abs(Kt.value(p0, n) - s(x) * K0.value(p0, n)) < 1e-12 * std::abs(Kt.value(p0, n)));
  CHECK(std::abs(Kh.value(p0, n) * (x + 3.0) - K0.value(p0, n)) < 1e-12 * std::abs(K0.value(p0, n)));
  CHECK(std::abs(w01_value(*geo, p0, tw) * s(c.x_of(p0)) - w01_value(*geo, p0, {})) < 1e-13);
  CHECK_THROWS_AS(RecursionKernel(make_geometry(airy()), r, tw), InvalidInput);
}

TEST_CASE("omega vanishes to order two at ramification") {
  // Parametric x = z^2 + z^3 and hyperelliptic y^2 = x^3 - x (finite and infinite branch points).
  auto pcurve = SpectralCurve::parametric(RatFnQ{pq({0, 0, 1, 1}), pq({1})}, RatFnQ{pq({0, 1}), pq({1})});
  auto hcurve = SpectralCurve::hyperelliptic(pc({0.0, -1.0, 0.0, 1.0}));
  for (const SpectralCurve* c : {&pcurve, &hcurve}) {
    auto geo = make_geometry(*c);
    for (const auto& r : c->ramification_points()) {
      // At infinity of a cubic y dx has a pole: Omega ~ t^-6 dt.
      const int order = r.at_infinity ? -6 : 2;
      RecursionKernel K(geo, r, {});
      auto om = [&](cplx t) {
        LocalNode n = geo->node(r, t);
        return K.omega(n) * n.dcoord_dt;
      };
      double h = 0.01 * std::min(1.0, geo->local_scale(r));
      cplx a = om(h) / std::pow(h, order), b = om(0.5 * h) / std::pow(0.5 * h, order);
      CHECK(std::abs(a - b) < 0.05 * std::abs(b));
      CHECK(std::abs(b) > 1e-6);
    }
  }
}

TEST_CASE("parametric involution by Newton") {
  auto c = SpectralCurve::parametric(RatFnQ{pq({0, 0, 1, 1}), pq({1})}, RatFnQ{pq({0, 1}), pq({1})});
  ParametricGeometry geo(c);
  for (const auto& r : c.ramification_points()) {
    cplx z = r.location + cplx(0.05, 0.03);
    cplx w = geo.sigma(r, z);
    CHECK(std::abs(c.x_fn()(w) - c.x_fn()(z)) < 1e-14);
    CHECK(std::abs(w - z) > 0.05);
  }
}

TEST_CASE("genus-0 bergman and cauchy kernels") {
  auto c = airy();
  Bidifferential B = bergman(c);
  CurvePoint p = c.point(cplx(0.3, 0.2)), q = c.point(cplx(-1.0, 0.5));
  CHECK(std::abs(B(p, q) - 1.0 / ((p.coord - q.coord) * (p.coord - q.coord))) < 1e-15);
  CHECK(B(p, q) == B(q, p));
  CauchyKernel w = cauchy_kernel(c, p, q);
  CHECK(std::abs(circle_residue([&](cplx z) { return w(c.point(z)); }, p.coord, 0.1, 64) - 1.0) < 1e-13);
  CHECK(std::abs(circle_residue([&](cplx z) { return w(c.point(z)); }, q.coord, 0.1, 64) + 1.0) < 1e-13);
  CHECK_THROWS_AS(cauchy_kernel(c, p, p), InvalidInput);
}

TEST_CASE("genus-1 bergman kernel") {
  Quartic Q;
  Bidifferential B = bergman(Q.c, Q.uni);
  CurvePoint q = Q.uni->attach(Q.at(cplx(0.4, 0.9)));
  const PeriodData& pd = Q.uni->periods();

  // Symmetry and the double pole on the diagonal.
  CurvePoint p = Q.uni->attach(Q.at(cplx(-0.6, 0.3), -1));
  CHECK(std::abs(B(p, q) - B(q, p)) < 1e-12 * std::abs(B(p, q)));
  for (double h : {1e-3, 5e-4}) {
    CurvePoint qh = Q.at(q.coord + h);
    if (std::abs(qh.y - q.y) > std::abs(qh.y + q.y)) qh.y = -qh.y;
    cplx lead = B(qh, q) * h * h;
    CHECK(std::abs(lead - 1.0) < 10 * h);
  }

  // Sheet trace equals the pulled-back base kernel dx dx / (x - x')^2.
  for (cplx x : {cplx(0.1, -0.7), cplx(2.0, 1.0)}) {
    cplx tr = B(Q.at(x, 1), q) + B(Q.at(x, -1), q);
    cplx d = x - q.coord;
    CHECK(std::abs(tr - 1.0 / (d * d)) < 1e-10 * std::abs(tr));
  }

  // Normalization: A-period 0, B-period 2 pi i v.
  auto per = [&](const Contour& cont, const std::vector<QuadNode>& rule) {
    auto nodes = discretize(cont, Q.c.P(), rule);
    return integrate(nodes, [&](cplx x, cplx y) { return B(CurvePoint{x, y, {}}, q); });
  };
  CHECK(std::abs(per(Q.cb.a, Q.cb.rule_a)) < 1e-10);
  cplx expected = kTwoPiI * normalized_v(pd, q.y);
  CHECK(std::abs(per(Q.cb.b, Q.cb.rule_b) - expected) < 1e-10 * std::abs(expected));
}

TEST_CASE("genus-1 cauchy kernel") {
  Quartic Q;
  CurvePoint a = Q.at(cplx(0.6, 0.9)), b = Q.at(cplx(-0.3, -1.3), -1);
  CauchyKernel w = cauchy_kernel(Q.c, a, b, Q.uni);
  auto on_sheet = [&](const CurvePoint& ref) {
    return [&, ref](cplx x) {
      CurvePoint z = Q.at(x);
      if (std::abs(z.y - ref.y) > std::abs(z.y + ref.y)) z.y = -z.y;
      return w(z);
    };
  };
  CHECK(std::abs(circle_residue(on_sheet(a), a.coord, 0.1, 64) - 1.0) < 1e-10);
  CHECK(std::abs(circle_residue(on_sheet(b), b.coord, 0.1, 64) + 1.0) < 1e-10);
  // No residue at the image of a on the other sheet.
  CurvePoint sa{a.coord, -a.y, {}};
  CHECK(std::abs(circle_residue(on_sheet(sa), a.coord, 0.1, 64)) < 1e-10);
  auto nodes = discretize(Q.cb.a, Q.c.P(), Q.cb.rule_a);
  CHECK(std::abs(integrate(nodes, [&](cplx x, cplx y) { return w(CurvePoint{x, y, {}}); })) < 1e-9);
}

TEST_CASE("variant names") {
  for (Variant v : {Variant::Ordinary, Variant::HitchinGlobal, Variant::Twisted})
    CHECK(parse_variant(variant_name(v)) == v);
  CHECK_THROWS_AS(parse_variant("bogus"), InvalidInput);
}

TEST_CASE("bergman period helper matches direct contour sums") {
  Quartic Q;
  for (cplx x : {cplx(0.4, 0.9), cplx(-1.7, 0.2), cplx(0.3, -1.6)}) {
    const CurvePoint z = Q.at(x, x.real() > 0 ? 1 : -1);
    const BergmanPeriods bp = bergman_periods(Q.c, Q.uni, z);
    CHECK(std::abs(bp.a_period) < 1e-12);
    // v = dx / (omega_A y), independent of the helper.
    const cplx v = 1.0 / (Q.uni->periods().omega_a * z.y);
    CHECK(std::abs(bp.expected_b - kTwoPiI * v) < 1e-13 * std::abs(v));
    CHECK(std::abs(bp.b_period - bp.expected_b) < 1e-10 * std::abs(bp.expected_b));
  }
  CHECK_THROWS(bergman_periods(Q.c, nullptr, Q.at(cplx(0.4, 0.9))));
}

TEST_CASE("cauchy residue helper") {
  Quartic Q;
  const CurvePoint a = Q.at(cplx(0.6, 0.9)), b = Q.at(cplx(-0.3, -1.3), -1);
  const auto [ra, rb] = cauchy_residues(Q.c, a, b, Q.uni, 0.1);
  CHECK(std::abs(ra - 1.0) < 1e-10);
  CHECK(std::abs(rb + 1.0) < 1e-10);
  const auto [ra2, rb2] = cauchy_residues(Q.c, a, b, Q.uni, 0.05, 128);
  CHECK(std::abs(ra2 - ra) < 1e-12);
  CHECK(std::abs(rb2 - rb) < 1e-12);
}
