#include <doctest.h>

#include "ttr/elliptic.hpp"
#include "ttr/periods.hpp"

using namespace ttr;

namespace {

PolyC pc(std::vector<cplx> c) { return PolyC(std::move(c)); }

double agm(double a, double b) {
  for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * a; ++i) {
    double m = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = m;
  }
  return a;
}

// tau for y^2 = 4(x-e1)(x-e2)(x-e3), e1 > e2 > e3, with A around [e3,e2], B around [e2,e1].
cplx agm_tau(double e1, double e2, double e3) {
  return kI * agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2)) / agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3));
}

bool in_lattice(cplx w, cplx tau, double tol) {
  elliptic::Reduced r = elliptic::reduce(w, tau);
  return std::abs(r.w) < tol;
}

}  // namespace

TEST_CASE("stadium contours are closed and counterclockwise") {
  Contour c = stadium(cplx(-1, 0), cplx(1, 0), 0.4);
  CHECK(std::abs(c.at(0.0) - c.at(4.0)) < 1e-14);
  cplx acc{};
  for (std::size_t k = 0; k < c.pieces.size(); ++k)
    acc += integrate_adaptive([&](double S) { return c.deriv(S) / (c.at(S) - cplx(0.3, 0.1)); }, k, k + 1.0, 1e-13);
  CHECK(std::abs(acc - kTwoPiI) < 1e-11);
  CHECK(std::abs(c.distance_to(cplx(1.0, 0.0)) - 0.4) < 1e-14);
  Contour back = Contour::from_json(c.to_json());
  CHECK(std::abs(back.at(2.7) - c.at(2.7)) < 1e-15);
  CHECK_THROWS_AS(Contour::from_json(nlohmann::json{{"sheet", 1}, {"arcs", {{{"kind", "spiral"}}}}}), InvalidInput);
}

TEST_CASE("lemniscatic and general real cubics match the AGM oracle") {
  auto lem = SpectralCurve::hyperelliptic(pc({0.0, -4.0, 0.0, 4.0}));
  auto cb = cycle_basis(lem);
  PeriodData pd = period_data(lem, cb);
  CHECK(std::abs(pd.tau - kI) < 1e-8);
  CHECK(std::abs(pd.tau - agm_tau(1.0, 0.0, -1.0)) < 1e-10);

  // 4(x+1) x (x-2)
  auto gen = SpectralCurve::hyperelliptic(pc({0.0, -8.0, -4.0, 4.0}));
  PeriodData pg = period_data(gen, cycle_basis(gen));
  CHECK(std::abs(pg.tau - agm_tau(2.0, 0.0, -1.0)) < 1e-10);
  CHECK(pg.tau.imag() > 0.0);
}

TEST_CASE("equianharmonic cubic has j = 0") {
  auto c = SpectralCurve::hyperelliptic(pc({-4.0, 0.0, 0.0, 4.0}));
  PeriodData pd = period_data(c, cycle_basis(c));
  CHECK(std::abs(elliptic::j_invariant(pd.tau)) < 1e-6);
}

TEST_CASE("quartic basis with explicit pairs") {
  auto c = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}));
  CycleOptions o;
  o.a_pair = {cplx(1, 0), cplx(-1, 0)};
  o.b_pair = {cplx(-1, 0), cplx(0, 1)};
  auto cb = cycle_basis(c, o);
  PeriodData pd = period_data(c, cb);
  CHECK(pd.tau.imag() > 0.0);
  CHECK(std::abs(elliptic::j_invariant(pd.tau) - 1728.0) < 1e-6);
  auto nodes = discretize(cb.a, c.P(), cb.rule_a);
  CHECK(std::abs(integrate(nodes, [&](cplx, cplx y) { return normalized_v(pd, y); }) - 1.0) < 1e-12);
  auto bn = discretize(cb.b, c.P(), cb.rule_b);
  CHECK(std::abs(integrate(bn, [&](cplx, cplx y) { return normalized_v(pd, y); }) - pd.tau) < 1e-12);

  // Homotopy invariance: a different corridor radius gives the same periods.
  CycleOptions o2 = o;
  o2.radius_factor = 0.33;
  PeriodData pd2 = period_data(c, cycle_basis(c, o2));
  CHECK(std::abs(pd2.tau - pd.tau) < 1e-9);

  // Rescaling P leaves tau invariant.
  auto c3 = SpectralCurve::hyperelliptic(pc({-3.0, 0.0, 0.0, 0.0, 3.0}));
  CHECK(std::abs(period_data(c3, cycle_basis(c3, o)).tau - pd.tau) < 1e-10);
}

TEST_CASE("cycle basis errors") {
  auto airy = SpectralCurve::parametric(RatFnQ{PolyQ(std::vector<Rational>{0, 0, 1}), PolyQ(std::vector<Rational>{1})},
                                        RatFnQ{PolyQ(std::vector<Rational>{0, 1}), PolyQ(std::vector<Rational>{1})});
  CHECK_THROWS_AS(cycle_basis(airy), InvalidInput);
  auto tw = TwistSection::from_coefficients(pc({-1.05, 1.0}));
  auto c = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}), tw);
  CycleOptions o;
  o.a_pair = {cplx(1, 0), cplx(-1, 0)};
  o.b_pair = {cplx(-1, 0), cplx(0, 1)};
  CHECK_THROWS_AS(cycle_basis(c, o), InvalidInput);
  CycleOptions bad = o;
  bad.b_pair = {cplx(0, 1), cplx(0, -1)};
  CHECK_THROWS_AS(cycle_basis(c.with_twist(std::nullopt), bad), InvalidInput);
}

TEST_CASE("abel map") {
  for (auto P : {pc({-1.0, 0.0, 0.0, 0.0, 1.0}), pc({0.3, -1.0, 0.2, 1.0}), pc({2.0, 1.0, -0.5, 0.3, 1.0})}) {
    auto c = SpectralCurve::hyperelliptic(P);
    auto cb = cycle_basis(c);
    PeriodData pd = period_data(c, cb);
    Uniformization U(c, pd);
    for (const auto& r : c.ramification_points()) {
      CHECK(in_lattice(2.0 * U.branch_image(r), pd.tau, 1e-10));
      // Local series agrees with the global route.
      LocalFrame f = c.ram_frame(r, 24);
      const SeriesC& ser = U.local_abel_series(r);
      for (cplx t : {cplx(0.05, 0.02), cplx(-0.03, 0.06)}) {
        cplx x = f.x.evaluate(t), y = f.y.evaluate(t);
        cplx u_loc = U.branch_image(r) + ser.evaluate(t);
        CHECK(in_lattice(u_loc - U.abel(x, y), pd.tau, 1e-10));
      }
    }
    cplx x(0.37, 0.81);
    cplx y = std::sqrt(P(x));
    cplx u = U.abel(x, y);
    CHECK(in_lattice(u + U.abel(x, -y), pd.tau, 1e-10));
    // du/dx = 1 / (omega_A y)
    cplx h(1e-4, 0.0);
    auto near = [&](cplx xx) {
      cplx yy = std::sqrt(P(xx));
      return std::abs(yy - y) > std::abs(yy + y) ? -yy : yy;
    };
    cplx du = U.reduce(U.abel(x + h, near(x + h)) - U.abel(x - h, near(x - h))) / (2.0 * h);
    CHECK(std::abs(du - normalized_v(pd, y)) < 1e-5 * std::abs(du));
    // Bergman constant is the E2 value.
    CHECK(std::abs(U.bergman_constant() - kPi * kPi / 3.0 * elliptic::eisenstein_e2(pd.tau)) < 1e-9);
  }
}

TEST_CASE("twisted canonical form and lambda") {
  auto s = pc({210.0, -247.0, 101.0, -17.0, 1.0});
  auto c = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}), TwistSection::from_coefficients(s));
  OneForm th = theta_form(c);
  REQUIRE(th.poles.size() == 8);
  const PoleRecord& pr = th.poles[0];
  cplx res = circle_residue(
      [&](cplx x) {
        cplx y = std::sqrt(c.P()(x));
        if (std::abs(y - pr.y) > std::abs(y + pr.y)) y = -y;
        return th.eval(x, y);
      },
      pr.x, 0.1, 64);
  CHECK(std::abs(res - pr.residue) < 1e-10 * std::abs(pr.residue));
  cplx y0(0.3, 0.4);
  CHECK(std::abs(th.eval(2.5, y0) - th.eval(2.5, -y0) - 2.0 * y0 / s(cplx(2.5))) < 1e-14);

  // y^2 = -t s(x): lambda scales as sqrt(t).
  auto s2 = pc({-1.0, 0.0, 0.0, 0.0, 1.0});
  auto base = SpectralCurve::hyperelliptic(s2.scaled(-1.0), TwistSection::from_coefficients(s2));
  auto cb = cycle_basis(base);
  cplx l1 = lambda_coordinate(cb, base.P(), s2);
  cplx ystart = std::sqrt(base.P()(cb.a.start())) * static_cast<double>(cb.a.sheet);
  cplx l4 = lambda_coordinate(cb, base.P().scaled(4.0), s2, 2.0 * ystart);
  CHECK(std::abs(l4 - 2.0 * l1) < 1e-10 * std::abs(l1));

  // Untwisted: lambda is the A-period of y dx.
  auto plain = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}));
  auto cbp = cycle_basis(plain);
  cplx lp = lambda_coordinates(plain, cbp)[0];
  cplx direct = integrate(discretize(cbp.a, plain.P(), cbp.rule_a), [](cplx, cplx y) { return y; });
  CHECK(std::abs(lp - direct) < 1e-14);
}
