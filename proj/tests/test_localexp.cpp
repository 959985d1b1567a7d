#include <doctest.h>

#include <random>

#include "ttr/localexp.hpp"
#include "ttr/polynomial.hpp"

using namespace ttr;

namespace {

SeriesQ q_series(int lo, std::vector<long> c, int trunc) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return SeriesQ(lo, v, trunc);
}

SeriesC random_unit(std::mt19937& rng, int trunc) {
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<cplx> c(static_cast<std::size_t>(trunc + 1));
  for (auto& x : c) x = cplx(d(rng), d(rng));
  c[0] = cplx(1 + std::abs(d(rng)), d(rng));
  return SeriesC(0, c, trunc);
}

}  // namespace

TEST_CASE("arithmetic examples") {
  SeriesQ a = q_series(-1, {1, 1}, 5);
  SeriesQ b = q_series(1, {1}, 8);
  SeriesQ p = a * b;
  CHECK(p.lowest_order() == 0);
  CHECK(p.coeff(0) == 1);
  CHECK(p.coeff(1) == 1);
  CHECK(p.coeff(2) == 0);

  SeriesQ one_minus_t = q_series(0, {1, -1}, 10);
  SeriesQ geo = SeriesQ::constant(Rational(1), 10) / one_minus_t;
  for (int k = 0; k <= 10; ++k) CHECK(geo.coeff(k) == 1);
  CHECK(geo.truncation_order() == 10);

  SeriesQ shifted = SeriesQ::monomial(Rational(1), -2, 10) / one_minus_t;
  CHECK(shifted.lowest_order() == -2);
  for (int k = -2; k <= 8; ++k) CHECK(shifted.coeff(k) == 1);
  CHECK(shifted.truncation_order() == 8);
  CHECK_THROWS_AS(shifted.coeff(9), TruncationError);

  CHECK_THROWS_AS(geo / SeriesQ::zero(5), DomainError);
}

TEST_CASE("truncation is the minimum over inputs") {
  SeriesQ a = q_series(0, {1, 2, 3}, 4);
  SeriesQ b = q_series(0, {1, 1}, 9);
  CHECK((a + b).truncation_order() == 4);
  CHECK((a * b).truncation_order() == 4);
  SeriesQ c = q_series(2, {1}, 9);
  CHECK((a * c).truncation_order() == 6);
}

TEST_CASE("composition examples") {
  SeriesQ f = q_series(2, {1}, 12);
  SeriesQ g = q_series(1, {1, 1}, 12);
  SeriesQ h = f.compose(g);
  CHECK(h.coeff(2) == 1);
  CHECK(h.coeff(3) == 2);
  CHECK(h.coeff(4) == 1);
  CHECK(h.coeff(5) == 0);

  SeriesQ inv = SeriesQ::monomial(Rational(1), -1, 8).compose(g);
  CHECK(inv.lowest_order() == -1);
  for (int k = -1; k <= 5; ++k) CHECK(inv.coeff(k) == ((k + 1) % 2 == 0 ? 1 : -1));

  SeriesQ one_plus_t = q_series(0, {1, 1}, 1);
  SeriesQ c = one_plus_t.compose(SeriesQ::zero(0));
  CHECK(c.coeff(0) == 1);
  CHECK(c.truncation_order() == 0);

  SeriesQ pole = SeriesQ::monomial(Rational(1), -1, 4);
  CHECK_THROWS_AS(pole.compose(q_series(0, {2, 1}, 4)), DomainError);
}

TEST_CASE("functional inverse examples") {
  SeriesQ t = SeriesQ::variable(10);
  SeriesQ it = t.reversion();
  CHECK(max_abs_diff(it, t) == 0.0);

  SeriesQ f = q_series(1, {1, 1}, 10);
  SeriesQ g = f.reversion();
  // t - t^2 + 2t^3 - 5t^4 (Catalan numbers with alternating sign).
  CHECK(g.coeff(1) == 1);
  CHECK(g.coeff(2) == -1);
  CHECK(g.coeff(3) == 2);
  CHECK(g.coeff(4) == -5);

  SeriesQ two_t = q_series(1, {2}, 6);
  CHECK(two_t.reversion().coeff(1) == Rational(1, 2));
  CHECK_THROWS_AS(q_series(2, {1}, 6).reversion(), DomainError);
}

TEST_CASE("square root examples") {
  SeriesQ f = q_series(0, {1, 2}, 6);
  SeriesQ s = f.sqrt(+1);
  CHECK(s.coeff(0) == 1);
  CHECK(s.coeff(1) == 1);
  CHECK(s.coeff(2) == Rational(-1, 2));
  CHECK(max_abs_diff(s * s, f) == 0.0);

  CHECK(q_series(2, {1}, 6).sqrt(+1).coeff(1) == 1);
  CHECK(q_series(0, {4}, 6).sqrt(+1).coeff(0) == 2);
  CHECK(q_series(0, {4}, 6).sqrt(-1).coeff(0) == -2);
  CHECK_THROWS_AS(q_series(1, {1}, 6).sqrt(+1), DomainError);
}

TEST_CASE("residue examples") {
  CHECK(q_series(-1, {1, 3, 1}, 1).residue() == 1);
  CHECK(q_series(-2, {1}, 4).residue() == 0);
  SeriesQ e = SeriesQ::monomial(Rational(1), -2, 6) / q_series(0, {1, -1}, 8);
  CHECK(e.residue() == 1);
  CHECK_THROWS_AS(q_series(-4, {1}, -3).residue(), TruncationError);
}

TEST_CASE("property: add then subtract round-trips") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    SeriesC a = random_unit(rng, 12).shifted(rep % 5 - 2);
    SeriesC b = random_unit(rng, 12).shifted(rep % 3 - 1);
    SeriesC back = (a + b) - b;
    CHECK(max_abs_diff(back, a) < 1e-12);
  }
}

TEST_CASE("property: inverse composes to the identity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<cplx> c(14);
    for (auto& x : c) x = cplx(d(rng), d(rng));
    c[0] = cplx(1.0 + d(rng), d(rng));
    SeriesC f(1, c, 14);
    SeriesC g = f.reversion();
    SeriesC t = SeriesC::variable(14);
    double scale = 1.0;
    for (const auto& x : g.coeffs()) scale = std::max(scale, std::abs(x));
    CHECK(max_abs_diff(g.compose(f), t) < 1e-12 * scale);
    CHECK(max_abs_diff(f.compose(g), t) < 1e-12 * scale);
  }
}

TEST_CASE("property: residue of df/f is the valuation") {
  std::mt19937 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    int v = rep % 7 - 3;
    SeriesC f = random_unit(rng, 16).shifted(v);
    cplx r = (f.derivative() / f).residue();
    CHECK(std::abs(r - cplx(v)) < 1e-12);
  }
}

TEST_CASE("property: exact and floating backends agree") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<long> ca(10), cb(10);
    for (auto& x : ca) x = d(rng);
    for (auto& x : cb) x = d(rng);
    ca[0] = 1 + std::abs(ca[0]);
    cb[0] = -1 - std::abs(cb[0]);
    SeriesQ qa = q_series(-1, ca, 8), qb = q_series(0, cb, 8);
    SeriesC fa = to_complex_series(qa), fb = to_complex_series(qb);
    CHECK(max_abs_diff(to_complex_series(qa * qb), fa * fb) < 1e-12);
    CHECK(max_abs_diff(to_complex_series(qa / qb), fa / fb) < 1e-12);
    SeriesQ sq = (qa.shifted(1) * qa.shifted(1));
    CHECK(max_abs_diff(to_complex_series(sq.sqrt(+1)), to_complex_series(sq).sqrt(+1)) < 1e-12);
  }
}

TEST_CASE("floating normalization strips round-off leading terms") {
  SeriesC s(0, {cplx(1e-17), cplx(2.0), cplx(1.0)}, 4);
  CHECK(s.lowest_order() == 1);
}

TEST_CASE("polynomial taylor shift and roots") {
  PolyQ p(std::vector<Rational>{Rational(-1), Rational(0), Rational(0), Rational(0), Rational(1)});
  SeriesQ s = p.series_at(Rational(1), 6);
  CHECK(s.coeff(1) == 4);
  CHECK(s.coeff(2) == 6);
  CHECK(s.coeff(4) == 1);
  auto roots = simple_roots(to_complex(p));
  REQUIRE(roots.size() == 4);
  for (auto r : roots) CHECK(std::abs(std::pow(r, 4) - 1.0) < 1e-13);
  PolyC rep(std::vector<cplx>{1.0, -2.0, 2.0, -2.0, 1.0});  // (x-1)^2 (x^2+1)
  CHECK_THROWS_AS(simple_roots(rep), InvalidInput);
  auto rr = rational_roots(PolyQ(std::vector<Rational>{Rational(-6), Rational(1), Rational(1)}));
  REQUIRE(rr.size() == 2);
  CHECK(rr[0].first == -3);
  CHECK(rr[1].first == 2);
}
