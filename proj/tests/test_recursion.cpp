#include <doctest.h>

#include <functional>
#include <map>
#include <random>

#include "ttr/recursion.hpp"

using namespace ttr;

namespace {

PolyQ pq(std::vector<Rational> c) { return PolyQ(std::move(c)); }
PolyC pc(std::vector<cplx> c) { return PolyC(std::move(c)); }

SpectralCurve airy(std::optional<TwistSection> tw = {}) {
  return SpectralCurve::parametric(RatFnQ{pq({0, 0, 1}), pq({1})}, RatFnQ{pq({0, 1}), pq({1})}, tw);
}
// x = z + 1/z, y = z: ramification at z = 1 and z = -1.
SpectralCurve joukowski() {
  return SpectralCurve::parametric(RatFnQ{pq({1, 0, 1}), pq({0, 1})}, RatFnQ{pq({0, 1}), pq({1})});
}
// x = z^2 + z^3, y = z: ramification at z = 0 and z = -2/3.
SpectralCurve cubic_x() {
  return SpectralCurve::parametric(RatFnQ{pq({0, 0, 1, 1}), pq({1})}, RatFnQ{pq({0, 1}), pq({1})});
}

Rational dfact(int k) {  // (2k+1)!!, with (-1)!! = 1
  Rational r(1);
  for (int j = 2 * k + 1; j > 1; j -= 2) r *= j;
  return r;
}

// Witten-Kontsevich intersection numbers by the DVV recursion.
struct Intersections {
  std::map<std::pair<int, std::vector<int>>, Rational> memo;
  Rational operator()(int g, std::vector<int> k) {
    if (g < 0) return 0;
    for (int d : k)
      if (d < 0) return 0;
    int sum = 0;
    for (int d : k) sum += d;
    const int n = static_cast<int>(k.size());
    if (n == 0 || sum != 3 * g - 3 + n) return 0;
    std::sort(k.begin(), k.end(), std::greater<>());
    if (g == 0 && n == 3) return 1;
    if (g == 1 && n == 1) return Rational(1, 24);
    auto key = std::make_pair(g, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int k1 = k[0];
    std::vector<int> S(k.begin() + 1, k.end());
    Rational acc(0);
    for (std::size_t j = 0; j < S.size(); ++j) {
      std::vector<int> t = S;
      t[j] = k1 + S[j] - 1;
      acc += dfact(k1 + S[j] - 1) / dfact(S[j] - 1) * (*this)(g, t);
    }
    for (int r = 0; r <= k1 - 2; ++r) {
      const int s = k1 - 2 - r;
      Rational w = dfact(r) * dfact(s) / 2;
      std::vector<int> t{r, s};
      t.insert(t.end(), S.begin(), S.end());
      Rational inner = (*this)(g - 1, t);
      const int m = static_cast<int>(S.size());
      for (int g1 = 0; g1 <= g; ++g1)
        for (int mask = 0; mask < (1 << m); ++mask) {
          std::vector<int> a{r}, b{s};
          for (int j = 0; j < m; ++j) (mask & (1 << j) ? a : b).push_back(S[static_cast<std::size_t>(j)]);
          inner += (*this)(g1, a) * (*this)(g - g1, b);
        }
      acc += w * inner;
    }
    acc /= dfact(k1);
    memo.emplace(key, acc);
    return acc;
  }
};

// Engine-normalized Airy W(g, n): (-1)^(2g-2+n) sum <tau_d> prod (2d+1)!! z^-(2d+2).
ExactExpr airy_oracle(int g, int n) {
  Intersections I;
  ExactExpr e(n);
  const Rational sign = ((2 * g - 2 + n) % 2 == 0) ? Rational(1) : Rational(-1);
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& d, int left) {
    if (static_cast<int>(d.size()) == n) {
      if (left != 0) return;
      Rational c = sign * I(g, d);
      MonoKey k;
      for (int di : d) {
        c *= dfact(di);
        k.push_back(SlotFactor{0, -(2 * di + 2)});
      }
      e.add(k, c);
      return;
    }
    for (int di = 0; di <= left; ++di) {
      d.push_back(di);
      rec(d, left - di);
      d.pop_back();
    }
  };
  std::vector<int> d;
  rec(d, 3 * g - 3 + n);
  return e;
}

const std::vector<std::pair<int, int>> kAiryCases{{0, 3}, {1, 1}, {0, 4}, {1, 2}, {2, 1}};

}  // namespace

TEST_CASE("intersection-number oracle sanity") {
  Intersections I;
  CHECK(I(0, {0, 0, 0, 1}) == 1);
  CHECK(I(1, {1, 1}) == Rational(1, 24));
  CHECK(I(2, {4}) == Rational(1, 1152));
  CHECK(I(0, {0, 0, 0, 0, 2}) == 1);
}

TEST_CASE("airy exact values") {
  ExactRecursion R(airy());
  CHECK(R.serialize(R.w(0, 3)) == "-1 * z0^-2 * z1^-2 * z2^-2 * dz0dz1dz2");
  CHECK(R.serialize(R.w(1, 1)) == "-1/8 * z0^-4 * dz0");
  CHECK(R.w(0, 3).evaluate_exact({1, 2, 3}, R.ram_locations()) == Rational(-1, 36));
  CHECK(R.w(1, 1).evaluate_exact({1}, R.ram_locations()) == Rational(-1, 8));
  for (auto [g, n] : kAiryCases) {
    CAPTURE(g);
    CAPTURE(n);
    CHECK(R.w(g, n) == airy_oracle(g, n));
  }
  CHECK(R.w03_direct() == R.w(0, 3));
}

TEST_CASE("airy properties") {
  ExactRecursion R(airy());
  for (auto [g, n] : kAiryCases) {
    PropertyReport rep = check_properties(R, g, n);
    CAPTURE(rep.to_json().dump());
    CHECK(rep.symmetry_defect == 0.0);
    CHECK(rep.oddness_defect == 0.0);
    CHECK(rep.poles_only_at_ramification);
    CHECK(rep.residue_free_at_infinity);
    CHECK(rep.max_pole_order <= rep.pole_bound);
    CHECK(rep.pass());
    // Airy sigma is global: W(-z0, ...) = -W(z0, ...) identically.
    for (const auto& [k, c] : R.w(g, n).terms()) CHECK(k[0].exp % 2 == 0);
  }
}

TEST_CASE("w03 residue formula on curves with several ramification points") {
  for (const SpectralCurve& c : {joukowski(), cubic_x()}) {
    ExactRecursion R(c);
    CHECK(R.ram_locations().size() == 2);
    CHECK(R.w03_direct() == R.w(0, 3));
    for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {0, 4}, {1, 2}}) {
      PropertyReport rep = check_properties(R, g, n);
      CAPTURE(rep.to_json().dump());
      CHECK(rep.pass());
      CHECK(rep.symmetry_defect == 0.0);
    }
  }
}

TEST_CASE("negative control: keeping the (0, empty) terms changes W") {
  RecursionOptions o;
  o.include_unstable_terms = true;
  ExactRecursion bad(airy(), o), good(airy());
  CHECK_FALSE(bad.w(0, 3) == good.w(0, 3));
  CHECK_FALSE(bad.w(1, 1) == good.w(1, 1));
}

TEST_CASE("fixed base point halves each recursion step") {
  RecursionOptions o;
  o.kernel.base_point = cplx(0.0);
  ExactRecursion alpha(airy(), o), sigma(airy());
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {0, 4}, {1, 2}}) {
    Rational f(1);
    for (int i = 0; i < 2 * g - 2 + n; ++i) f /= 2;
    CHECK(alpha.w(g, n) == sigma.w(g, n).scaled(f));
  }
  RecursionOptions off;
  off.kernel.base_point = cplx(0.5);
  ExactRecursion elsewhere(airy(), off);
  CHECK_THROWS_AS(elsewhere.w(0, 3), InvalidInput);
}

TEST_CASE("constant twist rescales stable W by c^(2g-2+n)") {
  const Rational c(3);
  auto tw = TwistSection::from_rational(pq({c}));
  RecursionOptions o;
  o.kernel.variant = Variant::Twisted;
  ExactRecursion T(airy(tw), o), O(airy());
  for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {0, 4}, {1, 2}}) {
    Rational f(1);
    for (int i = 0; i < constant_twist_exponent(g, n); ++i) f *= c;
    CHECK(T.w(g, n) == O.w(g, n).scaled(f));
  }
}

TEST_CASE("twisted and global variants agree with their residue formulas") {
  auto tw = TwistSection::from_rational(pq({1, 1}));  // s = x + 1
  RecursionOptions o;
  o.kernel.variant = Variant::Twisted;
  for (const SpectralCurve& base : {airy(), joukowski()}) {
    ExactRecursion T(base.with_twist(tw), o);
    CHECK(T.w03_direct() == T.w(0, 3));
    CHECK(check_properties(T, 0, 4).pass());
  }
  RecursionOptions h;
  h.kernel.variant = Variant::HitchinGlobal;
  h.kernel.w01_multiplier = [](cplx x) { return x + 5.0; };
  h.multiplier_exact = pq({5, 1});
  ExactRecursion H(joukowski(), h);
  CHECK(H.w03_direct() == H.w(0, 3));
  h.multiplier_exact = pq({2, 1});  // vanishes at x(-1) = -2
  CHECK_THROWS_AS(ExactRecursion(joukowski(), h).w(0, 3), InvalidInput);
  // Default multiplier: identical to the ordinary recursion.
  RecursionOptions h1;
  h1.kernel.variant = Variant::HitchinGlobal;
  ExactRecursion H1(joukowski(), h1), O(joukowski());
  CHECK(H1.w(1, 2) == O.w(1, 2));
}

TEST_CASE("evaluable mode matches exact mode on genus 0") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (const SpectralCurve& c : {airy(), joukowski()}) {
    ExactRecursion E(c);
    NumericRecursion N(make_geometry(c));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<cplx> z;
      for (int i = 0; i < 3; ++i) {
        cplx v;
        do v = cplx(U(rng), U(rng));
        while (std::abs(v - 1.0) < 0.3 || std::abs(v + 1.0) < 0.3 || std::abs(v) < 0.3);
        z.push_back(v);
      }
      std::vector<CurvePoint> p;
      for (cplx v : z) p.push_back(c.point(v));
      cplx ex = E.evaluate(0, z), nu = N.w(0, p);
      CHECK(std::abs(ex - nu) < 1e-10 * std::abs(ex));
      cplx ex1 = E.evaluate(1, {z[0]}), nu1 = N.w(1, {p[0]});
      CHECK(std::abs(ex1 - nu1) < 1e-10 * std::abs(ex1));
      CHECK(std::abs(N.w03_direct(p) - ex) < 1e-10 * std::abs(ex));
    }
  }
}

TEST_CASE("numeric property report on genus 0") {
  auto c = cubic_x();
  NumericRecursion N(make_geometry(c));
  std::vector<std::vector<CurvePoint>> samples{{c.point(cplx(0.9, 0.5)), c.point(cplx(-1.2, 0.7)), c.point(cplx(0.4, -1.1))}};
  PropertyReport rep = check_properties(N, 0, samples);
  CAPTURE(rep.to_json().dump());
  CHECK(rep.symmetry_defect < 1e-9);
  CHECK(rep.oddness_defect < 1e-8);
  CHECK(rep.max_pole_order <= rep.pole_bound);
}

TEST_CASE("genus-1 recursion matches the residue formula") {
  auto quartic = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}));
  auto cubic = SpectralCurve::hyperelliptic(pc({0.0, -1.0, 0.0, 1.0}));
  for (const SpectralCurve& c : {quartic, cubic}) {
    NumericRecursion N(make_geometry(c));
    auto at = [&](cplx x, int sheet) { return CurvePoint{x, double(sheet) * std::sqrt(c.P()(x)), {}}; };
    std::vector<CurvePoint> p{at(cplx(0.3, 1.4), 1), at(cplx(-1.6, 0.2), -1), at(cplx(1.1, -1.3), 1)};
    cplx rec = N.w(0, p), dir = N.w03_direct(p);
    CHECK(std::abs(rec - dir) < 1e-8 * std::abs(dir));
    // Oddness under the global involution and symmetry.
    std::vector<CurvePoint> sw{p[1], p[0], p[2]};
    CHECK(std::abs(N.w(0, sw) - rec) < 1e-9 * std::abs(rec));
    PropertyReport rep = check_properties(N, 1, {{p[0]}});
    CAPTURE(rep.to_json().dump());
    CHECK(rep.oddness_defect < 1e-9);
  }
}

TEST_CASE("genus-1 constant twist scaling") {
  auto base = SpectralCurve::hyperelliptic(pc({-1.0, 0.0, 0.0, 0.0, 1.0}));
  auto c = base.with_twist(TwistSection::from_coefficients(pc({2.5})));
  RecursionOptions o;
  o.kernel.variant = Variant::Twisted;
  NumericRecursion T(make_geometry(c), o), O(make_geometry(base));
  auto at = [&](cplx x, int sheet) { return CurvePoint{x, double(sheet) * std::sqrt(base.P()(x)), {}}; };
  std::vector<CurvePoint> p{at(cplx(0.3, 1.4), 1), at(cplx(-1.6, 0.2), -1), at(cplx(1.1, -1.3), 1)};
  CHECK(std::abs(T.w(0, p) - 2.5 * O.w(0, p)) < 1e-9 * std::abs(O.w(0, p)));
  CHECK(std::abs(T.w(1, {p[0]}) - 2.5 * O.w(1, {p[0]})) < 1e-9 * std::abs(O.w(1, {p[0]})));
  CHECK(std::abs(T.w03_direct(p) - 2.5 * O.w03_direct(p)) < 1e-9 * std::abs(O.w03_direct(p)));
}
