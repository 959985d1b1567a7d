#pragma once

#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "ttr/localexp.hpp"
#include "ttr/numeric.hpp"

namespace ttr {

template <class T, class C>
T coeff_cast(const C& c) {
  if constexpr (std::is_same_v<C, Rational> && std::is_same_v<T, cplx>)
    return cplx(c.get_d(), 0.0);
  else
    return T(c);
}

// Dense univariate polynomial, coefficients lowest degree first.
template <class C>
struct Polynomial {
  std::vector<C> c;

  Polynomial() = default;
  explicit Polynomial(std::vector<C> coeffs) : c(std::move(coeffs)) { trim(); }

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c.empty(); }
  C leading() const { return c.back(); }

  template <class T>
  T operator()(const T& x) const {
    T acc = T(0);
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + coeff_cast<T>(c[i]);
    return acc;
  }

  Polynomial derivative() const {
    if (c.size() <= 1) return {};
    std::vector<C> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * C(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<C> r(std::max(a.c.size(), b.c.size()), C(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<C> r(std::max(a.c.size(), b.c.size()), C(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> r(a.c.size() + b.c.size() - 1, C(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Polynomial(std::move(r));
  }
  Polynomial scaled(const C& k) const {
    Polynomial r = *this;
    for (auto& x : r.c) x *= k;
    r.trim();
    return r;
  }

  // Quotient and remainder of division by b.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& b) const {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<C> rem = c;
    if (degree() < b.degree()) return {Polynomial{}, *this};
    std::vector<C> q(static_cast<std::size_t>(degree() - b.degree() + 1), C(0));
    for (int k = degree() - b.degree(); k >= 0; --k) {
      C f = rem[static_cast<std::size_t>(k + b.degree())] / b.leading();
      q[static_cast<std::size_t>(k)] = f;
      for (int j = 0; j <= b.degree(); ++j) rem[static_cast<std::size_t>(k + j)] -= f * b.c[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(b.degree()));
    return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
  }

  // p(a + t) as a series in t (exact Taylor shift, truncated at trunc).
  LocalSeries<C> series_at(const C& a, int trunc) const {
    std::vector<C> shifted = c;
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i)
      for (int j = n - 2; j >= i; --j)
        shifted[static_cast<std::size_t>(j)] += a * shifted[static_cast<std::size_t>(j + 1)];
    return LocalSeries<C>(0, std::move(shifted), trunc);
  }

  // p(g(t)) for a series g.
  LocalSeries<C> compose(const LocalSeries<C>& g) const {
    if (c.empty()) return LocalSeries<C>::zero(g.truncation_order());
    int trunc = g.truncation_order() + 64 * std::max(1, degree());
    LocalSeries<C> acc = LocalSeries<C>::constant(c.back(), trunc);
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * g + LocalSeries<C>::constant(c[i], trunc);
    return acc;
  }

  void trim() {
    while (!c.empty() && CoeffTraits<C>::is_zero(c.back())) c.pop_back();
  }
};

using PolyC = Polynomial<cplx>;
using PolyQ = Polynomial<Rational>;

PolyC to_complex(const PolyQ& p);

template <class C>
struct RationalFunction {
  Polynomial<C> num;
  Polynomial<C> den{std::vector<C>{C(1)}};

  template <class T>
  T operator()(const T& x) const {
    return num(x) / den(x);
  }
  // Numerator of the derivative: num' den - num den' (over den^2).
  Polynomial<C> derivative_numerator() const { return num.derivative() * den - num * den.derivative(); }
  LocalSeries<C> series_at(const C& a, int trunc) const {
    int extra = std::max(0, den.degree()) + 2;
    return num.series_at(a, trunc + extra) / den.series_at(a, trunc + extra);
  }
  bool is_constant() const { return num.degree() <= 0 && den.degree() <= 0; }
};

using RatFnC = RationalFunction<cplx>;
using RatFnQ = RationalFunction<Rational>;

RatFnC to_complex(const RatFnQ& f);

struct RootInfo {
  cplx value;
  bool repeated = false;
};

// Companion-matrix eigenvalues followed by one Newton polish; roots within
// 1e-9 of each other (or with a vanishing derivative) are flagged repeated.
std::vector<RootInfo> polynomial_roots(const PolyC& p);
std::vector<cplx> simple_roots(const PolyC& p);  // throws InvalidInput on repeated roots

// Exact rational roots (with multiplicity) found by rationalizing numerical
// roots and verifying them exactly.
std::vector<std::pair<Rational, int>> rational_roots(const PolyQ& p);

// Best rational approximation with bounded denominator (continued fractions).
Rational rationalize(double x, long max_den = 1000000);

}  // namespace ttr
