#pragma once

// Truncated Laurent series c_lo t^lo + ... + c_N t^N + O(t^(N+1)).
// Two coefficient backends share the template: exact rationals and complex doubles.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ttr/numeric.hpp"

namespace ttr {

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<cplx> {
  static constexpr bool exact = false;
  static cplx zero() { return {0.0, 0.0}; }
  static cplx one() { return {1.0, 0.0}; }
  static cplx from_int(long n) { return {static_cast<double>(n), 0.0}; }
  static double magnitude(const cplx& c) { return std::abs(c); }
  static bool is_zero(const cplx& c) { return c == cplx{}; }
  static cplx sqrt(const cplx& c) { return std::sqrt(c); }
};

template <>
struct CoeffTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long n) { return Rational(n); }
  static double magnitude(const Rational& c) { return std::abs(c.get_d()); }
  static bool is_zero(const Rational& c) { return sgn(c) == 0; }
  static Rational sqrt(const Rational& c) {
    if (sgn(c) < 0) throw DomainError("rational square root of a negative number");
    if (!mpz_perfect_square_p(c.get_num_mpz_t()) || !mpz_perfect_square_p(c.get_den_mpz_t()))
      throw DomainError("leading coefficient is not a rational square");
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), c.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), c.get_den_mpz_t());
    return Rational(n, d);
  }
};

// Leading coefficients below this fraction of the largest coefficient are
// treated as round-off and stripped (floating backend only).
inline constexpr double kSeriesZeroThreshold = 1e-13;

template <class C>
class LocalSeries {
 public:
  using Traits = CoeffTraits<C>;

  // Identically zero, known up to t^0.
  LocalSeries() : lo_(1), trunc_(0) {}

  // Coefficients from t^lowest; truncation order is lowest + size - 1.
  LocalSeries(int lowest, std::vector<C> coeffs)
      : lo_(lowest), trunc_(lowest + static_cast<int>(coeffs.size()) - 1), c_(std::move(coeffs)) {
    normalize();
  }

  // Explicit truncation order; missing coefficients up to trunc are zero.
  LocalSeries(int lowest, std::vector<C> coeffs, int trunc) : lo_(lowest), trunc_(trunc), c_(std::move(coeffs)) {
    int want = trunc - lowest + 1;
    if (want < 0) want = 0;
    c_.resize(static_cast<std::size_t>(want), Traits::zero());
    normalize();
  }

  static LocalSeries zero(int trunc) {
    LocalSeries s;
    s.lo_ = trunc + 1;
    s.trunc_ = trunc;
    return s;
  }
  static LocalSeries monomial(const C& c, int order, int trunc) {
    if (trunc < order) return zero(trunc);
    return LocalSeries(order, std::vector<C>{c}, trunc);
  }
  static LocalSeries constant(const C& c, int trunc) { return monomial(c, 0, trunc); }
  static LocalSeries variable(int trunc) { return monomial(Traits::one(), 1, trunc); }

  int lowest_order() const { return lo_; }
  int truncation_order() const { return trunc_; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<C>& coeffs() const { return c_; }

  // Coefficient of t^k; zero below the lowest order.
  C coeff(int k) const {
    if (k > trunc_) throw TruncationError("coefficient t^" + std::to_string(k) + " beyond truncation order " +
                                          std::to_string(trunc_));
    if (k < lo_) return Traits::zero();
    return c_[static_cast<std::size_t>(k - lo_)];
  }

  LocalSeries truncated(int new_trunc) const {
    if (new_trunc >= trunc_) return *this;
    if (new_trunc < lo_) return zero(new_trunc);
    return LocalSeries(lo_, std::vector<C>(c_.begin(), c_.begin() + (new_trunc - lo_ + 1)), new_trunc);
  }

  LocalSeries operator-() const {
    LocalSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend LocalSeries operator+(const LocalSeries& a, const LocalSeries& b) { return a.combine(b, false); }
  friend LocalSeries operator-(const LocalSeries& a, const LocalSeries& b) { return a.combine(b, true); }

  friend LocalSeries operator*(const LocalSeries& a, const LocalSeries& b) {
    int trunc = std::min(a.lo_ + b.trunc_, b.lo_ + a.trunc_);
    if (a.is_zero() || b.is_zero()) return zero(trunc);
    int lo = a.lo_ + b.lo_;
    if (trunc < lo) return zero(trunc);
    std::vector<C> out(static_cast<std::size_t>(trunc - lo + 1), Traits::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (Traits::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size() && i + j < out.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return LocalSeries(lo, std::move(out), trunc);
  }

  friend LocalSeries operator/(const LocalSeries& a, const LocalSeries& b) { return a * b.reciprocal(); }

  LocalSeries scaled(const C& k) const {
    LocalSeries r = *this;
    for (auto& x : r.c_) x *= k;
    r.normalize();
    return r;
  }

  // Multiplication by t^k.
  LocalSeries shifted(int k) const {
    LocalSeries r = *this;
    r.lo_ += k;
    r.trunc_ += k;
    return r;
  }

  LocalSeries reciprocal() const {
    if (is_zero()) throw DomainError("division by an identically zero series");
    const int n = trunc_ - lo_;
    std::vector<C> b(static_cast<std::size_t>(n + 1), Traits::zero());
    const C inv0 = Traits::one() / c_[0];
    b[0] = inv0;
    for (int k = 1; k <= n; ++k) {
      C acc = Traits::zero();
      for (int i = 1; i <= k; ++i) acc += c_[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
      b[static_cast<std::size_t>(k)] = -acc * inv0;
    }
    return LocalSeries(-lo_, std::move(b), -lo_ + n);
  }

  LocalSeries pow(int n) const {
    if (n < 0) return reciprocal().pow(-n);
    if (n == 0) {
      int rel = is_zero() ? trunc_ : trunc_ - lo_;
      return constant(Traits::one(), std::max(rel, 0));
    }
    LocalSeries base = *this, acc;
    bool have = false;
    while (n > 0) {
      if (n & 1) {
        acc = have ? acc * base : base;
        have = true;
      }
      n >>= 1;
      if (n) base = base * base;
    }
    return acc;
  }

  LocalSeries derivative() const {
    if (is_zero()) return zero(trunc_ - 1);
    std::vector<C> out(c_.size(), Traits::zero());
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] * Traits::from_int(lo_ + static_cast<int>(i));
    return LocalSeries(lo_ - 1, std::move(out), trunc_ - 1);
  }

  // Termwise antiderivative with zero constant; a t^-1 term has no Laurent primitive.
  LocalSeries antiderivative() const {
    if (is_zero()) return zero(trunc_ + 1);
    if (lo_ <= -1 && -1 <= trunc_) {
      const C& r = c_[static_cast<std::size_t>(-1 - lo_)];
      if (!negligible(r)) throw DomainError("antiderivative of a series with a t^-1 term");
    }
    std::vector<C> out(c_.size() + 1, Traits::zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
      int k = lo_ + static_cast<int>(i);
      if (k == -1) continue;
      out[i + 1] = c_[i] / Traits::from_int(k + 1);
    }
    return LocalSeries(lo_, std::move(out), trunc_ + 1);
  }

  // f(g(t)). When g has a constant term, f is read as the polynomial of its stored coefficients.
  LocalSeries compose(const LocalSeries& g) const {
    const bool f_has_poles = !is_zero() && lo_ < 0;
    const int vg = g.is_zero() ? g.trunc_ + 1 : g.lo_;
    if (vg < 0) throw DomainError("composition with a series that has poles");
    if (vg == 0 && f_has_poles) throw DomainError("composition with constant-led g into a series with poles");
    int bound = vg >= 1 ? (trunc_ + 1) * vg - 1 : std::numeric_limits<int>::max();
    if (is_zero()) return zero(std::min(bound, std::max(g.trunc_, 0)));
    if (g.is_zero()) {
      C c0 = (lo_ <= 0) ? coeff(0) : Traits::zero();
      if (f_has_poles) throw DomainError("composition of a pole series with an identically zero series");
      return constant(c0, std::min(bound, g.trunc_));
    }
    // Horner on the regular part F, with f = t^lo * F(t).
    const int top = trunc_ - lo_;
    LocalSeries acc = constant(c_[static_cast<std::size_t>(top)], g.trunc_ - g.lo_ + std::max(0, vg) * top + 64);
    for (int k = top - 1; k >= 0; --k) acc = acc * g + constant(c_[static_cast<std::size_t>(k)], acc.trunc_ + 64);
    if (lo_ != 0) acc = acc * g.pow(lo_);
    if (bound < acc.trunc_) acc = acc.truncated(bound);
    return acc;
  }

  // Functional inverse g with f(g(t)) = t.
  LocalSeries reversion() const {
    if (is_zero() || lo_ != 1) throw DomainError("functional inverse needs a series starting at order 1");
    const C f1 = c_[0];
    if (negligible(f1)) throw DomainError("vanishing linear coefficient");
    const int n = trunc_;
    std::vector<C> gc(static_cast<std::size_t>(n), Traits::zero());
    gc[0] = Traits::one() / f1;
    for (int k = 2; k <= n; ++k) {
      LocalSeries g(1, std::vector<C>(gc.begin(), gc.begin() + (k - 1)), k);
      C e = compose(g).coeff(k);
      gc[static_cast<std::size_t>(k - 1)] = -e / f1;
    }
    return LocalSeries(1, std::move(gc), n);
  }

  // Square root; branch = +1 picks the principal (rational: positive) leading root.
  LocalSeries sqrt(int branch = +1) const {
    if (is_zero()) return zero(trunc_ >= 0 ? trunc_ / 2 : -((-trunc_ + 1) / 2));
    if (lo_ % 2 != 0) throw DomainError("square root of a series with odd lowest order");
    const int n = trunc_ - lo_;
    std::vector<C> s(static_cast<std::size_t>(n + 1), Traits::zero());
    s[0] = Traits::sqrt(c_[0]);
    if (branch < 0) s[0] = -s[0];
    const C two_s0 = s[0] + s[0];
    for (int k = 1; k <= n; ++k) {
      C acc = c_[static_cast<std::size_t>(k)];
      for (int i = 1; i < k; ++i) acc -= s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(k - i)];
      s[static_cast<std::size_t>(k)] = acc / two_s0;
    }
    return LocalSeries(lo_ / 2, std::move(s), lo_ / 2 + n);
  }

  C residue() const {
    if (trunc_ < -1) throw TruncationError("truncation window does not include order -1");
    return coeff(-1);
  }

  // Sum of the stored terms at t (floating backend).
  cplx evaluate(cplx t) const {
    cplx acc{};
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + to_complex(c_[i]);
    return acc * std::pow(t, lo_);
  }

  // Largest coefficient difference over the shared window.
  friend double max_abs_diff(const LocalSeries& a, const LocalSeries& b) {
    int top = std::min(a.trunc_, b.trunc_);
    int bot = std::min(a.lo_, b.lo_);
    double m = 0.0;
    for (int k = bot; k <= top; ++k) m = std::max(m, Traits::magnitude(a.coeff(k) - b.coeff(k)));
    return m;
  }

 private:
  int lo_;
  int trunc_;
  std::vector<C> c_;

  static cplx to_complex(const cplx& c) { return c; }
  static cplx to_complex(const Rational& c) { return {c.get_d(), 0.0}; }
  template <class T>
  static cplx to_complex(const T&) {
    throw DomainError("series coefficients are not numeric");
  }

  bool negligible(const C& c) const {
    if constexpr (Traits::exact) {
      return Traits::is_zero(c);
    } else {
      double scale = 0.0;
      for (const auto& x : c_) scale = std::max(scale, Traits::magnitude(x));
      return Traits::magnitude(c) <= kSeriesZeroThreshold * scale;
    }
  }

  LocalSeries combine(const LocalSeries& b, bool subtract) const {
    int trunc = std::min(trunc_, b.trunc_);
    int lo = std::min(lo_, b.lo_);
    if (trunc < lo) return zero(trunc);
    std::vector<C> out(static_cast<std::size_t>(trunc - lo + 1), Traits::zero());
    for (int k = lo; k <= trunc; ++k) {
      auto& o = out[static_cast<std::size_t>(k - lo)];
      if (k >= lo_ && k - lo_ < static_cast<int>(c_.size())) o = c_[static_cast<std::size_t>(k - lo_)];
      if (k >= b.lo_ && k - b.lo_ < static_cast<int>(b.c_.size())) {
        if (subtract)
          o -= b.c_[static_cast<std::size_t>(k - b.lo_)];
        else
          o += b.c_[static_cast<std::size_t>(k - b.lo_)];
      }
    }
    return LocalSeries(lo, std::move(out), trunc);
  }

  void normalize() {
    if constexpr (Traits::exact) {
      std::size_t k = 0;
      while (k < c_.size() && Traits::is_zero(c_[k])) ++k;
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
      lo_ += static_cast<int>(k);
    } else {
      double scale = 0.0;
      for (const auto& x : c_) scale = std::max(scale, Traits::magnitude(x));
      std::size_t k = 0;
      while (k < c_.size() && Traits::magnitude(c_[k]) <= kSeriesZeroThreshold * scale) ++k;
      if (scale == 0.0) k = c_.size();
      c_.erase(c_.begin(), c_.begin() + static_cast<long>(k));
      lo_ += static_cast<int>(k);
    }
    if (c_.empty()) lo_ = trunc_ + 1;
  }
};

using SeriesC = LocalSeries<cplx>;
using SeriesQ = LocalSeries<Rational>;

// Rational series lifted into the floating backend.
inline SeriesC to_complex_series(const SeriesQ& s) {
  std::vector<cplx> c;
  c.reserve(s.coeffs().size());
  for (const auto& q : s.coeffs()) c.emplace_back(q.get_d(), 0.0);
  return SeriesC(s.lowest_order(), std::move(c), s.truncation_order());
}

}  // namespace ttr
