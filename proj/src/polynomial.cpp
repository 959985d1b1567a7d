#include "ttr/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>

namespace ttr {

namespace {
std::atomic<unsigned> g_threads{1};
}

unsigned worker_threads() { return g_threads.load(); }
void set_worker_threads(unsigned n) { g_threads.store(n == 0 ? 1 : n); }

std::string format_rational(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

PolyC to_complex(const PolyQ& p) {
  std::vector<cplx> c;
  c.reserve(p.c.size());
  for (const auto& q : p.c) c.emplace_back(q.get_d(), 0.0);
  return PolyC(std::move(c));
}

RatFnC to_complex(const RatFnQ& f) { return {to_complex(f.num), to_complex(f.den)}; }

std::vector<RootInfo> polynomial_roots(const PolyC& p) {
  const int n = p.degree();
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  const cplx lead = p.leading();
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("companion eigenvalue solve failed");

  const PolyC dp = p.derivative();
  double scale = 0.0;
  for (const auto& c : p.c) scale += std::abs(c);

  std::vector<RootInfo> out;
  for (int i = 0; i < n; ++i) {
    cplx r = es.eigenvalues()(i);
    const cplx d = dp(r);
    const double big = std::pow(std::max(1.0, std::abs(r)), n);
    const bool flat = std::abs(d) <= 1e-6 * scale * big;
    if (!flat) {
      cplx step = p(r) / d;
      if (std::abs(p(r - step)) <= std::abs(p(r))) r -= step;
    }
    out.push_back({r, flat});
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (std::abs(out[i].value - out[j].value) < 1e-9 * std::max(1.0, std::abs(out[i].value)))
        out[i].repeated = out[j].repeated = true;
  std::sort(out.begin(), out.end(), [](const RootInfo& a, const RootInfo& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

std::vector<cplx> simple_roots(const PolyC& p) {
  std::vector<cplx> r;
  for (const auto& info : polynomial_roots(p)) {
    if (info.repeated) throw InvalidInput("polynomial has a repeated root near " + std::to_string(info.value.real()) +
                                          (info.value.imag() >= 0 ? "+" : "") + std::to_string(info.value.imag()) + "i");
    r.push_back(info.value);
  }
  return r;
}

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw DomainError("cannot rationalize a non-finite value");
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(v);
    if (std::abs(a) > 1e15) break;
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double frac = v - a;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) < 1e-15 * std::max(1.0, std::abs(x)) || frac < 1e-15)
      break;
    v = 1.0 / frac;
  }
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

std::vector<std::pair<Rational, int>> rational_roots(const PolyQ& p) {
  std::vector<std::pair<Rational, int>> out;
  PolyQ rest = p;
  while (rest.degree() >= 1) {
    bool found = false;
    for (const auto& info : polynomial_roots(to_complex(rest))) {
      if (std::abs(info.value.imag()) > 1e-6 * std::max(1.0, std::abs(info.value))) continue;
      Rational q = rationalize(info.value.real());
      if (sgn(rest(q)) != 0) continue;
      int mult = 0;
      PolyQ lin(std::vector<Rational>{-q, Rational(1)});
      while (rest.degree() >= 1 && sgn(rest(q)) == 0) {
        rest = rest.divmod(lin).first;
        ++mult;
      }
      out.emplace_back(q, mult);
      found = true;
      break;
    }
    if (!found) break;
  }
  if (rest.degree() >= 1) throw DomainError("polynomial has irrational or complex roots");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace ttr
