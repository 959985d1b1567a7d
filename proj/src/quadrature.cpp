#include "ttr/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace ttr {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    r.x[static_cast<std::size_t>(i)] = x;
    r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

constexpr int kPanelOrder = 16;

cplx gl_panel(const std::function<cplx(double)>& f, double a, double b) {
  const GaussRule& g = gauss_legendre(kPanelOrder);
  const double h = 0.5 * (b - a), m = 0.5 * (b + a);
  cplx acc{};
  for (std::size_t i = 0; i < g.x.size(); ++i) acc += g.w[i] * f(m + h * g.x[i]);
  return acc * h;
}

cplx adapt(const std::function<cplx(double)>& f, double a, double b, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  cplx left = gl_panel(f, a, m), right = gl_panel(f, m, b);
  cplx both = left + right;
  if (std::abs(both - whole) <= tol) return both;
  if (depth <= 0) throw ConvergenceError("adaptive quadrature exceeded its panel depth");
  return adapt(f, a, m, left, 0.5 * tol, depth - 1) + adapt(f, m, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol, int max_depth) {
  cplx whole = gl_panel(f, a, b);
  double scale = std::max(1.0, std::abs(whole));
  return adapt(f, a, b, whole, tol * scale, max_depth);
}

std::vector<QuadNode> adaptive_rule(const std::function<std::vector<cplx>(double)>& probe, double a, double b,
                                    double tol, int max_depth) {
  const GaussRule& g = gauss_legendre(kPanelOrder);
  auto panel = [&](double lo, double hi) {
    const double h = 0.5 * (hi - lo), m = 0.5 * (hi + lo);
    std::vector<cplx> acc;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      auto v = probe(m + h * g.x[i]);
      if (acc.empty()) acc.assign(v.size(), cplx{});
      for (std::size_t k = 0; k < v.size(); ++k) acc[k] += g.w[i] * h * v[k];
    }
    return acc;
  };
  std::vector<std::pair<double, double>> done;
  std::function<void(double, double, const std::vector<cplx>&, int)> rec = [&](double lo, double hi,
                                                                                  const std::vector<cplx>& whole,
                                                                                  int depth) {
    const double m = 0.5 * (lo + hi);
    auto l = panel(lo, m), r = panel(m, hi);
    bool ok = true;
    for (std::size_t k = 0; k < whole.size(); ++k) {
      double sc = std::max(1.0, std::abs(whole[k]));
      if (std::abs(l[k] + r[k] - whole[k]) > tol * sc) ok = false;
    }
    if (ok) {
      done.emplace_back(lo, m);
      done.emplace_back(m, hi);
      return;
    }
    if (depth <= 0) throw ConvergenceError("adaptive rule construction exceeded its panel depth");
    rec(lo, m, l, depth - 1);
    rec(m, hi, r, depth - 1);
  };
  rec(a, b, panel(a, b), max_depth);
  std::vector<QuadNode> nodes;
  for (auto [lo, hi] : done) {
    const double h = 0.5 * (hi - lo), m = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < g.x.size(); ++i) nodes.push_back({m + h * g.x[i], g.w[i] * h});
  }
  return nodes;
}

cplx circle_residue(const std::function<cplx(cplx)>& f, cplx center, double radius, int nodes) {
  cplx acc{};
  for (int j = 0; j < nodes; ++j) {
    cplx t = std::polar(radius, 2.0 * kPi * j / nodes);
    acc += t * f(center + t);
  }
  return acc / static_cast<double>(nodes);
}

}  // namespace ttr
