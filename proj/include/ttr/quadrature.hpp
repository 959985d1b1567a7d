#pragma once

#include <functional>
#include <vector>

#include "ttr/numeric.hpp"

namespace ttr {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int n);

struct QuadNode {
  double s;
  double w;
};

// Adaptive Gauss-Legendre on [a, b]: a panel is accepted when the 16-point
// rule on it agrees with the sum over its two halves.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol, int max_depth = 40);

// Panel layout refined until every component of a vector-valued probe
// converges; returns the fixed composite rule for reuse.
std::vector<QuadNode> adaptive_rule(const std::function<std::vector<cplx>(double)>& probe, double a, double b,
                                    double tol, int max_depth = 30);

// (1/N) sum t_j f(t_j) over t_j = r e^{2 pi i j/N}: the residue (1/2 pi i) \oint f dt.
cplx circle_residue(const std::function<cplx(cplx)>& f, cplx center, double radius, int nodes);

}  // namespace ttr
