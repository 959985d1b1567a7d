#include <doctest.h>

#include "ttr/elliptic.hpp"

using namespace ttr;
using namespace ttr::elliptic;

namespace {

// Brute-force symmetric lattice sum, used only as an independent check.
cplx p_brute(cplx w, cplx tau, int n) {
  cplx acc = 1.0 / (w * w);
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b) {
      if (a == 0 && b == 0) continue;
      cplx om = static_cast<double>(a) + static_cast<double>(b) * tau;
      acc += 1.0 / ((w - om) * (w - om)) - 1.0 / (om * om);
    }
  return acc;
}

}  // namespace

TEST_CASE("theta derivatives match finite differences") {
  cplx tau(0.2, 1.1), w(0.31, 0.17), h(1e-4, 0.0);
  Theta t = theta1(w, tau);
  cplx fd = (theta1(w + h, tau).f - theta1(w - h, tau).f) / (2.0 * h);
  CHECK(std::abs(fd - t.d1) < 1e-7 * std::abs(t.d1));
  cplx fd3 = (theta1(w + h, tau).d2 - theta1(w - h, tau).d2) / (2.0 * h);
  CHECK(std::abs(fd3 - t.d3) < 1e-6 * std::abs(t.d3));
  CHECK(std::abs(theta1(cplx{}, tau).f) < 1e-15);
}

TEST_CASE("weierstrass p agrees with lattice sums") {
  for (cplx tau : {cplx(0, 1), cplx(0.3, 0.9), cplx(-0.4, 1.7)}) {
    for (cplx w : {cplx(0.5, 0), cplx(0.21, 0.33), cplx(1.7, -2.2)}) {
      cplx p = weierstrass_p(w, tau);
      CHECK(std::abs(p - weierstrass_p_lattice_sum(w, tau, 20)) < 1e-9 * std::max(1.0, std::abs(p)));
    }
  }
  // Square lattice: p(1/2) = -p(i/2) and the brute-force sum converges slowly towards it.
  cplx i(0, 1);
  cplx p = weierstrass_p(0.5, i);
  CHECK(std::abs(p + weierstrass_p(0.5 * i, i)) < 1e-10);
  CHECK(std::abs(p - p_brute(0.5, i, 200)) < 1e-2);
}

TEST_CASE("periodicity and oddness of log derivative") {
  cplx tau(0.1, 1.3), w(0.2, 0.1);
  CHECK(std::abs(weierstrass_p(w + 1.0 + tau, tau) - weierstrass_p(w, tau)) < 1e-9);
  CHECK(std::abs(log_theta_d(-w, tau) + log_theta_d(w, tau)) < 1e-12);
  // theta_1(w + tau) = -e^{-i pi tau - 2 pi i w} theta_1(w)
  CHECK(std::abs(log_theta_d(w + tau, tau) - (log_theta_d(w, tau) - kTwoPiI)) < 1e-10);
  Reduced r = reduce(cplx(3.3, 2.9), tau);
  CHECK(std::abs(r.w + static_cast<double>(r.m) + static_cast<double>(r.n) * tau - cplx(3.3, 2.9)) < 1e-13);
  CHECK(std::abs(r.w.imag()) <= 0.5 * tau.imag() + 1e-12);
}

TEST_CASE("a-normalized kernel constant") {
  // int_0^1 (p(u0+s) + c) ds = 0 with c = (pi^2/3) E2.
  cplx tau(0.15, 0.95);
  cplx u0 = 0.5 * tau;
  const int n = 256;
  cplx mean{};
  for (int k = 0; k < n; ++k) mean += weierstrass_p(u0 + static_cast<double>(k) / n, tau);
  mean /= static_cast<double>(n);
  CHECK(std::abs(-mean - kPi * kPi / 3.0 * eisenstein_e2(tau)) < 1e-10);
}

TEST_CASE("j invariant") {
  CHECK(std::abs(j_invariant(cplx(0, 1)) - 1728.0) < 1e-8);
  cplx rho = std::exp(kTwoPiI / 3.0);
  CHECK(std::abs(j_invariant(rho)) < 1e-6);
  cplx tau(0.37, 0.61);
  CHECK(std::abs(j_invariant(tau) - j_invariant(-1.0 / tau)) < 1e-7 * std::abs(j_invariant(tau)));
  CHECK(std::abs(j_invariant(tau + 3.0) - j_invariant(tau)) < 1e-7 * std::abs(j_invariant(tau)));
  cplx f = to_fundamental_domain(cplx(2.3, 0.05));
  CHECK(std::abs(f) >= 1.0 - 1e-12);
  CHECK(std::abs(f.real()) <= 0.5 + 1e-12);
}
