#include "ttr/elliptic.hpp"

#include <cmath>

namespace ttr::elliptic {

Reduced reduce(cplx w, cplx tau) {
  Reduced r;
  r.n = std::lround(w.imag() / tau.imag());
  cplx w1 = w - static_cast<double>(r.n) * tau;
  r.m = std::lround(w1.real());
  r.w = w1 - static_cast<double>(r.m);
  return r;
}

Theta theta1(cplx w, cplx tau) {
  if (tau.imag() <= 0.0) throw DomainError("theta_1 needs Im tau > 0");
  Theta t{};
  const cplx ipt = kI * kPi * tau;
  for (int n = 0; n < 200; ++n) {
    const double k = 2.0 * n + 1.0;
    const double h = (n + 0.5) * (n + 0.5);
    const cplx qf = std::exp(ipt * h) * (n % 2 == 0 ? 2.0 : -2.0);
    const cplx arg = k * kPi * w;
    const cplx s = std::sin(arg), c = std::cos(arg);
    const double kp = k * kPi;
    const cplx a0 = qf * s, a1 = qf * c * kp, a2 = -qf * s * kp * kp, a3 = -qf * c * kp * kp * kp;
    t.f += a0;
    t.d1 += a1;
    t.d2 += a2;
    t.d3 += a3;
    const double mag = std::max({std::abs(a0), std::abs(a1), std::abs(a2), std::abs(a3)});
    const double ref = std::max({std::abs(t.f), std::abs(t.d1), std::abs(t.d2), std::abs(t.d3)});
    if (n >= 2 && mag <= 1e-18 * ref) break;
  }
  return t;
}

cplx log_theta_dd(cplx w, cplx tau) {
  Theta t = theta1(w, tau);
  return (t.d1 * t.d1 - t.f * t.d2) / (t.f * t.f);
}

cplx log_theta_d(cplx w, cplx tau) {
  Theta t = theta1(w, tau);
  return t.d1 / t.f;
}

cplx weierstrass_p(cplx w, cplx tau) {
  Reduced r = reduce(w, tau);
  Theta z = theta1(cplx{}, tau);
  return log_theta_dd(r.w, tau) + z.d3 / (3.0 * z.d1);
}

cplx weierstrass_p_lattice_sum(cplx w, cplx tau, int cutoff) {
  // Rows summed in closed form: sum_m (w + m + n tau)^-2 = pi^2 / sin^2(pi (w + n tau)).
  cplx acc{};
  const double pi2 = kPi * kPi;
  for (int n = -cutoff; n <= cutoff; ++n) {
    cplx s = std::sin(kPi * (w + static_cast<double>(n) * tau));
    acc += pi2 / (s * s);
  }
  cplx g2 = pi2 / 3.0;
  for (int n = 1; n <= cutoff; ++n) {
    cplx s = std::sin(kPi * static_cast<double>(n) * tau);
    g2 += 2.0 * pi2 / (s * s);
  }
  return acc - g2;
}

namespace {

cplx lambert_series(cplx tau, int power, double weight) {
  const cplx q = std::exp(kTwoPiI * tau);
  cplx acc{};
  cplx qn = q;
  for (int n = 1; n < 2000; ++n) {
    cplx term = std::pow(static_cast<double>(n), power) * qn / (1.0 - qn);
    acc += term;
    if (std::abs(term) * std::abs(weight) < 1e-18 * std::max(1.0, std::abs(acc * weight)) && n > 3) break;
    qn *= q;
  }
  return 1.0 + weight * acc;
}

}  // namespace

cplx eisenstein_e2(cplx tau) { return lambert_series(tau, 1, -24.0); }
cplx eisenstein_e4(cplx tau) { return lambert_series(tau, 3, 240.0); }
cplx eisenstein_e6(cplx tau) { return lambert_series(tau, 5, -504.0); }

cplx to_fundamental_domain(cplx tau) {
  if (tau.imag() <= 0.0) throw DomainError("tau must lie in the upper half plane");
  for (int it = 0; it < 1000; ++it) {
    tau -= std::round(tau.real());
    if (std::norm(tau) < 1.0 - 1e-15)
      tau = -1.0 / tau;
    else
      break;
  }
  return tau;
}

cplx j_invariant(cplx tau) {
  const cplx t = to_fundamental_domain(tau);
  const cplx e4 = eisenstein_e4(t), e6 = eisenstein_e6(t);
  const cplx e43 = e4 * e4 * e4;
  return 1728.0 * e43 / (e43 - e6 * e6);
}

}  // namespace ttr::elliptic
