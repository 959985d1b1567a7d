#pragma once

// Torus functions for the lattice Z + tau Z, via the Jacobi theta_1 q-series.

#include "ttr/numeric.hpp"

namespace ttr::elliptic {

struct Reduced {
  cplx w;      // representative with |Im w| <= Im tau / 2 and |Re w| <= 1/2 (after the tau shift)
  long m = 0;  // w_in = w + m + n tau
  long n = 0;
};

Reduced reduce(cplx w, cplx tau);

struct Theta {
  cplx f, d1, d2, d3;  // theta_1 and its first three w-derivatives
};

// theta_1(w | tau) = 2 sum (-1)^n q^((n+1/2)^2) sin((2n+1) pi w), q = e^{i pi tau}.
Theta theta1(cplx w, cplx tau);

// -(log theta_1)''(w): the flat Bergman kernel up to an additive constant.
cplx log_theta_dd(cplx w, cplx tau);

// theta_1'/theta_1 without lattice reduction (analytic continuation in w).
cplx log_theta_d(cplx w, cplx tau);

// Weierstrass p for the lattice (1, tau).
cplx weierstrass_p(cplx w, cplx tau);
cplx weierstrass_p_lattice_sum(cplx w, cplx tau, int cutoff);

cplx eisenstein_e2(cplx tau);
cplx eisenstein_e4(cplx tau);
cplx eisenstein_e6(cplx tau);

// Representative of tau in the standard fundamental domain.
cplx to_fundamental_domain(cplx tau);

// Klein j-invariant, normalized so that j(i) = 1728.
cplx j_invariant(cplx tau);

}  // namespace ttr::elliptic
