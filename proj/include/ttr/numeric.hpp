#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

namespace ttr {

using cplx = std::complex<double>;
using Rational = mpq_class;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

// Bad input: malformed specs, violated preconditions. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature, root finding or node doubling failed to settle. Exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A series computation needed a coefficient outside its guaranteed window.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mathematically undefined request (special divisor range, pole of a frame, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

unsigned worker_threads();
void set_worker_threads(unsigned n);

// Runs fn(i) for i in [0, n). Each index writes only its own output slot, so
// results do not depend on the thread count.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
  unsigned t = worker_threads();
  if (t <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  if (t > n) t = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += t) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline double rel_err(cplx a, cplx b) {
  double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline cplx to_cplx(const Rational& q) { return {q.get_d(), 0.0}; }

std::string format_rational(const Rational& q);

}  // namespace ttr
