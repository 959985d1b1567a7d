#pragma once

// Riemann-Roch dimension counts for L-twisted Higgs bundles of rank r on a
// curve of genus g.

#include <string>
#include <utility>

#include <json.hpp>

namespace ttr {

// A line bundle known by its degree, or as the power K^n of the canonical bundle.
struct LineBundle {
  int degree = 0;
  int canonical_power = 0;
  bool is_canonical_power = false;

  static LineBundle of_degree(int d) { return {d, 0, false}; }
  static LineBundle canonical(int n, int g) { return {n * (2 * g - 2), n, true}; }
};

// (h0, h1) from the degree alone; raises DomainError in the range
// 0 <= deg <= 2g - 2 for g >= 1, where the degree does not determine h0.
std::pair<int, int> h0_h1(int g, int deg);
std::pair<int, int> h0_h1(int g, const LineBundle& L);

struct ModuliSpec {
  int rank = 2;
  int degree = 0;  // degree of the bundle; does not enter the counts
  int genus = 0;
  int deg_l = 2;
  bool canonical = false;  // L = K; deg_l is then 2g - 2
  bool trace_free = false;

  void validate() const;
  LineBundle L_power(int i) const;         // L^i, any integer i
  LineBundle L_power_times_K(int i) const;  // L^i (x) K
  nlohmann::json to_json() const;
};

int moduli_dim(const ModuliSpec& s);
int hitchin_base_dim(const ModuliSpec& s);
int effective_base_dim(const ModuliSpec& s);

struct SpectralGenus {
  int effective_base;  // dim H0(sum L^i (x) K)
  int adjunction;      // 1 + r(g-1) + r(r-1) deg L / 2
  int h1_sum;          // sum h1(L^-i)
  int value;
};
// Raises DomainError when the methods disagree.
SpectralGenus spectral_genus(const ModuliSpec& s);

struct DimTable {
  int moduli, base, effective, spectral_genus;
  std::string to_text() const;
  nlohmann::json to_json() const;
};
DimTable dims(const ModuliSpec& s);

}  // namespace ttr
