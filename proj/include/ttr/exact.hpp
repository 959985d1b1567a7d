#pragma once

// Symmetric rational multidifferentials on genus-0 curves, stored as sums of
// products of (z_i - a_k)^e with a_k rational ramification points.

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "ttr/numeric.hpp"

namespace ttr {

struct SlotFactor {
  int ram = -1;  // index into the ramification list; -1 with exp = 0 means absent
  int exp = 0;
  auto operator<=>(const SlotFactor&) const = default;
};

using MonoKey = std::vector<SlotFactor>;

class ExactExpr {
 public:
  explicit ExactExpr(int slots = 0) : slots_(slots) {}

  int slots() const { return slots_; }
  const std::map<MonoKey, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const MonoKey& k, const Rational& c);
  ExactExpr& operator+=(const ExactExpr& o);
  ExactExpr operator-(const ExactExpr& o) const;
  ExactExpr scaled(const Rational& c) const;

  // Result slot map[i] receives slot i.
  ExactExpr relabel(const std::vector<int>& map, int new_slots) const;
  bool operator==(const ExactExpr& o) const { return slots_ == o.slots_ && terms_ == o.terms_; }

  cplx evaluate(const std::vector<cplx>& z, const std::vector<Rational>& ram) const;
  Rational evaluate_exact(const std::vector<Rational>& z, const std::vector<Rational>& ram) const;

  // coeff * z0^e0 * ... * dz0...dz{n-1}; factors at a != 0 print as (zi-a)^e.
  std::string serialize(const std::vector<Rational>& ram) const;

 private:
  int slots_;
  std::map<MonoKey, Rational> terms_;
};

}  // namespace ttr
