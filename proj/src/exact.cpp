#include "ttr/exact.hpp"

#include <sstream>

namespace ttr {

void ExactExpr::add(const MonoKey& k, const Rational& c) {
  if (sgn(c) == 0) return;
  if (static_cast<int>(k.size()) != slots_) throw InvalidInput("monomial slot count mismatch");
  auto [it, inserted] = terms_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

ExactExpr& ExactExpr::operator+=(const ExactExpr& o) {
  if (o.slots_ != slots_) throw InvalidInput("slot count mismatch in sum");
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

ExactExpr ExactExpr::operator-(const ExactExpr& o) const {
  ExactExpr r = *this;
  r += o.scaled(Rational(-1));
  return r;
}

ExactExpr ExactExpr::scaled(const Rational& c) const {
  ExactExpr r(slots_);
  if (sgn(c) == 0) return r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
  return r;
}

ExactExpr ExactExpr::relabel(const std::vector<int>& map, int new_slots) const {
  if (static_cast<int>(map.size()) != slots_) throw InvalidInput("relabel map size mismatch");
  ExactExpr r(new_slots);
  for (const auto& [k, c] : terms_) {
    MonoKey nk(static_cast<std::size_t>(new_slots));
    for (int i = 0; i < slots_; ++i) nk[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] = k[static_cast<std::size_t>(i)];
    r.add(nk, c);
  }
  return r;
}

cplx ExactExpr::evaluate(const std::vector<cplx>& z, const std::vector<Rational>& ram) const {
  cplx acc{};
  for (const auto& [k, c] : terms_) {
    cplx t = to_cplx(c);
    for (int i = 0; i < slots_; ++i) {
      const SlotFactor& f = k[static_cast<std::size_t>(i)];
      if (f.exp == 0) continue;
      t *= std::pow(z[static_cast<std::size_t>(i)] - ram[static_cast<std::size_t>(f.ram)].get_d(), f.exp);
    }
    acc += t;
  }
  return acc;
}

namespace {

Rational rational_pow(const Rational& b, int e) {
  if (e < 0) {
    if (sgn(b) == 0) throw DomainError("evaluation at a pole");
    return rational_pow(Rational(1) / b, -e);
  }
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

Rational ExactExpr::evaluate_exact(const std::vector<Rational>& z, const std::vector<Rational>& ram) const {
  Rational acc(0);
  for (const auto& [k, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < slots_; ++i) {
      const SlotFactor& f = k[static_cast<std::size_t>(i)];
      if (f.exp == 0) continue;
      t *= rational_pow(z[static_cast<std::size_t>(i)] - ram[static_cast<std::size_t>(f.ram)], f.exp);
    }
    acc += t;
  }
  acc.canonicalize();
  return acc;
}

std::string ExactExpr::serialize(const std::vector<Rational>& ram) const {
  std::ostringstream diff;
  for (int i = 0; i < slots_; ++i) diff << "dz" << i;
  if (terms_.empty()) return "0 * " + diff.str();
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << format_rational(c);
    for (int i = 0; i < slots_; ++i) {
      const SlotFactor& f = k[static_cast<std::size_t>(i)];
      if (f.exp == 0) continue;
      const Rational& a = ram[static_cast<std::size_t>(f.ram)];
      out << " * ";
      if (sgn(a) == 0)
        out << "z" << i;
      else if (sgn(a) > 0)
        out << "(z" << i << "-" << format_rational(a) << ")";
      else
        out << "(z" << i << "+" << format_rational(-a) << ")";
      out << "^" << f.exp;
    }
    out << " * " << diff.str();
  }
  return out.str();
}

}  // namespace ttr
