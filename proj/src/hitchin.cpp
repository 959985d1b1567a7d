#include "ttr/hitchin.hpp"

#include <sstream>

#include "ttr/numeric.hpp"

namespace ttr {

std::pair<int, int> h0_h1(int g, int deg) {
  if (g < 0) throw InvalidInput("genus must be non-negative");
  if (g == 0) return {std::max(0, deg + 1), std::max(0, -deg - 1)};
  if (deg > 2 * g - 2) return {deg + 1 - g, 0};
  if (deg < 0) return {0, g - 1 - deg};
  throw DomainError("degree " + std::to_string(deg) + " lies in the special range [0, " + std::to_string(2 * g - 2) +
                    "] where h0 is not determined by the degree");
}

std::pair<int, int> h0_h1(int g, const LineBundle& L) {
  if (!L.is_canonical_power || g == 0) return h0_h1(g, L.degree);
  const int n = L.canonical_power;
  if (g == 1) return {1, 1};  // K is trivial
  if (n == 0) return {1, g};
  if (n == 1) return {g, 1};
  return h0_h1(g, L.degree);
}

void ModuliSpec::validate() const {
  if (rank < 1) throw InvalidInput("rank must be at least 1");
  if (genus < 0) throw InvalidInput("genus must be non-negative");
  if (canonical) {
    if (trace_free) throw InvalidInput("the trace-free count is implemented for twisted bundles");
    return;
  }
  if (deg_l <= 2 * genus - 2) throw InvalidInput("twisted counts need deg L > 2g - 2");
}

LineBundle ModuliSpec::L_power(int i) const {
  if (i == 0) return LineBundle::canonical(0, genus);
  return canonical ? LineBundle::canonical(i, genus) : LineBundle::of_degree(i * deg_l);
}

LineBundle ModuliSpec::L_power_times_K(int i) const {
  if (i == 0) return LineBundle::canonical(1, genus);
  return canonical ? LineBundle::canonical(i + 1, genus) : LineBundle::of_degree(i * deg_l + 2 * genus - 2);
}

nlohmann::json ModuliSpec::to_json() const {
  return {{"rank", rank},           {"degree", degree},       {"genus", genus},
          {"deg_l", canonical ? 2 * genus - 2 : deg_l}, {"canonical", canonical}, {"trace_free", trace_free}};
}

int moduli_dim(const ModuliSpec& s) {
  s.validate();
  const int r2 = s.rank * s.rank;
  if (s.canonical) return r2 * (2 * s.genus - 2) + 2;
  if (s.trace_free) return s.deg_l * (r2 - 1);
  return r2 * s.deg_l + 1;
}

int hitchin_base_dim(const ModuliSpec& s) {
  s.validate();
  int sum = 0;
  for (int i = s.trace_free ? 2 : 1; i <= s.rank; ++i) sum += h0_h1(s.genus, s.L_power(i)).first;
  return sum;
}

int effective_base_dim(const ModuliSpec& s) {
  s.validate();
  int sum = 0;
  for (int i = 0; i < s.rank; ++i) sum += h0_h1(s.genus, s.L_power_times_K(i)).first;
  return sum;
}

SpectralGenus spectral_genus(const ModuliSpec& s) {
  s.validate();
  SpectralGenus out{};
  const int r = s.rank, g = s.genus;
  const int dl = s.canonical ? 2 * g - 2 : s.deg_l;
  out.effective_base = effective_base_dim(s);
  out.adjunction = 1 + r * (g - 1) + r * (r - 1) * dl / 2;
  out.h1_sum = 0;
  for (int i = 0; i < r; ++i) out.h1_sum += h0_h1(g, s.L_power(-i)).second;
  if (out.effective_base != out.adjunction || out.h1_sum != out.adjunction)
    throw DomainError("spectral genus methods disagree (" + std::to_string(out.effective_base) + ", " +
                      std::to_string(out.adjunction) + ", " + std::to_string(out.h1_sum) +
                      "): no smooth spectral curve for this data");
  out.value = out.adjunction;
  return out;
}

std::string DimTable::to_text() const {
  std::ostringstream os;
  os << "moduli_dim " << moduli << "\n"
     << "hitchin_base_dim " << base << "\n"
     << "effective_base_dim " << effective << "\n"
     << "spectral_genus " << spectral_genus << "\n";
  return os.str();
}

nlohmann::json DimTable::to_json() const {
  return {{"moduli_dim", moduli}, {"hitchin_base_dim", base}, {"effective_base_dim", effective}, {"spectral_genus", spectral_genus}};
}

DimTable dims(const ModuliSpec& s) {
  ModuliSpec full = s;
  full.trace_free = false;
  DimTable t{};
  t.moduli = moduli_dim(s);
  t.base = hitchin_base_dim(s);
  t.effective = effective_base_dim(full);
  t.spectral_genus = spectral_genus(full).value;
  return t;
}

}  // namespace ttr
