#include "ttr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "ttr/deform.hpp"
#include "ttr/elliptic.hpp"
#include "ttr/recursion.hpp"
#include "ttr/report.hpp"

namespace ttr {

using nlohmann::json;

namespace {

void write_file(const RunConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.output.dir.empty()) return;
  std::filesystem::create_directories(cfg.output.dir);
  const auto path = std::filesystem::path(cfg.output.dir) / name;
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write " + path.string());
  f << text;
}

CycleOptions cycle_options(const RunConfig& cfg) {
  CycleOptions o;
  o.a_pair = cfg.family.a_pair;
  o.b_pair = cfg.family.b_pair;
  o.separation = cfg.family.separation;
  return o;
}

std::shared_ptr<const Uniformization> genus1_uniformization(const SpectralCurve& c, const RunConfig& cfg) {
  return std::make_shared<Uniformization>(c, cycle_basis(c, cycle_options(cfg)));
}

// Random points away from ramification (and, in genus 1, from the cycles).
class Sampler {
 public:
  Sampler(const SpectralCurve& c, std::uint64_t seed, const CycleBasis* cb) : c_(c), rng_(seed), cb_(cb) {
    for (const auto& r : c.ramification_points())
      if (!r.at_infinity) special_.push_back(r.location);
    for (const auto& z : c.singular_coords()) special_.push_back(z);
    double R = 1.0;
    for (const auto& z : special_) R = std::max(R, std::abs(z));
    box_ = 1.2 * R;
  }

  CurvePoint one() {
    std::uniform_real_distribution<double> u(-box_, box_);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const cplx z(u(rng_), u(rng_));
      bool ok = std::abs(z) > 0.05 * box_ || c_.model() == ModelKind::Hyperelliptic;
      for (const auto& s : special_) ok = ok && std::abs(z - s) > 0.15 * box_;
      if (cb_) ok = ok && cb_->a.distance_to(z) > cb_->separation && cb_->b.distance_to(z) > cb_->separation;
      if (!ok) continue;
      if (c_.model() == ModelKind::Parametric) return c_.point(z);
      return c_.point_on_sheet(z, (rng_() & 1U) ? 1 : -1);
    }
    throw InvalidInput("could not sample points away from the special points");
  }

  std::vector<CurvePoint> tuple(int n) {
    std::vector<CurvePoint> t;
    for (int i = 0; i < n; ++i) t.push_back(one());
    return t;
  }

 private:
  const SpectralCurve& c_;
  std::mt19937_64 rng_;
  const CycleBasis* cb_;
  std::vector<cplx> special_;
  double box_ = 1.0;
};

RecursionOptions recursion_options(const RunConfig& cfg) {
  RecursionOptions o;
  o.kernel = kernel_spec(cfg.recursion);
  o.multiplier_exact = exact_multiplier(cfg.recursion);
  o.series_order = cfg.recursion.series_order;
  o.nodes = cfg.recursion.contour_nodes;
  o.tol = cfg.tolerances.quadrature;
  return o;
}

bool use_exact(const SpectralCurve& c, const RunConfig& cfg) {
  return cfg.recursion.mode == "exact" && c.model() == ModelKind::Parametric && c.exact_available();
}

std::shared_ptr<EvalGeometry> geometry_for(const SpectralCurve& c, const RunConfig& cfg) {
  if (c.genus() == 1) return make_geometry(c, genus1_uniformization(c, cfg));
  return make_geometry(c);
}

int cmd_dims(const RunConfig& cfg, std::ostream& out) {
  const DimTable t = dims(cfg.dims);
  out << t.to_text();
  std::ostringstream csv;
  csv << "rank,genus,deg_l,canonical,trace_free,moduli_dim,hitchin_base_dim,effective_base_dim,spectral_genus\n"
      << cfg.dims.rank << ',' << cfg.dims.genus << ',' << cfg.dims.deg_l << ',' << cfg.dims.canonical << ','
      << cfg.dims.trace_free << ',' << t.moduli << ',' << t.base << ',' << t.effective << ',' << t.spectral_genus << '\n';
  write_file(cfg, cfg.output.csv, csv.str());
  return kExitOk;
}

int cmd_recursion(const RunConfig& cfg, std::ostream& out) {
  const SpectralCurve c = curve_from_json(cfg.curve, cfg.twist);
  const int g = cfg.recursion.g, n = cfg.recursion.n;
  if (2 * g - 2 + n <= 0) throw InvalidInput("recursion output needs a stable (g, n)");
  if (cfg.recursion.mode == "exact") {
    if (!use_exact(c, cfg)) throw InvalidInput("exact mode needs a parametric curve with rational coefficients");
    ExactRecursion R(c, recursion_options(cfg));
    const std::string s = R.serialize(R.w(g, n));
    out << s << '\n';
    write_file(cfg, "w_g" + std::to_string(g) + "_n" + std::to_string(n) + ".txt", s + "\n");
    return kExitOk;
  }
  auto geo = geometry_for(c, cfg);
  NumericRecursion rec(geo, recursion_options(cfg));
  const auto* uni = geo->mode() == GenusMode::Elliptic ? &static_cast<const EllipticGeometry&>(*geo).uniformization() : nullptr;
  Sampler sampler(c, cfg.seed, uni ? uni->basis() : nullptr);
  const bool hyper = c.model() == ModelKind::Hyperelliptic;
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "# W(" << g << "," << n << ") variant=" << cfg.recursion.variant << " per d(coord) in each slot; coord = "
      << (hyper ? "x with fibre value y" : "z") << "; engine normalization (-2)^(2g-2+n)\n";
  for (int i = 0; i < n; ++i) {
    csv << "p" << i << "_re,p" << i << "_im,";
    if (hyper) csv << "y" << i << "_re,y" << i << "_im,";
  }
  csv << "w_re,w_im\n";
  for (int k = 0; k < cfg.recursion.samples; ++k) {
    const auto t = sampler.tuple(n);
    const cplx w = rec.w(g, t);
    for (const auto& p : t) {
      csv << p.coord.real() << ',' << p.coord.imag() << ',';
      if (hyper) csv << p.y.real() << ',' << p.y.imag() << ',';
    }
    csv << w.real() << ',' << w.imag() << '\n';
  }
  out << csv.str();
  write_file(cfg, cfg.output.csv, csv.str());
  return kExitOk;
}

int cmd_periods(const RunConfig& cfg, std::ostream& out) {
  const SpectralCurve c = curve_from_json(cfg.curve, cfg.twist);
  const CycleBasis cb = cycle_basis(c, cycle_options(cfg));
  const PeriodData pd = period_data(c, cb);
  json j;
  j["tau"] = complex_json(pd.tau);
  j["omega_a"] = complex_json(pd.omega_a);
  j["omega_b"] = complex_json(pd.omega_b);
  j["j_invariant"] = complex_json(elliptic::j_invariant(pd.tau));
  j["lambda"] = c.has_twist() ? complex_json(lambda_coordinate(cb, c.P(), c.twist().s)) : json(nullptr);
  json bp = json::array();
  for (const auto& e : c.branch_points()) bp.push_back(complex_json(e));
  j["branch_points"] = bp;
  j["cycles"] = {{"a", cb.a.to_json()},
                 {"b", cb.b.to_json()},
                 {"a_pair", {cb.a_pair.first, cb.a_pair.second}},
                 {"b_pair", {cb.b_pair.first, cb.b_pair.second}},
                 {"separation", cb.separation}};
  j["config"] = cfg.to_json();
  const std::string s = j.dump();
  out << s << '\n';
  write_file(cfg, "periods.json", s + "\n");
  return kExitOk;
}

std::vector<std::pair<int, int>> property_cases(const RunConfig& cfg) {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; g <= cfg.recursion.g_max; ++g)
    for (int n = 1; n <= cfg.recursion.n_max; ++n)
      if (2 * g - 2 + n > 0 && 2 * g - 2 + n <= cfg.recursion.max_euler) out.emplace_back(g, n);
  return out;
}

void check_properties_suite(const RunConfig& cfg, const SpectralCurve& c, std::vector<CheckRecord>& recs) {
  const std::string tag = "properties." + cfg.recursion.variant;
  if (use_exact(c, cfg)) {
    ExactRecursion R(c, recursion_options(cfg));
    for (auto [g, n] : property_cases(cfg)) {
      const PropertyReport rep = check_properties(R, g, n);
      CheckRecord r = compare_abs(tag + ".g" + std::to_string(g) + ".n" + std::to_string(n),
                                  rep.symmetry_defect + rep.oddness_defect, 0.0, cfg.tolerances.properties);
      r.pass = r.pass && rep.pass();
      r.detail["report"] = rep.to_json();
      recs.push_back(std::move(r));
    }
    const ExactExpr diff = R.w(0, 3) - R.w03_direct();
    CheckRecord r = compare_abs(tag + ".w03_direct", static_cast<double>(diff.terms().size()), 0.0, 0.5);
    r.detail["statement"] = "number of terms in W(0,3) - w03_direct";
    recs.push_back(std::move(r));
    return;
  }
  auto geo = geometry_for(c, cfg);
  NumericRecursion rec(geo, recursion_options(cfg));
  const auto* uni = geo->mode() == GenusMode::Elliptic ? &static_cast<const EllipticGeometry&>(*geo).uniformization() : nullptr;
  Sampler sampler(c, cfg.seed, uni ? uni->basis() : nullptr);
  for (auto [g, n] : property_cases(cfg)) {
    std::vector<std::vector<CurvePoint>> samples;
    for (int k = 0; k < std::min(cfg.recursion.samples, 3); ++k) samples.push_back(sampler.tuple(n));
    const PropertyReport rep = check_properties(rec, g, samples);
    CheckRecord r = compare_abs(tag + ".g" + std::to_string(g) + ".n" + std::to_string(n),
                                std::max(rep.symmetry_defect, rep.oddness_defect), 0.0,
                                cfg.tolerances.properties_numeric);
    r.pass = r.pass && rep.poles_only_at_ramification && rep.max_pole_order <= rep.pole_bound;
    r.detail["report"] = rep.to_json();
    recs.push_back(std::move(r));
  }
  const auto t = sampler.tuple(3);
  recs.push_back(compare(tag + ".w03_direct", rec.w(0, t), rec.w03_direct(t), cfg.tolerances.properties_numeric));
}

CurveFamily family_for(const RunConfig& cfg, const SpectralCurve& c) {
  if (c.model() != ModelKind::Hyperelliptic || c.genus() != 1 || !c.has_twist())
    throw InvalidInput("deformation checks need a genus-1 curve y^2 = P(x) with a twist");
  FamilyOptions fo;
  fo.radius = cfg.family.radius;
  fo.step = cfg.family.step;
  fo.cycles = cycle_options(cfg);
  return CurveFamily(c, cfg.family.direction, fo);
}

void check_bergman_suite(const RunConfig& cfg, const SpectralCurve& c, std::vector<CheckRecord>& recs) {
  if (c.model() != ModelKind::Hyperelliptic || c.genus() != 1)
    throw InvalidInput("bergman-normalization needs a genus-1 curve y^2 = P(x)");
  auto uni = genus1_uniformization(c, cfg);
  Sampler sampler(c, cfg.seed, uni->basis());
  for (int k = 0; k < cfg.recursion.samples; ++k) {
    const CurvePoint z = sampler.one();
    const BergmanPeriods bp = bergman_periods(c, uni, z);
    CheckRecord a = compare_abs("bergman.a_period", bp.a_period, 0.0, cfg.tolerances.bergman_a);
    CheckRecord b = compare_abs("bergman.b_period", bp.b_period, bp.expected_b, cfg.tolerances.bergman_b);
    for (auto* r : {&a, &b}) r->detail["z"] = {{"x", complex_json(z.coord)}, {"y", complex_json(z.y)}};
    recs.push_back(std::move(a));
    recs.push_back(std::move(b));
  }
  const CurvePoint pa = sampler.one();
  CurvePoint pb = sampler.one();
  double rad = 0.25 * std::abs(pa.coord - pb.coord);
  for (const auto& e : c.branch_points()) rad = std::min({rad, 0.25 * std::abs(pa.coord - e), 0.25 * std::abs(pb.coord - e)});
  const auto [ra, rb] = cauchy_residues(c, pa, pb, uni, rad);
  recs.push_back(compare_abs("cauchy.residue_at_a", ra, 1.0, cfg.tolerances.cauchy));
  recs.push_back(compare_abs("cauchy.residue_at_b", rb, -1.0, cfg.tolerances.cauchy));
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const SpectralCurve c = curve_from_json(cfg.curve, cfg.twist);
  std::vector<std::string> suite = cfg.suite;
  if (std::find(suite.begin(), suite.end(), "all") != suite.end())
    suite = {"properties", "bergman-normalization", "rauch", "dm-cubic", "taylor"};
  std::vector<CheckRecord> recs;
  for (const auto& name : suite) {
    if (name == "properties") {
      check_properties_suite(cfg, c, recs);
    } else if (name == "bergman-normalization") {
      check_bergman_suite(cfg, c, recs);
    } else if (name == "rauch") {
      const CurveFamily f = family_for(cfg, c);
      std::vector<std::pair<CurvePoint, CurvePoint>> pairs;
      Sampler sampler(c, cfg.seed, &f.cycles());
      for (int k = 0; k < cfg.family.pairs; ++k) {
        const CurvePoint p = sampler.one();
        pairs.emplace_back(p, sampler.one());
      }
      for (auto& r : rauch_check(f, pairs, cfg.tolerances.rauch)) recs.push_back(std::move(r));
    } else if (name == "dm-cubic") {
      const CurveFamily f = family_for(cfg, c);
      DmOptions o;
      o.nodes = cfg.recursion.contour_nodes;
      o.tol = cfg.tolerances.dm_cubic;
      o.abs_floor = cfg.tolerances.degenerate_floor;
      o.quad_tol = cfg.tolerances.quadrature;
      const CubicReport rep = dm_cubic(f, o);
      for (auto r : rep.records()) {
        r.detail["cubic"] = rep.to_json();
        recs.push_back(std::move(r));
      }
    } else if (name == "taylor") {
      const CurveFamily f = family_for(cfg, c);
      recs.push_back(taylor_check(f, 2, cfg.tolerances.taylor_m2));
      recs.push_back(taylor_check(f, 3, cfg.tolerances.taylor));
    }
  }
  const json config = cfg.to_json();
  bool all = true;
  std::ostringstream lines;
  for (auto& r : recs) {
    r.detail["config"] = config;
    all = all && r.pass;
    lines << r.to_json().dump() << '\n';
  }
  out << lines.str();
  write_file(cfg, cfg.output.report, lines.str());
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    set_worker_threads(cfg.threads);
    if (cfg.command == "dims") return cmd_dims(cfg, out);
    if (cfg.command == "recursion") return cmd_recursion(cfg, out);
    if (cfg.command == "periods") return cmd_periods(cfg, out);
    return cmd_verify(cfg, out);
  } catch (const ConvergenceError& e) {
    err << "error: no convergence: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const TruncationError& e) {
    err << "error: series truncation: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const InvalidInput& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid config: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace ttr
