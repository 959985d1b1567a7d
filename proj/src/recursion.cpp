#include "ttr/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ttr {

namespace {

bool stable(int g, int n) { return 2 * g - 2 + n > 0; }

void accumulate(std::map<MonoKey, SeriesQ>& into, const MonoKey& k, const SeriesQ& s) {
  auto it = into.find(k);
  if (it == into.end())
    into.emplace(k, s);
  else
    it->second = it->second + s;
}

std::map<MonoKey, SeriesQ> product(const std::map<MonoKey, SeriesQ>& a, const std::map<MonoKey, SeriesQ>& b) {
  std::map<MonoKey, SeriesQ> out;
  for (const auto& [ka, sa] : a)
    for (const auto& [kb, sb] : b) {
      MonoKey k = ka;
      for (std::size_t i = 0; i < k.size(); ++i)
        if (kb[i].exp != 0) k[i] = kb[i];
      accumulate(out, k, sa * sb);
    }
  return out;
}

std::map<MonoKey, SeriesQ> times(std::map<MonoKey, SeriesQ> a, const SeriesQ& s) {
  for (auto& [k, v] : a) v = v * s;
  return a;
}

double max_abs(const ExactExpr& e) {
  double m = 0.0;
  for (const auto& [k, c] : e.terms()) m = std::max(m, std::abs(c.get_d()));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact mode

struct ExactRecursion::Local {
  int index = 0;
  Rational a;
  int order = 0;
  SeriesQ sigma, dsigma;  // sigma(t), sigma'(t)
  SeriesQ omega;          // Omega per dt
  SeriesQ w01_q, w01_sq;  // W01 at q and sigma(q), per dt
  SeriesQ weight_dxdy;    // (1 / m_eff) / (dx dy), per dt^-1
  SeriesQ b_diag;         // B(q, sigma q) sigma', per dt^2
  std::map<std::tuple<int, int, int>, SeriesQ> powers;
  std::map<int, SeriesQ> kernel;  // m -> numerator_m / Omega

  const SeriesQ& w(int kind) const { return kind == 0 ? t_ : sigma; }
  SeriesQ t_;
};

ExactRecursion::ExactRecursion(const SpectralCurve& c, RecursionOptions opts) : curve_(c), opts_(std::move(opts)) {
  if (c.genus() != 0 || !c.exact_available())
    throw InvalidInput("exact mode needs a genus-0 curve with rational coefficients");
  if (!c.validate_good().good) throw InvalidInput("curve is not good: exact recursion refused");
  for (const auto& r : c.ramification_points()) {
    if (r.at_infinity || !r.exact_location) throw InvalidInput("exact mode needs rational ramification points");
    ram_.push_back(*r.exact_location);
  }
  if (opts_.kernel.variant == Variant::Twisted && (!c.has_twist() || !c.twist().exact))
    throw InvalidInput("exact twisted mode needs a rational twist section");
  if (opts_.kernel.variant == Variant::HitchinGlobal && opts_.kernel.w01_multiplier && !opts_.multiplier_exact)
    throw InvalidInput("exact HitchinGlobal mode needs the multiplier as a rational polynomial");
}

const std::vector<std::shared_ptr<ExactRecursion::Local>>& ExactRecursion::locals(int N) {
  auto it = locals_.find(N);
  if (it != locals_.end()) return it->second;
  std::vector<std::shared_ptr<Local>> out;
  const RatFnQ& xf = curve_.x_exact();
  const RatFnQ& yf = curve_.y_exact();
  for (std::size_t k = 0; k < ram_.size(); ++k) {
    auto L = std::make_shared<Local>();
    L->index = static_cast<int>(k);
    L->a = ram_[k];
    L->order = N;
    const int M = N + 4;
    SeriesQ X = xf.series_at(L->a, M + 1);
    SeriesQ Y = yf.series_at(L->a, M);
    SeriesQ dX = X.derivative();
    L->t_ = SeriesQ::variable(M);
    L->sigma = involution_from_x(X);
    L->dsigma = L->sigma.derivative();
    SeriesQ Ys = Y.compose(L->sigma);
    SeriesQ factor = SeriesQ::constant(Rational(1), M);
    SeriesQ weight = SeriesQ::constant(Rational(1), M);
    if (opts_.kernel.variant == Variant::Twisted) {
      SeriesQ sx = curve_.twist().exact->compose(X);
      factor = sx.reciprocal();
      weight = sx;
    } else if (opts_.kernel.variant == Variant::HitchinGlobal && opts_.multiplier_exact) {
      SeriesQ mx = opts_.multiplier_exact->compose(X);
      if (sgn(mx.coeff(0)) == 0) throw InvalidInput("W01 multiplier vanishes at a ramification point");
      factor = mx;
      weight = mx.reciprocal();
    }
    L->omega = (Y - Ys) * dX * factor;
    L->w01_q = Y * dX * factor;
    L->w01_sq = Ys * dX * factor;
    L->weight_dxdy = weight / (dX * Y.derivative());
    SeriesQ d = L->t_ - L->sigma;
    L->b_diag = L->dsigma / (d * d);
    out.push_back(std::move(L));
  }
  return locals_.emplace(N, std::move(out)).first->second;
}

// Series of (a + w - a_k)^e for w = t (kind 0) or sigma(t) (kind 1).
static const SeriesQ& slot_power(std::map<std::tuple<int, int, int>, SeriesQ>& cache, const SeriesQ& w, int kind,
                                 int self, const Rational& a, int k, const Rational& ak, int e) {
  auto key = std::make_tuple(kind, k, e);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  SeriesQ s;
  if (k == self) {
    s = w.pow(e);
  } else {
    const Rational d = a - ak;
    SeriesQ base = w + SeriesQ::constant(d, w.truncation_order());
    s = base.pow(e);
  }
  return cache.emplace(key, std::move(s)).first->second;
}

ExactRecursion::TExpr ExactRecursion::substitute(const ExactExpr& e, const std::vector<int>& where,
                                                 const std::vector<int>& target, int out_slots, Local& L) {
  TExpr out;
  for (const auto& [key, c] : e.terms()) {
    SeriesQ s = SeriesQ::constant(c, L.t_.truncation_order());
    MonoKey k(static_cast<std::size_t>(out_slots));
    for (int i = 0; i < e.slots(); ++i) {
      const SlotFactor& f = key[static_cast<std::size_t>(i)];
      const int kind = where[static_cast<std::size_t>(i)];
      if (kind < 0) {
        k[static_cast<std::size_t>(target[static_cast<std::size_t>(i)])] = f;
      } else if (f.exp != 0) {
        s = s * slot_power(L.powers, L.w(kind), kind, L.index, L.a, f.ram, ram_[static_cast<std::size_t>(f.ram)], f.exp);
      }
    }
    accumulate(out, k, s);
  }
  return out;
}

namespace {

// B(a + w, z_j) = sum_m (m+1) w^m (z_j - a)^(-m-2). Terms m > mmax are dropped;
// callers keep mmax above the pole order of everything multiplied in.
std::map<MonoKey, SeriesQ> bergman_slot(const SeriesQ& w, int ram, int slot, int out_slots, int mmax) {
  std::map<MonoKey, SeriesQ> out;
  SeriesQ wm = SeriesQ::constant(Rational(1), w.truncation_order());
  for (int m = 0; m <= mmax; ++m) {
    MonoKey k(static_cast<std::size_t>(out_slots));
    k[static_cast<std::size_t>(slot)] = SlotFactor{ram, -m - 2};
    out.emplace(k, wm.scaled(Rational(m + 1)).truncated(mmax));
    wm = wm * w;
  }
  return out;
}

}  // namespace

ExactRecursion::TExpr ExactRecursion::bracket(int g, int n, Local& L, int N) {
  TExpr br;
  const int nJ = n - 1;
  auto add_all = [&](const TExpr& t) {
    for (const auto& [k, s] : t) accumulate(br, k, s);
  };
  // Left factor at q (no Jacobian), right factor at sigma(q) (times sigma').
  auto factor = [&](int gg, int mask, int kind) -> TExpr {
    std::vector<int> J;
    for (int j = 0; j < nJ; ++j)
      if (mask & (1 << j)) J.push_back(j + 1);
    const int nn = static_cast<int>(J.size()) + 1;
    if (gg == 0 && nn == 2) return bergman_slot(L.w(kind), L.index, J[0], n, N);
    const ExactExpr& e = w(gg, nn);
    std::vector<int> where(static_cast<std::size_t>(nn), -1), target(static_cast<std::size_t>(nn), 0);
    where[0] = kind;
    for (int i = 1; i < nn; ++i) target[static_cast<std::size_t>(i)] = J[static_cast<std::size_t>(i - 1)];
    return substitute(e, where, target, n, L);
  };

  if (g >= 1) {
    if (g == 1 && n == 1) {
      br.emplace(MonoKey(static_cast<std::size_t>(n)), L.b_diag);
    } else {
      const ExactExpr& e = w(g - 1, n + 1);
      std::vector<int> where(static_cast<std::size_t>(n + 1), -1), target(static_cast<std::size_t>(n + 1), 0);
      where[0] = 0;
      where[1] = 1;
      for (int i = 2; i <= n; ++i) target[static_cast<std::size_t>(i)] = i - 1;
      add_all(times(substitute(e, where, target, n, L), L.dsigma));
    }
  }
  const int full = (1 << nJ) - 1;
  for (int g1 = 0; g1 <= g; ++g1) {
    const int g2 = g - g1;
    for (int mask = 0; mask <= full; ++mask) {
      const int n1 = __builtin_popcount(static_cast<unsigned>(mask)) + 1;
      const int n2 = nJ - n1 + 2;
      const bool left_unstable = (g1 == 0 && n1 == 1), right_unstable = (g2 == 0 && n2 == 1);
      if (left_unstable || right_unstable) {
        if (!opts_.include_unstable_terms) continue;
        // Negative control: the (0, empty) partner is W01; the other factor is
        // the ordinary W(g, n) being computed, taken from a plain engine.
        if (!control_partner_) {
          RecursionOptions plain = opts_;
          plain.include_unstable_terms = false;
          control_partner_ = std::make_unique<ExactRecursion>(curve_, plain);
        }
        const ExactExpr& self = control_partner_->w(g, n);
        std::vector<int> where(static_cast<std::size_t>(n), -1), target(static_cast<std::size_t>(n), 0);
        for (int i = 1; i < n; ++i) target[static_cast<std::size_t>(i)] = i;
        if (left_unstable) {
          where[0] = 1;
          add_all(times(substitute(self, where, target, n, L), L.w01_q * L.dsigma));
        } else {
          where[0] = 0;
          add_all(times(substitute(self, where, target, n, L), L.w01_sq));
        }
        continue;
      }
      TExpr left = factor(g1, mask, 0);
      TExpr right = times(factor(g2, full & ~mask, 1), L.dsigma);
      add_all(product(left, right));
    }
  }
  return br;
}

ExactExpr ExactRecursion::compute(int g, int n, int N) {
  ExactExpr out(n);
  const auto& Ls = locals(N);
  std::optional<int> alpha_ram;
  if (opts_.kernel.base_point) {
    const cplx alpha = *opts_.kernel.base_point;
    for (std::size_t k = 0; k < ram_.size(); ++k)
      if (alpha.imag() == 0.0 && Rational(alpha.real()) == ram_[k]) alpha_ram = static_cast<int>(k);
    if (!alpha_ram) throw InvalidInput("exact mode supports a fixed base point only at a ramification point");
  }
  for (const auto& Lp : Ls) {
    Local& L = *Lp;
    TExpr br = bracket(g, n, L, N);
    int v = std::numeric_limits<int>::max();
    for (auto& [k, s] : br) {
      s = s.truncated(1);
      if (!s.is_zero()) v = std::min(v, s.lowest_order());
    }
    if (v == std::numeric_limits<int>::max()) continue;
    if (alpha_ram) {
      // 1/(alpha - z0) = -(z0 - alpha)^-1 times Res Br / Omega.
      SeriesQ inv = L.omega.reciprocal();
      for (const auto& [k, s] : br) {
        Rational r = (inv * s).residue();
        MonoKey kk = k;
        kk[0] = SlotFactor{*alpha_ram, -1};
        out.add(kk, -r);
      }
    }
    for (int m = 1; m <= 1 - v; ++m) {
      auto it = L.kernel.find(m);
      if (it == L.kernel.end()) {
        SeriesQ num = L.t_.pow(m);
        if (!alpha_ram) num = num - L.sigma.pow(m);
        it = L.kernel.emplace(m, num / L.omega).first;
      }
      for (const auto& [k, s] : br) {
        Rational r = (it->second * s).residue();
        MonoKey kk = k;
        kk[0] = SlotFactor{L.index, -m - 1};
        out.add(kk, r);
      }
    }
  }
  return out;
}

const ExactExpr& ExactRecursion::w(int g, int n) {
  if (g < 0 || n < 1 || !stable(g, n)) throw InvalidInput("exact mode stores stable W(g, n) only");
  const auto key = std::make_tuple(g, n, static_cast<int>(opts_.kernel.variant));
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  int N = opts_.series_order > 0 ? opts_.series_order : 4 * (3 * g - 2 + n) + 10;
  for (int attempt = 0;; ++attempt) {
    try {
      ExactExpr e = compute(g, n, N);
      return memo_.emplace(key, std::move(e)).first->second;
    } catch (const TruncationError&) {
      if (attempt >= 3) throw;
      N += 16;
    }
  }
}

ExactExpr ExactRecursion::w03_direct() {
  const int N = 12;
  const auto& Ls = locals(N);
  ExactExpr out(3);
  for (const auto& Lp : Ls) {
    const Local& L = *Lp;
    TExpr prod = bergman_slot(L.t_, L.index, 0, 3, 4);
    prod = product(prod, bergman_slot(L.t_, L.index, 1, 3, 4));
    prod = product(prod, bergman_slot(L.t_, L.index, 2, 3, 4));
    for (const auto& [k, s] : prod) out.add(k, (s * L.weight_dxdy).residue());
  }
  return out.scaled(Rational(kKernelNormalization));
}

cplx ExactRecursion::evaluate(int g, const std::vector<cplx>& z) {
  return w(g, static_cast<int>(z.size())).evaluate(z, ram_);
}

double ExactRecursion::oddness_defect(const ExactExpr& e) {
  double worst = 0.0;
  const int N = 16;
  const auto& Ls = locals(N);
  for (int slot = 0; slot < e.slots(); ++slot) {
    std::vector<int> where(static_cast<std::size_t>(e.slots()), -1), target(static_cast<std::size_t>(e.slots()));
    for (int i = 0; i < e.slots(); ++i) target[static_cast<std::size_t>(i)] = i;
    for (const auto& Lp : Ls) {
      where[static_cast<std::size_t>(slot)] = 0;
      TExpr a = substitute(e, where, target, e.slots(), *Lp);
      where[static_cast<std::size_t>(slot)] = 1;
      TExpr b = times(substitute(e, where, target, e.slots(), *Lp), Lp->dsigma);
      for (const auto& [k, s] : b) accumulate(a, k, s);
      for (const auto& [k, s] : a)
        for (int j = s.lowest_order(); j < 0; ++j) worst = std::max(worst, std::abs(s.coeff(j).get_d()));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Evaluable mode

NumericRecursion::NumericRecursion(std::shared_ptr<const EvalGeometry> geo, RecursionOptions opts)
    : geo_(std::move(geo)), opts_(std::move(opts)) {
  if (opts_.include_unstable_terms) throw InvalidInput("the negative control is available in exact mode only");
  for (const auto& r : geo_->ram()) kernels_.emplace_back(geo_, r, opts_.kernel);
}

double residue_radius(const EvalGeometry& geo, const RamPoint& r, const std::vector<CurvePoint>& avoid) {
  const double scale = geo.local_scale(r);
  double rad = std::isfinite(scale) ? 0.2 * scale : 1.0;
  for (const auto& p : avoid) {
    const double d = geo.local_distance(r, p);
    if (!(d > 0.0)) throw DomainError("argument sits at a ramification point");
    rad = std::min(rad, 0.5 * d);
  }
  return rad;
}

cplx checked_residue(const EvalGeometry& geo, const RamPoint& r, double radius,
                     const std::function<cplx(const LocalNode&)>& per_dt, int nodes, double tol,
                     double floor) {
  auto run = [&](int N, double* scale) {
    cplx acc{};
    double mag = 0.0;
    for (int j = 0; j < N; ++j) {
      const cplx t = std::polar(radius, 2.0 * kPi * j / N);
      const cplx v = t * per_dt(geo.node(r, t));
      acc += v;
      mag += std::abs(v);
    }
    *scale = mag / N;
    return acc / static_cast<double>(N);
  };
  double s1 = 0.0, s2 = 0.0;
  const cplx v1 = run(nodes, &s1);
  const cplx v2 = run(2 * nodes, &s2);
  if (std::abs(v2 - v1) > tol * std::abs(v2) + floor * s2)
    throw ConvergenceError("residue quadrature did not converge under node doubling");
  return v2;
}

cplx NumericRecursion::residue_sum(const RamPoint& r, const std::vector<CurvePoint>& args,
                                   const std::function<cplx(const LocalNode&)>& integrand) const {
  return checked_residue(*geo_, r, residue_radius(*geo_, r, args), integrand, opts_.nodes, opts_.tol);
}

cplx NumericRecursion::w(int g, const std::vector<CurvePoint>& p) const {
  std::vector<CurvePoint> q;
  q.reserve(p.size());
  for (const auto& x : p) q.push_back(geo_->prepare(x));
  return w_prepared(g, q);
}

cplx NumericRecursion::w_prepared(int g, const std::vector<CurvePoint>& p) const {
  const int n = static_cast<int>(p.size());
  if (g == 0 && n == 1) return w01_value(*geo_, p[0], opts_.kernel);
  if (g == 0 && n == 2) return geo_->bergman(p[0], p[1]);
  if (g < 0 || n < 1) throw InvalidInput("W(g, n) needs g >= 0 and n >= 1");
  const std::vector<CurvePoint> J(p.begin() + 1, p.end());
  const int nJ = n - 1;
  cplx total{};
  for (std::size_t k = 0; k < kernels_.size(); ++k) {
    const RamPoint& r = geo_->ram()[k];
    const RecursionKernel& K = kernels_[k];
    auto integrand = [&](const LocalNode& node) {
      cplx br{};
      if (g >= 1) {
        std::vector<CurvePoint> args{node.q, node.sq};
        args.insert(args.end(), J.begin(), J.end());
        br += w_prepared(g - 1, args);
      }
      const int full = (1 << nJ) - 1;
      for (int g1 = 0; g1 <= g; ++g1)
        for (int mask = 0; mask <= full; ++mask) {
          std::vector<CurvePoint> a{node.q}, b{node.sq};
          for (int j = 0; j < nJ; ++j) (mask & (1 << j) ? a : b).push_back(J[static_cast<std::size_t>(j)]);
          if ((g1 == 0 && a.size() == 1) || (g - g1 == 0 && b.size() == 1)) continue;
          br += w_prepared(g1, a) * w_prepared(g - g1, b);
        }
      return K.value(p[0], node) * br * node.sigma_jac * node.dcoord_dt;
    };
    total += residue_sum(r, p, integrand);
  }
  return total;
}

cplx NumericRecursion::w03_direct(const std::vector<CurvePoint>& p0) const {
  if (p0.size() != 3) throw InvalidInput("w03_direct takes three points");
  std::vector<CurvePoint> p;
  for (const auto& x : p0) p.push_back(geo_->prepare(x));
  cplx total{};
  for (const auto& r : geo_->ram()) {
    auto integrand = [&](const LocalNode& node) {
      cplx weight = 1.0;
      if (opts_.kernel.variant == Variant::Twisted) weight = geo_->s_at(node.q);
      if (opts_.kernel.variant == Variant::HitchinGlobal && opts_.kernel.w01_multiplier)
        weight = 1.0 / opts_.kernel.w01_multiplier(geo_->curve().x_of(node.q));
      const cplx bbb = geo_->bergman(node.q, p[0]) * geo_->bergman(node.q, p[1]) * geo_->bergman(node.q, p[2]);
      return weight * bbb / geo_->dxdy(node.q) * node.dcoord_dt;
    };
    total += residue_sum(r, p, integrand);
  }
  return static_cast<double>(kKernelNormalization) * total;
}

// ---------------------------------------------------------------------------
// Property checks

bool PropertyReport::pass() const {
  return symmetry_defect <= 1e-9 && oddness_defect <= 1e-9 && poles_only_at_ramification &&
         max_pole_order <= pole_bound && residue_free_at_infinity;
}

nlohmann::json PropertyReport::to_json() const {
  return {{"g", g},
          {"n", n},
          {"symmetry_defect", symmetry_defect},
          {"oddness_defect", oddness_defect},
          {"poles_only_at_ramification", poles_only_at_ramification},
          {"max_pole_order", max_pole_order},
          {"pole_bound", pole_bound},
          {"residue_free_at_infinity", residue_free_at_infinity},
          {"pass", pass()}};
}

PropertyReport check_properties(ExactRecursion& e, int g, int n) {
  PropertyReport rep;
  rep.g = g;
  rep.n = n;
  rep.pole_bound = 2 * (3 * g - 2 + n);
  const ExactExpr& W = e.w(g, n);
  for (int i = 1; i < n; ++i) {
    std::vector<int> swap(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) swap[static_cast<std::size_t>(j)] = j;
    std::swap(swap[0], swap[static_cast<std::size_t>(i)]);
    rep.symmetry_defect = std::max(rep.symmetry_defect, max_abs(W - W.relabel(swap, n)));
  }
  const int nram = static_cast<int>(e.ram_locations().size());
  for (const auto& [k, c] : W.terms())
    for (const auto& f : k) {
      if (f.exp > 0 || (f.exp < 0 && (f.ram < 0 || f.ram >= nram))) rep.poles_only_at_ramification = false;
      rep.max_pole_order = std::max(rep.max_pole_order, -f.exp);
    }
  // Holomorphic at infinity per dz: the (z - a)^-1 coefficients cancel.
  for (int i = 0; i < n; ++i) {
    std::map<MonoKey, Rational> sums;
    for (const auto& [k, c] : W.terms()) {
      if (k[static_cast<std::size_t>(i)].exp != -1) continue;
      MonoKey rest = k;
      rest[static_cast<std::size_t>(i)] = SlotFactor{};
      sums[rest] += c;
    }
    for (const auto& [k, c] : sums)
      if (sgn(c) != 0) rep.residue_free_at_infinity = false;
  }
  rep.oddness_defect = e.oddness_defect(W);
  return rep;
}

PropertyReport check_properties(const NumericRecursion& r, int g, const std::vector<std::vector<CurvePoint>>& samples) {
  PropertyReport rep;
  rep.g = g;
  rep.n = samples.empty() ? 0 : static_cast<int>(samples.front().size());
  const int n = rep.n;
  rep.pole_bound = 2 * (3 * g - 2 + n);
  const EvalGeometry& geo = r.geometry();
  const bool hyper = geo.curve().model() == ModelKind::Hyperelliptic;
  for (const auto& s : samples) {
    const cplx base = r.w(g, s);
    for (int i = 1; i < n; ++i) {
      auto t = s;
      std::swap(t[0], t[static_cast<std::size_t>(i)]);
      rep.symmetry_defect = std::max(rep.symmetry_defect, std::abs(r.w(g, t) - base) / std::abs(base));
    }
    if (hyper) {
      auto t = s;
      t[0] = geo.curve().involution(s[0]);
      rep.oddness_defect = std::max(rep.oddness_defect, std::abs(r.w(g, t) + base) / std::abs(base));
    }
  }
  // Growth probe near each ramification point, first slot.
  if (!samples.empty()) {
    const auto& s = samples.front();
    for (const auto& rp : geo.ram()) {
      double scale = geo.local_scale(rp);
      double t0 = 0.1 * (std::isfinite(scale) ? std::min(scale, 1.0) : 1.0);
      for (const auto& p : s) t0 = std::min(t0, 0.1 * geo.local_distance(rp, p));
      const cplx dir(0.6, 0.8);
      auto at = [&](double t) {
        LocalNode node = geo.node(rp, dir * t);
        auto u = s;
        u[0] = node.q;
        return std::pair{r.w(g, u) * node.dcoord_dt, node};
      };
      auto [w1, n1] = at(t0);
      auto [w2, n2] = at(0.5 * t0);
      const double ord = std::log2(std::abs(w2) / std::abs(w1));
      rep.max_pole_order = std::max(rep.max_pole_order, static_cast<int>(std::lround(ord)));
      if (!hyper) {
        // Polar part of W(q) + sigma^* W(q) on the circle |t| = t0.
        const int N = 32;
        std::vector<cplx> f(N);
        double wmax = 0.0;
        for (int j = 0; j < N; ++j) {
          LocalNode node = geo.node(rp, std::polar(t0, 2.0 * kPi * j / N));
          auto u = s, v = s;
          u[0] = node.q;
          v[0] = node.sq;
          const cplx wq = r.w(g, u);
          f[static_cast<std::size_t>(j)] = wq + r.w(g, v) * node.sigma_jac;
          wmax = std::max(wmax, std::abs(wq));
        }
        for (int k = 1; k < N / 2; ++k) {
          cplx c{};
          for (int j = 0; j < N; ++j) c += f[static_cast<std::size_t>(j)] * std::polar(1.0, 2.0 * kPi * j * k / N);
          c *= std::pow(t0, k) / static_cast<double>(N);  // coefficient of t^-k
          rep.oddness_defect = std::max(rep.oddness_defect, std::abs(c) * std::pow(t0, -k) / wmax);
        }
      }
    }
  }
  return rep;
}

}  // namespace ttr
