#include "ttr/deform.hpp"

#include <array>

#include "ttr/recursion.hpp"

namespace ttr {

using nlohmann::json;

namespace {

PolyC constant_poly(cplx k) { return PolyC(std::vector<cplx>{k}); }

cplx nearest_sign(cplx r, cplx y0) { return std::abs(r - y0) <= std::abs(-r - y0) ? r : -r; }

double min_separation(const std::vector<cplx>& z) {
  double d = 1e300;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) d = std::min(d, std::abs(z[i] - z[j]));
  return d;
}

}  // namespace

CurveFamily::CurveFamily(SpectralCurve base, cplx direction, FamilyOptions opts)
    : base_(std::move(base)), c_(direction), opts_(std::move(opts)) {
  if (base_.model() != ModelKind::Hyperelliptic || base_.genus() != 1)
    throw InvalidInput("curve families are implemented for genus-1 curves y^2 = P(x)");
  if (!base_.has_twist()) throw InvalidInput("curve family needs a twist section");
  if (!(opts_.radius > 0.0) || !(opts_.step > 0.0)) throw InvalidInput("family radius and step must be positive");
  if (opts_.step > opts_.radius) throw InvalidInput("finite-difference step exceeds the admissibility radius");
  if (std::abs(c_) == 0.0) throw InvalidInput("family direction must be nonzero");
  cb_ = cycle_basis(base_, opts_.cycles);
  const PolyC& P = base_.P();
  a_y0_ = static_cast<double>(cb_.a.sheet) * std::sqrt(P(cb_.a.start()));
  b_y0_ = static_cast<double>(cb_.b.sheet) * std::sqrt(P(cb_.b.start()));
  check_admissible();
}

PolyC CurveFamily::P_at(cplx t) const { return base_.P() - constant_poly(phi(t) * c_) * twist(); }

SpectralCurve CurveFamily::curve_at(cplx t) const { return SpectralCurve::hyperelliptic(P_at(t), base_.twist()); }

cplx CurveFamily::y_at(cplx t, cplx x, cplx y0) const { return nearest_sign(std::sqrt(P_at(t)(x)), y0); }

CurvePoint CurveFamily::point_at(cplx t, const CurvePoint& p) const {
  CurvePoint q;
  q.coord = p.coord;
  q.y = y_at(t, p.coord, p.y);
  return q;
}

PeriodData CurveFamily::periods_at(cplx t) const {
  const PolyC P = P_at(t);
  return periods_on(cb_, P, nearest_sign(std::sqrt(P(cb_.a.start())), a_y0_),
                    nearest_sign(std::sqrt(P(cb_.b.start())), b_y0_));
}

cplx CurveFamily::lambda_at(cplx t) const {
  const PolyC P = P_at(t);
  return lambda_coordinate(cb_, P, twist(), nearest_sign(std::sqrt(P(cb_.a.start())), a_y0_));
}

std::shared_ptr<const Uniformization> CurveFamily::uniformization_at(cplx t) const {
  return std::make_shared<Uniformization>(curve_at(t), periods_at(t));
}

void CurveFamily::check_admissible() const {
  const auto& base_roots = base_.branch_points();
  const double sep0 = min_separation(base_roots);
  const int n = std::max(4, opts_.admissibility_samples);
  for (double frac : {0.5, 1.0}) {
    for (int k = 0; k < n; ++k) {
      const cplx t = std::polar(frac * opts_.radius, 2.0 * kPi * k / n);
      const PolyC P = P_at(t);
      if (P.degree() != base_.P().degree() || std::abs(P.leading()) < 1e-10 * std::abs(base_.P().leading()))
        throw InvalidInput("family leaves the curve degree within the admissibility radius");
      std::vector<cplx> roots;
      try {
        roots = SpectralCurve::hyperelliptic(P).branch_points();
      } catch (const InvalidInput&) {
        throw InvalidInput("branch-point collision within the admissibility radius");
      }
      if (min_separation(roots) < 1e-8 * (1.0 + sep0))
        throw InvalidInput("branch-point collision within the admissibility radius");
      for (const auto& r : roots) {
        double d = 1e300;
        for (const auto& e : base_roots) d = std::min(d, std::abs(r - e));
        if (d > 0.5 * sep0) throw InvalidInput("branch points move too far within the admissibility radius");
      }
      try {
        check_corridor(cb_, roots);
      } catch (const InvalidInput&) {
        throw InvalidInput("branch points leave the cycle corridor within the admissibility radius");
      }
    }
  }
}

FdResult richardson(const std::function<std::vector<cplx>(double)>& f, double h) {
  const std::array<double, 4> ts{h, -h, 0.5 * h, -0.5 * h};
  std::array<std::vector<cplx>, 4> v;
  parallel_for(ts.size(), [&](std::size_t i) { v[i] = f(ts[i]); });
  FdResult r;
  for (std::size_t k = 0; k < v[0].size(); ++k) {
    const cplx d1 = (v[0][k] - v[1][k]) / (2.0 * h);
    const cplx d2 = (v[2][k] - v[3][k]) / h;
    r.central.push_back(d2);
    r.value.push_back((4.0 * d2 - d1) / 3.0);
  }
  return r;
}

json FdTau::to_json() const {
  json j = {{"dtau_dt", complex_json(dtau_dt)}, {"dlambda_dt", complex_json(dlambda_dt)}, {"step", step}};
  j["dtau_dlambda"] = dtau_dlambda ? complex_json(*dtau_dlambda) : json(nullptr);
  return j;
}

FdTau fd_tau(const CurveFamily& f, std::optional<double> step) {
  FdTau r;
  r.step = step.value_or(f.options().step);
  const FdResult d = richardson([&](double t) { return std::vector<cplx>{f.periods_at(t).tau, f.lambda_at(t)}; }, r.step);
  r.dtau_dt = d.value[0];
  r.dlambda_dt = d.value[1];
  if (std::abs(r.dlambda_dt) >= 1e-12) r.dtau_dlambda = r.dtau_dt / r.dlambda_dt;
  return r;
}

std::vector<RauchValues> rauch_values(const CurveFamily& f, const std::vector<std::pair<CurvePoint, CurvePoint>>& pq,
                                      std::optional<double> step) {
  const double h = step.value_or(f.options().step);
  const SpectralCurve& base = f.base();
  for (const auto& [p, q] : pq) {
    if (std::abs(p.coord - q.coord) < 1e-12 && std::abs(p.y - q.y) < 1e-12)
      throw InvalidInput("variation of B needs distinct points");
    for (const auto* z : {&p, &q}) {
      for (const auto& e : base.branch_points())
        if (std::abs(z->coord - e) < 1e-8) throw DomainError("point sits at a ramification point");
      if (std::abs(f.twist()(z->coord)) < 1e-12) throw DomainError("point sits on a twist zero");
    }
  }

  // Finite-difference side: B_t at fixed x of p and q.
  const FdResult lhs = richardson(
      [&](double t) {
        auto uni = f.uniformization_at(t);
        const SpectralCurve ct = f.curve_at(t);
        const Bidifferential B = bergman(ct, uni);
        std::vector<cplx> out;
        for (const auto& [p, q] : pq) out.push_back(B(f.point_at(t, p), f.point_at(t, q)));
        return out;
      },
      h);

  // Residue side at t = 0, delta Theta by finite differences at fixed x.
  auto uni0 = f.uniformization_at(0.0);
  auto geo = make_geometry(base, uni0);
  const PolyC& s = f.twist();
  std::vector<RauchValues> out;
  for (std::size_t k = 0; k < pq.size(); ++k) {
    const CurvePoint p = geo->prepare(pq[k].first), q = geo->prepare(pq[k].second);
    cplx rhs{};
    for (const auto& r : geo->ram()) {
      auto per_dt = [&](const LocalNode& n) {
        const cplx x = n.q.coord, y = n.q.y, sx = s(x);
        const cplx dtheta = richardson([&](double t) { return std::vector<cplx>{f.y_at(t, x, y) / sx}; }, h).value[0];
        return sx * dtheta * geo->bergman(n.q, p) * geo->bergman(n.q, q) / geo->dxdy(n.q) * n.dcoord_dt;
      };
      rhs += checked_residue(*geo, r, residue_radius(*geo, r, {p, q}), per_dt, 64, 1e-9, 1e-9);  // FD noise in delta Theta sets the floor
    }
    out.push_back({lhs.value[k], -rhs});
  }
  return out;
}

std::vector<CheckRecord> rauch_check(const CurveFamily& f, const std::vector<std::pair<CurvePoint, CurvePoint>>& pq,
                                     double tol) {
  std::vector<CheckRecord> recs;
  const auto vals = rauch_values(f, pq);
  for (std::size_t k = 0; k < pq.size(); ++k) {
    CheckRecord r = compare("rauch", vals[k].fd, vals[k].residue, tol, f.degenerate() ? 1e-8 : 0.0);
    r.detail["p"] = {{"x", complex_json(pq[k].first.coord)}, {"y", complex_json(pq[k].first.y)}};
    r.detail["q"] = {{"x", complex_json(pq[k].second.coord)}, {"y", complex_json(pq[k].second.y)}};
    r.detail["step"] = f.options().step;
    recs.push_back(std::move(r));
  }
  return recs;
}

cplx dm_residue(const CurveFamily& f, const DmOptions& o) {
  auto uni0 = f.uniformization_at(0.0);
  auto geo = make_geometry(f.base(), uni0);
  const cplx wa = uni0->omega_a();
  const PolyC& s = f.twist();
  cplx acc{};
  for (const auto& r : geo->ram()) {
    auto per_dt = [&](const LocalNode& n) {
      const cplx v = 1.0 / (wa * n.q.y);
      return s(n.q.coord) * v * v * v / geo->dxdy(n.q) * n.dcoord_dt;
    };
    acc += checked_residue(*geo, r, residue_radius(*geo, r, {}), per_dt, o.nodes, o.quad_tol);
  }
  return -kTwoPiI * acc;
}

namespace {

struct ResidueNode {
  CurvePoint q;
  cplx weight;  // t dcoord_dt s / (N dxdy)
};

std::vector<ResidueNode> residue_nodes(const EvalGeometry& geo, const PolyC& s, int N) {
  std::vector<ResidueNode> out;
  for (const auto& r : geo.ram()) {
    const double rad = residue_radius(geo, r, {});
    for (int j = 0; j < N; ++j) {
      const cplx t = std::polar(rad, 2.0 * kPi * j / N);
      const LocalNode n = geo.node(r, t);
      out.push_back({n.q, t * n.dcoord_dt * s(n.q.coord) / (static_cast<double>(N) * geo.dxdy(n.q))});
    }
  }
  return out;
}

// Nodes of a closed contour with the Abel coordinate attached.
std::vector<std::pair<CurvePoint, cplx>> contour_points(const Uniformization& uni, const std::vector<PathNode>& nodes) {
  std::vector<std::pair<CurvePoint, cplx>> out(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    CurvePoint p;
    p.coord = nodes[i].x;
    p.y = nodes[i].y;
    out[i] = {uni.attach(p), nodes[i].wdx};
  });
  return out;
}

}  // namespace

TripleIntegral dm_triple_integral(const CurveFamily& f, const DmOptions& o) {
  const SpectralCurve& base = f.base();
  auto uni0 = f.uniformization_at(0.0);
  auto geo = make_geometry(base, uni0);
  const PolyC& P = base.P();
  const PolyC& s = f.twist();
  const cplx wa = uni0->omega_a();
  const CycleBasis& cb = f.cycles();

  // b-cycle rule resolving B(., q) for q near the ramification points.
  std::vector<CurvePoint> samples;
  for (const auto& r : geo->ram()) {
    const double rad = residue_radius(*geo, r, {});
    for (double a : {0.0, 0.5 * kPi, kPi}) samples.push_back(geo->node(r, std::polar(rad, a)).q);
  }
  auto probe = [&](cplx x, cplx y) {
    std::vector<cplx> v{1.0 / y};
    CurvePoint p;
    p.coord = x;
    p.y = y;
    p = uni0->attach(p);
    for (const auto& q : samples) v.push_back(geo->bergman(p, q));
    return v;
  };
  const auto rule = contour_rule(cb.b, P, probe, 1e-12);
  const auto bnodes = contour_points(*uni0, discretize(cb.b, P, rule, static_cast<double>(cb.b.sheet) *
                                                                          std::sqrt(P(cb.b.start()))));

  TripleIntegral out{};
  std::array<cplx, 2> total{};
  std::array<double, 2> mag{};
  std::vector<ResidueNode> fine;
  std::vector<std::vector<cplx>> fine_rows;
  for (int pass = 0; pass < 2; ++pass) {
    const auto rn = residue_nodes(*geo, s, (pass + 1) * o.nodes);
    std::vector<cplx> terms(rn.size());
    std::vector<std::vector<cplx>> rows(rn.size());
    std::vector<double> defects(rn.size(), 0.0);
    parallel_for(rn.size(), [&](std::size_t j) {
      cplx I{};
      rows[j].resize(bnodes.size());
      for (std::size_t i = 0; i < bnodes.size(); ++i) {
        rows[j][i] = geo->bergman(rn[j].q, bnodes[i].first);
        I += rows[j][i] * bnodes[i].second;
      }
      const cplx expect = kTwoPiI / (wa * rn[j].q.y);
      defects[j] = std::abs(I - expect) / std::abs(expect);
      terms[j] = rn[j].weight * I * I * I;
    });
    for (std::size_t j = 0; j < rn.size(); ++j) {
      total[pass] += terms[j];
      mag[pass] += std::abs(terms[j]);
      out.b_period_defect = std::max(out.b_period_defect, defects[j]);
    }
    if (pass == 1) {
      fine = rn;
      fine_rows = std::move(rows);
    }
  }
  if (std::abs(total[1] - total[0]) > o.quad_tol * std::abs(total[1]) + 1e-13 * mag[1])
    throw ConvergenceError("triple b-cycle integral did not converge under node doubling");
  const cplx f2 = kI / (2.0 * kPi);
  out.value = -(f2 * f2) * total[1];

  // The cached sum is W03 at b-cycle nodes; compare with w03_direct there.
  RecursionOptions ro;
  ro.kernel.variant = Variant::Twisted;
  NumericRecursion rec(geo, ro);
  const std::size_t nb = bnodes.size();
  const std::array<std::array<std::size_t, 3>, 2> triples{{{0, nb / 3, (2 * nb) / 3}, {nb / 5, nb / 2, nb - 1}}};
  for (const auto& tr : triples) {
    cplx cached{};
    double scale = 0.0;
    for (std::size_t j = 0; j < fine.size(); ++j) {
      const cplx term = fine[j].weight * fine_rows[j][tr[0]] * fine_rows[j][tr[1]] * fine_rows[j][tr[2]];
      cached += term;
      scale += std::abs(term);
    }
    const cplx direct =
        rec.w03_direct({bnodes[tr[0]].first, bnodes[tr[1]].first, bnodes[tr[2]].first}) / double(kKernelNormalization);
    out.w03_spot_defect = std::max(out.w03_spot_defect, std::abs(cached - direct) / std::max(scale, std::abs(direct)));
  }
  return out;
}

std::vector<CheckRecord> CubicReport::records() const {
  std::vector<CheckRecord> recs;
  const std::array<std::pair<const char*, const std::optional<cplx>*>, 3> e{
      {{"c_fd", &c_fd}, {"c_res", &c_res}, {"c_int", &c_int}}};
  if (degenerate) {
    for (const auto& [name, v] : e) {
      if (*v)
        recs.push_back(compare(std::string("dm_cubic.") + name + "_vanishes", **v, 0.0, tol, abs_floor));
      else
        recs.push_back(failed_record(std::string("dm_cubic.") + name + "_vanishes", skipped.at(name), tol));
    }
    return recs;
  }
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const std::string name = std::string("dm_cubic.") + e[i].first + "_vs_" + e[j].first;
      if (*e[i].second && *e[j].second)
        recs.push_back(compare(name, **e[i].second, **e[j].second, tol));
      else
        recs.push_back(failed_record(name, "entry skipped", tol));
    }
  return recs;
}

bool CubicReport::pass() const {
  if (!skipped.empty()) return false;
  for (const auto& r : records())
    if (!r.pass) return false;
  return true;
}

json CubicReport::to_json() const {
  auto opt = [](const std::optional<cplx>& v) { return v ? complex_json(*v) : json(nullptr); };
  json j = {{"c_fd", opt(c_fd)},
            {"c_res", opt(c_res)},
            {"c_int", opt(c_int)},
            {"tolerance", tol},
            {"abs_floor", abs_floor},
            {"degenerate", degenerate},
            {"b_period_defect", b_period_defect},
            {"w03_spot_defect", w03_spot_defect},
            {"pass", pass()}};
  j["skipped"] = json::object();
  for (const auto& [k, v] : skipped) j["skipped"][k] = v;
  return j;
}

CubicReport dm_cubic(const CurveFamily& f, const DmOptions& o) {
  CubicReport rep;
  rep.tol = o.tol;
  rep.abs_floor = o.abs_floor;
  rep.degenerate = f.degenerate();
  try {
    const FdTau d = fd_tau(f);
    if (d.dtau_dlambda)
      rep.c_fd = *d.dtau_dlambda;
    else
      rep.skipped["c_fd"] = "singular coordinate: |d lambda/dt| below 1e-12";
  } catch (const std::exception& e) {
    rep.skipped["c_fd"] = e.what();
  }
  try {
    rep.c_res = dm_residue(f, o);
  } catch (const std::exception& e) {
    rep.skipped["c_res"] = e.what();
  }
  try {
    const TripleIntegral ti = dm_triple_integral(f, o);
    rep.c_int = ti.value;
    rep.b_period_defect = ti.b_period_defect;
    rep.w03_spot_defect = ti.w03_spot_defect;
  } catch (const std::exception& e) {
    rep.skipped["c_int"] = e.what();
  }
  return rep;
}

namespace {

// Second B-loop around the same branch pair, homologous to b and disjoint from it.
struct InnerLoop {
  Contour c;
  std::vector<QuadNode> rule;
  cplx start_y;
};

InnerLoop inner_b_loop(const CurveFamily& f, const Uniformization& uni, const std::vector<CurvePoint>& outer_samples) {
  const SpectralCurve& base = f.base();
  const CycleBasis& cb = f.cycles();
  const PolyC& P = base.P();
  double rb = 0.0;
  for (const auto& pc : cb.b.pieces)
    if (pc.kind == PathPiece::Kind::Arc) rb = pc.radius;
  const cplx e1 = base.branch_points()[static_cast<std::size_t>(cb.b_pair.first)];
  const cplx e2 = base.branch_points()[static_cast<std::size_t>(cb.b_pair.second)];
  const Contour base_loop = stadium(e1, e2, 0.6 * rb);
  const PeriodData pd = uni.periods();
  auto probe = [&](cplx x, cplx y) {
    std::vector<cplx> v{1.0 / y};
    CurvePoint p;
    p.coord = x;
    p.y = y;
    p = uni.attach(p);
    for (const auto& q : outer_samples)
      v.push_back(uni.flat_kernel(*p.flat - *q.flat) / (uni.omega_a() * uni.omega_a() * p.y * q.y));
    return v;
  };
  InnerLoop best;
  double best_err = 1e300;
  for (const Contour& c : {base_loop, base_loop.reversed()}) {
    const auto rule = contour_rule(c, P, probe, 1e-12);
    for (double sgn : {1.0, -1.0}) {
      const cplx y0 = sgn * std::sqrt(P(c.start()));
      const cplx w = integrate(discretize(c, P, rule, y0), [](cplx, cplx y) { return 1.0 / y; });
      const double err = rel_err(w, pd.omega_b);
      if (err < best_err) {
        best_err = err;
        best = {c, rule, y0};
      }
    }
  }
  if (best_err > 1e-8) throw ConvergenceError("no homologous inner B-loop found");
  return best;
}

}  // namespace

CheckRecord taylor_check(const CurveFamily& f, int m, double tol) {
  const cplx f2 = kI / (2.0 * kPi);
  if (m == 2) {
    try {
      auto uni = f.uniformization_at(0.0);
      const SpectralCurve& base = f.base();
      const PolyC& P = base.P();
      const CycleBasis& cb = f.cycles();
      const auto coarse = contour_points(
          *uni, discretize(cb.b, P, cb.rule_b, static_cast<double>(cb.b.sheet) * std::sqrt(P(cb.b.start()))));
      std::vector<CurvePoint> samples;
      for (std::size_t i = 0; i < coarse.size(); i += std::max<std::size_t>(1, coarse.size() / 8))
        samples.push_back(coarse[i].first);
      const InnerLoop inner = inner_b_loop(f, *uni, samples);
      const auto in_pts = contour_points(*uni, discretize(inner.c, P, inner.rule, inner.start_y));
      std::vector<CurvePoint> in_samples;
      for (std::size_t i = 0; i < in_pts.size(); i += std::max<std::size_t>(1, in_pts.size() / 8))
        in_samples.push_back(in_pts[i].first);
      auto probe = [&](cplx x, cplx y) {
        std::vector<cplx> v{1.0 / y};
        CurvePoint p;
        p.coord = x;
        p.y = y;
        p = uni->attach(p);
        for (const auto& q : in_samples)
          v.push_back(uni->flat_kernel(*p.flat - *q.flat) / (uni->omega_a() * uni->omega_a() * p.y * q.y));
        return v;
      };
      const auto out_pts = contour_points(
          *uni, discretize(cb.b, P, contour_rule(cb.b, P, probe, 1e-12),
                           static_cast<double>(cb.b.sheet) * std::sqrt(P(cb.b.start()))));
      const Bidifferential B = bergman(base, uni);
      std::vector<cplx> partial(out_pts.size());
      parallel_for(out_pts.size(), [&](std::size_t i) {
        cplx acc{};
        for (const auto& [q, w] : in_pts) acc += B(out_pts[i].first, q) * w;
        partial[i] = acc * out_pts[i].second;
      });
      cplx dbl{};
      for (const auto& v : partial) dbl += v;
      CheckRecord r = compare("taylor.m2", uni->tau(), -f2 * dbl, tol);
      r.detail["statement"] = "tau = -(i/2pi) oint_b oint_b' B";
      return r;
    } catch (const std::exception& e) {
      return failed_record("taylor.m2", e.what(), tol);
    }
  }
  if (m != 3) throw InvalidInput("taylor_check supports m = 2 and m = 3");
  try {
    const FdTau d = fd_tau(f);
    if (!d.dtau_dlambda) return failed_record("taylor.m3", "singular coordinate: |d lambda/dt| below 1e-12", tol);
    const TripleIntegral ti = dm_triple_integral(f);
    CheckRecord r = compare("taylor.m3", *d.dtau_dlambda, ti.value, tol, f.degenerate() ? 1e-8 : 0.0);
    r.detail["statement"] = "d tau / d lambda = -(i/2pi)^2 oint_b oint_b oint_b W03";
    r.detail["fd"] = d.to_json();
    r.detail["b_period_defect"] = ti.b_period_defect;
    r.detail["w03_spot_defect"] = ti.w03_spot_defect;
    return r;
  } catch (const std::exception& e) {
    return failed_record("taylor.m3", e.what(), tol);
  }
}

json s_independence(const PolyC& P0, const PolyC& s1, const PolyC& s2, cplx direction, FamilyOptions opts) {
  json j;
  std::array<std::optional<cplx>, 2> c;
  const std::array<const PolyC*, 2> ss{&s1, &s2};
  for (std::size_t k = 0; k < 2; ++k) {
    const std::string key = "c_fd_" + std::to_string(k + 1);
    try {
      const CurveFamily fam(SpectralCurve::hyperelliptic(P0, TwistSection::from_coefficients(*ss[k])), direction, opts);
      c[k] = fd_tau(fam).dtau_dlambda;
      j[key] = c[k] ? complex_json(*c[k]) : json(nullptr);
    } catch (const std::exception& e) {
      j[key] = nullptr;
      j[key + "_error"] = e.what();
    }
  }
  if (c[0] && c[1]) {
    j["ratio"] = complex_json(*c[0] / *c[1]);
    j["rel_diff"] = rel_err(*c[0], *c[1]);
  }
  j["asserted"] = false;
  return j;
}

}  // namespace ttr
