#include "ttr/periods.hpp"

#include <algorithm>
#include <cmath>

#include "ttr/elliptic.hpp"

namespace ttr {

namespace {

constexpr int kAbelOrder = 24;

double segment_distance(cplx a, cplx b, cplx z) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  double s = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + s * d));
}

cplx nearest_root(cplx square, cplx ref) {
  cplx r = std::sqrt(square);
  return std::abs(r - ref) <= std::abs(r + ref) ? r : -r;
}

// Coefficients of P(a + v) in v.
PolyC taylor_shift(const PolyC& P, cplx a) {
  std::vector<cplx> c = P.c;
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) c[static_cast<std::size_t>(j)] += a * c[static_cast<std::size_t>(j + 1)];
  return PolyC(std::move(c));
}

// Q(v) = P(a + v) / v for a root a of P.
PolyC deflate_at(const PolyC& P, cplx a) {
  PolyC sh = taylor_shift(P, a);
  std::vector<cplx> q(sh.c.begin() + 1, sh.c.end());
  return PolyC(std::move(q));
}

struct Polyline {
  std::vector<cplx> pts;
  cplx at(double S) const {
    std::size_t k = std::min(static_cast<std::size_t>(S), pts.size() - 2);
    double s = S - static_cast<double>(k);
    return pts[k] + s * (pts[k + 1] - pts[k]);
  }
  cplx deriv(double S) const {
    std::size_t k = std::min(static_cast<std::size_t>(S), pts.size() - 2);
    return pts[k + 1] - pts[k];
  }
  double pieces() const { return static_cast<double>(pts.size() - 1); }
  double clearance(const std::vector<cplx>& sing) const {
    double d = 1e300;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      for (const auto& s : sing) d = std::min(d, segment_distance(pts[k], pts[k + 1], s));
    return d;
  }
};

// Best route from 0 to +-W in a chart whose integrand is singular at sing.
// Returns the polyline and its relative clearance.
std::pair<Polyline, double> best_route(cplx W, const std::vector<cplx>& sing) {
  double scale = 1e300;
  for (const auto& s : sing) scale = std::min(scale, std::abs(s));
  if (sing.empty()) scale = 1.0;
  std::pair<Polyline, double> best{Polyline{{0.0, W}}, -1.0};
  for (int sign : {+1, -1}) {
    const cplx end = static_cast<double>(sign) * W;
    Polyline straight{{0.0, end}};
    double q = straight.clearance(sing) / scale;
    if (q > best.second) best = {straight, q};
  }
  if (best.second >= 0.2 || std::abs(W) == 0.0) return best;
  for (int sign : {+1, -1}) {
    const cplx end = static_cast<double>(sign) * W;
    const cplx nrm = kI * end / std::abs(end);
    for (double beta : {0.3, -0.3, 0.6, -0.6, 1.0, -1.0}) {
      Polyline p{{0.0, 0.5 * end + beta * std::abs(end) * nrm, end}};
      double q = p.clearance(sing) / scale;
      if (q > best.second) best = {p, q};
    }
  }
  return best;
}

struct RouteResult {
  cplx integral;  // of dx/y along the route
  cplx y_end;
};

// Integrates dx / y from a branch point along the chart coordinate w, where
// x = chart(w), y = yfac(w) * h(w), h^2 = H(w), dx/y = g(w) dw / h(w).
RouteResult integrate_route(const Polyline& path, const std::function<cplx(cplx)>& H, cplx h0,
                            const std::function<cplx(cplx)>& numerator, const std::function<cplx(cplx)>& yfac) {
  SheetTracker tr([&](double S) { return H(path.at(S)); }, 0.0, path.pieces(), h0, 64);
  auto f = [&](double S) { return numerator(path.at(S)) / tr(S) * path.deriv(S); };
  cplx total{};
  for (int k = 0; k < static_cast<int>(path.pieces()); ++k) total += integrate_adaptive(f, k, k + 1, 1e-14);
  const cplx wend = path.pts.back();
  return {total, yfac(wend) * tr.end_value()};
}

}  // namespace

PathPiece PathPiece::line(cplx a, cplx b) {
  PathPiece p;
  p.kind = Kind::Line;
  p.from = a;
  p.to = b;
  return p;
}

PathPiece PathPiece::arc(cplx c, double r, double t0, double t1) {
  PathPiece p;
  p.kind = Kind::Arc;
  p.center = c;
  p.radius = r;
  p.theta0 = t0;
  p.theta1 = t1;
  return p;
}

cplx PathPiece::at(double s) const {
  if (kind == Kind::Line) return from + s * (to - from);
  return center + std::polar(radius, theta0 + s * (theta1 - theta0));
}

cplx PathPiece::deriv(double s) const {
  if (kind == Kind::Line) return to - from;
  return kI * (theta1 - theta0) * std::polar(radius, theta0 + s * (theta1 - theta0));
}

PathPiece PathPiece::reversed() const {
  if (kind == Kind::Line) return line(to, from);
  return arc(center, radius, theta1, theta0);
}

double PathPiece::distance_to(cplx z) const {
  if (kind == Kind::Line) return segment_distance(from, to, z);
  const double span = theta1 - theta0;
  double phi = std::arg(z - center) - theta0;
  const double two_pi = 2.0 * kPi;
  if (span >= 0) {
    phi = std::fmod(phi, two_pi);
    if (phi < 0) phi += two_pi;
  } else {
    phi = std::fmod(phi, two_pi);
    if (phi > 0) phi -= two_pi;
  }
  if (std::abs(phi) <= std::abs(span)) return std::abs(std::abs(z - center) - radius);
  return std::min(std::abs(z - at(0.0)), std::abs(z - at(1.0)));
}

cplx Contour::at(double S) const {
  std::size_t k = std::min(static_cast<std::size_t>(std::max(S, 0.0)), pieces.size() - 1);
  return pieces[k].at(S - static_cast<double>(k));
}

cplx Contour::deriv(double S) const {
  std::size_t k = std::min(static_cast<std::size_t>(std::max(S, 0.0)), pieces.size() - 1);
  return pieces[k].deriv(S - static_cast<double>(k));
}

Contour Contour::reversed() const {
  Contour r;
  r.sheet = sheet;
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) r.pieces.push_back(it->reversed());
  return r;
}

double Contour::distance_to(cplx z) const {
  double d = 1e300;
  for (const auto& p : pieces) d = std::min(d, p.distance_to(z));
  return d;
}

nlohmann::json Contour::to_json() const {
  nlohmann::json arcs = nlohmann::json::array();
  for (const auto& p : pieces) {
    if (p.kind == PathPiece::Kind::Line)
      arcs.push_back({{"kind", "line"},
                      {"from", {p.from.real(), p.from.imag()}},
                      {"to", {p.to.real(), p.to.imag()}}});
    else
      arcs.push_back({{"kind", "arc"},
                      {"center", {p.center.real(), p.center.imag()}},
                      {"radius", p.radius},
                      {"span", {p.theta0, p.theta1}}});
  }
  return {{"sheet", sheet}, {"arcs", arcs}};
}

Contour Contour::from_json(const nlohmann::json& j) {
  Contour c;
  try {
    c.sheet = j.at("sheet").get<int>();
    auto pt = [](const nlohmann::json& a) { return cplx(a.at(0).get<double>(), a.at(1).get<double>()); };
    for (const auto& a : j.at("arcs")) {
      const std::string kind = a.at("kind").get<std::string>();
      if (kind == "line")
        c.pieces.push_back(PathPiece::line(pt(a.at("from")), pt(a.at("to"))));
      else if (kind == "arc")
        c.pieces.push_back(PathPiece::arc(pt(a.at("center")), a.at("radius").get<double>(),
                                          a.at("span").at(0).get<double>(), a.at("span").at(1).get<double>()));
      else
        throw InvalidInput("unknown arc kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed contour: ") + e.what());
  }
  if (c.pieces.empty()) throw InvalidInput("contour has no arcs");
  if (std::abs(c.pieces.front().at(0.0) - c.pieces.back().at(1.0)) > 1e-9) throw InvalidInput("contour is not closed");
  return c;
}

Contour stadium(cplx p, cplx q, double r) {
  const cplx d = (q - p) / std::abs(q - p);
  const cplx n = kI * d;
  const double a = std::arg(-n);
  Contour c;
  c.pieces.push_back(PathPiece::line(p - r * n, q - r * n));
  c.pieces.push_back(PathPiece::arc(q, r, a, a + kPi));
  c.pieces.push_back(PathPiece::line(q + r * n, p + r * n));
  c.pieces.push_back(PathPiece::arc(p, r, a + kPi, a + 2.0 * kPi));
  return c;
}

SheetTracker::SheetTracker(std::function<cplx(double)> square, double s0, double s1, cplx initial_root,
                           int initial_samples)
    : square_(std::move(square)) {
  s_.push_back(s0);
  roots_.push_back(initial_root);
  const double h = (s1 - s0) / initial_samples;
  for (int k = 1; k <= initial_samples; ++k) {
    const double target = (k == initial_samples) ? s1 : s0 + k * h;
    // Walk to target, bisecting while consecutive roots jump too far.
    std::vector<double> pending{target};
    while (!pending.empty()) {
      const double s = pending.back();
      const cplx prev = roots_.back();
      const cplx r = nearest_root(square_(s), prev);
      const double jump = std::abs(r - prev);
      if (jump > 0.25 * std::min(std::abs(r), std::abs(prev))) {
        const double mid = 0.5 * (s_.back() + s);
        if (std::abs(s - s_.back()) < 1e-12 * std::max(1.0, std::abs(s1 - s0)))
          throw ConvergenceError("sheet tracking failed: path passes through a branch point");
        pending.push_back(mid);
        continue;
      }
      s_.push_back(s);
      roots_.push_back(r);
      pending.pop_back();
    }
  }
}

cplx SheetTracker::operator()(double s) const {
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t k = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin() - 1);
  cplx ref = roots_[k];
  if (k + 1 < s_.size()) {
    const double f = (s - s_[k]) / (s_[k + 1] - s_[k]);
    ref = roots_[k] + f * (roots_[k + 1] - roots_[k]);
  }
  return nearest_root(square_(s), ref);
}

namespace {

SheetTracker contour_tracker(const Contour& c, const PolyC& P, std::optional<cplx> start_y) {
  const cplx y0 = std::sqrt(P(c.start()));
  const cplx init = start_y ? nearest_root(P(c.start()), *start_y) : static_cast<double>(c.sheet) * y0;
  return SheetTracker([&c, &P](double S) { return P(c.at(S)); }, 0.0, c.length_param(), init,
                      64 * static_cast<int>(c.pieces.size()));
}

}  // namespace

std::vector<PathNode> discretize(const Contour& c, const PolyC& P, const std::vector<QuadNode>& rule,
                                 std::optional<cplx> start_y) {
  SheetTracker tr = contour_tracker(c, P, start_y);
  std::vector<PathNode> out;
  out.reserve(rule.size());
  for (const auto& q : rule) out.push_back({c.at(q.s), tr(q.s), q.w * c.deriv(q.s)});
  return out;
}

std::vector<QuadNode> contour_rule(const Contour& c, const PolyC& P,
                                   const std::function<std::vector<cplx>(cplx, cplx)>& probe, double tol) {
  SheetTracker tr = contour_tracker(c, P, std::nullopt);
  std::vector<QuadNode> rule;
  for (std::size_t k = 0; k < c.pieces.size(); ++k) {
    auto f = [&](double S) {
      auto v = probe(c.at(S), tr(S));
      const cplx d = c.deriv(S);
      for (auto& x : v) x *= d;
      return v;
    };
    auto part = adaptive_rule(f, static_cast<double>(k), static_cast<double>(k + 1), tol);
    rule.insert(rule.end(), part.begin(), part.end());
  }
  return rule;
}

cplx integrate(const std::vector<PathNode>& nodes, const std::function<cplx(cplx, cplx)>& per_dx) {
  cplx acc{};
  for (const auto& n : nodes) acc += per_dx(n.x, n.y) * n.wdx;
  return acc;
}

namespace {

std::vector<QuadNode> reverse_rule(const std::vector<QuadNode>& rule, double total) {
  std::vector<QuadNode> r;
  for (auto it = rule.rbegin(); it != rule.rend(); ++it) r.push_back({total - it->s, it->w});
  return r;
}

std::vector<cplx> obstacles(const SpectralCurve& c, std::pair<int, int> pair) {
  std::vector<cplx> out;
  const auto& roots = c.branch_points();
  for (int k = 0; k < static_cast<int>(roots.size()); ++k)
    if (k != pair.first && k != pair.second) out.push_back(roots[static_cast<std::size_t>(k)]);
  for (const auto& z : c.twist_zero_coords()) out.push_back(z);
  return out;
}

int match_branch(const std::vector<cplx>& roots, cplx x) {
  int best = -1;
  double bd = 1e300;
  for (int k = 0; k < static_cast<int>(roots.size()); ++k) {
    double d = std::abs(roots[static_cast<std::size_t>(k)] - x);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  if (bd > 1e-6 * std::max(1.0, std::abs(x))) throw InvalidInput("requested cycle endpoint is not a branch point");
  return best;
}

}  // namespace

CycleBasis cycle_basis(const SpectralCurve& c, const CycleOptions& opts) {
  if (c.model() != ModelKind::Hyperelliptic || c.genus() != 1)
    throw InvalidInput("cycle basis requires a genus-1 hyperelliptic curve");
  const auto& roots = c.branch_points();
  CycleBasis cb;
  if (opts.a_pair) cb.a_pair = {match_branch(roots, opts.a_pair->first), match_branch(roots, opts.a_pair->second)};
  if (opts.b_pair) cb.b_pair = {match_branch(roots, opts.b_pair->first), match_branch(roots, opts.b_pair->second)};
  auto in = [](std::pair<int, int> p, int k) { return p.first == k || p.second == k; };
  int shared = 0;
  for (int k = 0; k < static_cast<int>(roots.size()); ++k) shared += in(cb.a_pair, k) && in(cb.b_pair, k);
  if (cb.a_pair.first == cb.a_pair.second || cb.b_pair.first == cb.b_pair.second || shared != 1)
    throw InvalidInput("A and B must encircle branch-point pairs sharing exactly one point");

  double dmin = 1e300;
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) dmin = std::min(dmin, std::abs(roots[i] - roots[j]));
  cb.separation = opts.separation * dmin;

  auto build = [&](std::pair<int, int> pr, double factor) {
    const cplx p = roots[static_cast<std::size_t>(pr.first)], q = roots[static_cast<std::size_t>(pr.second)];
    double clearance = 1e300;
    for (const auto& z : obstacles(c, pr)) clearance = std::min(clearance, segment_distance(p, q, z));
    const double r = factor * clearance;
    if (r < cb.separation || clearance - r < cb.separation)
      throw InvalidInput("corridor violation: a branch point or twist zero lies too close to the cycle around (" +
                         std::to_string(p.real()) + "," + std::to_string(p.imag()) + ")-(" +
                         std::to_string(q.real()) + "," + std::to_string(q.imag()) + ")");
    return stadium(p, q, r);
  };
  cb.a = build(cb.a_pair, opts.radius_factor);
  cb.b = build(cb.b_pair, 0.8 * opts.radius_factor);

  const PolyC& P = c.P();
  std::optional<PolyC> s;
  if (c.has_twist()) s = c.twist().s;
  auto probe = [&](cplx x, cplx y) {
    std::vector<cplx> v{1.0 / y};
    if (s) v.push_back(y / (*s)(x));
    return v;
  };
  cb.rule_a = contour_rule(cb.a, P, probe, opts.tol);
  cb.rule_b = contour_rule(cb.b, P, probe, opts.tol);

  PeriodData pd = periods_on(cb, P);
  if (pd.tau.imag() < 0.0) {
    cb.b = cb.b.reversed();
    cb.rule_b = reverse_rule(cb.rule_b, cb.b.length_param());
  }
  return cb;
}

void check_corridor(const CycleBasis& cb, const std::vector<cplx>& points) {
  for (const auto& z : points)
    if (cb.a.distance_to(z) < cb.separation || cb.b.distance_to(z) < cb.separation)
      throw InvalidInput("corridor violation: a cycle passes too close to a marked point");
}

PeriodData periods_on(const CycleBasis& cb, const PolyC& P, std::optional<cplx> a_start_y,
                      std::optional<cplx> b_start_y) {
  PeriodData pd;
  auto inv_y = [](cplx, cplx y) { return 1.0 / y; };
  pd.omega_a = integrate(discretize(cb.a, P, cb.rule_a, a_start_y), inv_y);
  pd.omega_b = integrate(discretize(cb.b, P, cb.rule_b, b_start_y), inv_y);
  if (std::abs(pd.omega_a) < 1e-300) throw ConvergenceError("vanishing A-period of dx/y");
  pd.tau = pd.omega_b / pd.omega_a;
  return pd;
}

PeriodData period_data(const SpectralCurve& c, const CycleBasis& cb) { return periods_on(cb, c.P()); }

cplx normalized_v(const PeriodData& pd, cplx y) { return 1.0 / (pd.omega_a * y); }

Uniformization::Uniformization(const SpectralCurve& c, const CycleBasis& cb) : Uniformization(c, period_data(c, cb)) {
  basis_ = cb;
}

Uniformization::Uniformization(const SpectralCurve& c, const PeriodData& pd) : curve_(c), pd_(pd) {
  if (pd.tau.imag() <= 0.0) throw DomainError("period ratio must have positive imaginary part");
  const auto& ram = c.ramification_points();
  const auto& roots = c.branch_points();
  images_.assign(ram.size(), cplx{});
  // Finite branch points: meet a route from e0 at an intermediate point.
  for (std::size_t k = 1; k < roots.size(); ++k) {
    const cplx e0 = roots[0], ek = roots[k];
    cplx best_m{};
    double best_d = -1.0;
    for (double beta : {0.0, 0.25, -0.25, 0.5, -0.5}) {
      const cplx m = 0.5 * (e0 + ek) + kI * beta * (ek - e0);
      double d = 1e300;
      for (const auto& e : roots) d = std::min(d, std::abs(m - e));
      if (d > best_d + 1e-12) {
        best_d = d;
        best_m = m;
      }
    }
    const cplx ym = std::sqrt(c.P()(best_m));
    bool m0 = false, mk = false;
    const cplx u_m = route_from(0, best_m, ym, &m0);
    const cplx i_k = route_from(static_cast<int>(k), best_m, ym, &mk);
    images_[k] = u_m - i_k;  // route_from already applied the sheet sign relative to e_k
  }
  if (c.branch_at_infinity()) {
    double R = 2.0;
    for (const auto& e : roots) R = std::max(R, 2.0 * std::abs(e) + 2.0);
    cplx best_m{};
    double best_d = -1.0;
    for (int j = 0; j < 8; ++j) {
      const cplx m = std::polar(R, 2.0 * kPi * (j + 0.5) / 8.0);
      double d = 1e300;
      for (const auto& e : roots) d = std::min(d, std::abs(m - e));
      if (d > best_d) {
        best_d = d;
        best_m = m;
      }
    }
    images_[ram.size() - 1] = abel_from_infinity(best_m, std::sqrt(c.P()(best_m)));
  }
  // Local Abel series at each ramification point.
  for (const auto& r : ram) {
    LocalFrame f = c.ram_frame(r, kAbelOrder);
    SeriesC h = r.at_infinity ? f.y.shifted(3) : f.y.shifted(-1);
    const double sign = r.at_infinity ? -2.0 : 2.0;
    local_.push_back((SeriesC::constant(cplx(sign) / pd_.omega_a, kAbelOrder) / h).antiderivative());
  }
  const int n = 128;
  cplx mean{};
  for (int k = 0; k < n; ++k) mean += elliptic::weierstrass_p(0.5 * pd_.tau + static_cast<double>(k) / n, pd_.tau);
  c_ = -mean / static_cast<double>(n);
  const elliptic::Theta z = elliptic::theta1(cplx{}, pd_.tau);
  drift_ = c_ + z.d3 / (3.0 * z.d1);
}

cplx Uniformization::route_from(int k, cplx x, cplx y, bool* matched) const {
  const auto& roots = curve_.branch_points();
  const cplx ek = roots[static_cast<std::size_t>(k)];
  const PolyC Q = deflate_at(curve_.P(), ek);
  std::vector<cplx> sing;
  for (std::size_t j = 0; j < roots.size(); ++j)
    if (static_cast<int>(j) != k) {
      const cplx s = std::sqrt(roots[j] - ek);
      sing.push_back(s);
      sing.push_back(-s);
    }
  const cplx W = std::sqrt(x - ek);
  auto [path, quality] = best_route(W, sing);
  (void)quality;
  auto H = [&Q](cplx w) { return Q(w * w); };
  const cplx h0 = std::sqrt(Q(cplx{}));
  auto num = [](cplx) { return cplx(2.0); };
  auto yfac = [](cplx w) { return w; };
  RouteResult rr = integrate_route(path, H, h0, num, yfac);
  const bool same = std::abs(rr.y_end - y) <= std::abs(rr.y_end + y);
  if (matched) *matched = same;
  const cplx I = rr.integral / pd_.omega_a;
  return (k == 0 ? cplx{} : images_[static_cast<std::size_t>(k)]) + (same ? I : -I);
}

cplx Uniformization::abel_from_infinity(cplx x_mid, cplx y_mid) const {
  const PolyC& P = curve_.P();
  const cplx u_m = abel(x_mid, y_mid);
  // x = t^-2, y = t^-3 h(t), h^2 = Q(t^2) with Q(w) = w^3 P(1/w); dx/y = -2 dt / h.
  std::vector<cplx> qc(4);
  for (int k = 0; k <= 3; ++k) qc[static_cast<std::size_t>(k)] = P.c[static_cast<std::size_t>(3 - k)];
  const PolyC Q(qc);
  std::vector<cplx> sing;
  for (const auto& e : curve_.branch_points()) {
    const cplx s = 1.0 / std::sqrt(e);
    sing.push_back(s);
    sing.push_back(-s);
  }
  const cplx T = 1.0 / std::sqrt(x_mid);
  auto [path, quality] = best_route(T, sing);
  (void)quality;
  RouteResult rr = integrate_route(
      path, [&Q](cplx t) { return Q(t * t); }, std::sqrt(Q(cplx{})), [](cplx) { return cplx(-2.0); },
      [](cplx t) { return 1.0 / (t * t * t); });
  const bool same = std::abs(rr.y_end - y_mid) <= std::abs(rr.y_end + y_mid);
  const cplx I = rr.integral / pd_.omega_a;
  return same ? u_m - I : u_m + I;
}

cplx Uniformization::abel(cplx x, cplx y) const {
  const auto& roots = curve_.branch_points();
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (std::abs(x - roots[k]) < 1e-14 * std::max(1.0, std::abs(x))) return images_[k];
  // Pick the branch point with the cleanest route.
  int best_k = 0;
  double best_q = -1.0;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    std::vector<cplx> sing;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != k) {
        const cplx s = std::sqrt(roots[j] - roots[k]);
        sing.push_back(s);
        sing.push_back(-s);
      }
    double q = best_route(std::sqrt(x - roots[k]), sing).second;
    if (q > best_q + 1e-9) {
      best_q = q;
      best_k = static_cast<int>(k);
    }
  }
  return route_from(best_k, x, y, nullptr);
}

CurvePoint Uniformization::attach(CurvePoint p) const {
  p.flat = abel(p.coord, p.y);
  return p;
}

cplx Uniformization::branch_image(const RamPoint& r) const { return images_.at(static_cast<std::size_t>(r.index)); }

const SeriesC& Uniformization::local_abel_series(const RamPoint& r) const {
  return local_.at(static_cast<std::size_t>(r.index));
}

cplx Uniformization::reduce(cplx w) const { return elliptic::reduce(w, pd_.tau).w; }

double Uniformization::lattice_distance(cplx w) const {
  const cplx r = reduce(w);
  double d = 1e300;
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) d = std::min(d, std::abs(r - static_cast<double>(m) - static_cast<double>(n) * pd_.tau));
  return d;
}

cplx Uniformization::flat_kernel(cplx w) const { return elliptic::log_theta_dd(reduce(w), pd_.tau) + drift_; }

cplx Uniformization::flat_primitive(cplx w) const { return -elliptic::log_theta_d(w, pd_.tau) + drift_ * w; }

OneForm theta_form(const SpectralCurve& c) {
  if (!c.has_twist()) throw InvalidInput("twisted canonical form needs a twist section");
  if (c.model() != ModelKind::Hyperelliptic) throw InvalidInput("twisted canonical form is implemented for y^2 = P(x)");
  OneForm f;
  const PolyC s = c.twist().s;
  f.eval = [s](cplx x, cplx y) { return y / s(x); };
  const PolyC ds = s.derivative();
  for (const auto& z : c.twist_zero_coords()) {
    f.b_divisor.push_back(z);
    const cplx y0 = std::sqrt(c.P()(z));
    f.poles.push_back({z, y0, 1, y0 / ds(z)});
    f.poles.push_back({z, -y0, 1, -y0 / ds(z)});
  }
  return f;
}

cplx lambda_coordinate(const CycleBasis& cb, const PolyC& P, const PolyC& s, std::optional<cplx> a_start_y) {
  return integrate(discretize(cb.a, P, cb.rule_a, a_start_y), [&s](cplx x, cplx y) { return y / s(x); });
}

std::vector<cplx> lambda_coordinates(const SpectralCurve& c, const CycleBasis& cb) {
  const PolyC one(std::vector<cplx>{cplx(1.0)});
  if (c.has_twist()) {
    for (const auto& z : c.twist_zero_coords())
      if (cb.a.distance_to(z) < cb.separation) throw InvalidInput("corridor violation: A-cycle meets a twist zero");
    return {lambda_coordinate(cb, c.P(), c.twist().s)};
  }
  return {lambda_coordinate(cb, c.P(), one)};
}

}  // namespace ttr
