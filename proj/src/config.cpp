#include "ttr/config.hpp"

#include <algorithm>

#include "ttr/report.hpp"

namespace ttr {

using nlohmann::json;

namespace {

bool coefficient_exact(const json& v) { return v.is_number_integer() || v.is_string(); }

Rational coefficient_q(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) {
    try {
      Rational q(v.get<std::string>());
      q.canonicalize();
      return q;
    } catch (const std::exception&) {
      throw InvalidInput("malformed rational coefficient '" + v.get<std::string>() + "'");
    }
  }
  throw InvalidInput("coefficient is not exact");
}

cplx coefficient_c(const json& v) {
  if (coefficient_exact(v)) return to_cplx(coefficient_q(v));
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array()) return complex_from_json(v);
  throw InvalidInput("coefficient must be a number, a string p/q or [re, im]");
}

void require_list(const json& list) {
  if (!list.is_array() || list.empty()) throw InvalidInput("coefficient list must be a non-empty array");
}

json pair_json(const std::optional<std::pair<cplx, cplx>>& p) {
  if (!p) return nullptr;
  return json::array({complex_json(p->first), complex_json(p->second)});
}

std::optional<std::pair<cplx, cplx>> pair_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 2) throw InvalidInput("cycle pair must be [x1, x2]");
  return std::make_pair(coefficient_c(j[0]), coefficient_c(j[1]));
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("config field '") + key + "' has the wrong type");
  }
}

json named_curve(const std::string& name) {
  if (name == "airy") return {{"kind", "parametric"}, {"x", {{"num", {0, 0, 1}}, {"den", {1}}}}, {"y", {{"num", {0, 1}}, {"den", {1}}}}};
  if (name == "joukowski")
    return {{"kind", "parametric"}, {"x", {{"num", {1, 0, 1}}, {"den", {0, 1}}}}, {"y", {{"num", {0, 1}}, {"den", {1}}}}};
  if (name == "quartic") return {{"kind", "hyperelliptic"}, {"P", {-1, 0, 0, 0, 1}}};
  if (name == "lemniscatic") return {{"kind", "hyperelliptic"}, {"P", {0, -4, 0, 4}}};
  if (name == "equianharmonic") return {{"kind", "hyperelliptic"}, {"P", {-4, 0, 0, 4}}};
  throw InvalidInput("unknown named curve '" + name + "'");
}

}  // namespace

bool coefficients_exact(const json& list) {
  require_list(list);
  for (const auto& v : list)
    if (!coefficient_exact(v)) return false;
  return true;
}

PolyC poly_c_from_json(const json& list) {
  require_list(list);
  std::vector<cplx> c;
  for (const auto& v : list) c.push_back(coefficient_c(v));
  return PolyC(std::move(c));
}

PolyQ poly_q_from_json(const json& list) {
  require_list(list);
  std::vector<Rational> c;
  for (const auto& v : list) c.push_back(coefficient_q(v));
  return PolyQ(std::move(c));
}

SpectralCurve curve_from_json(const json& curve_in, const json& twist) {
  if (!curve_in.is_object() || !curve_in.contains("kind")) throw InvalidInput("curve must be an object with a kind");
  json curve = curve_in;
  if (curve["kind"] == "named") {
    if (!curve.contains("name") || !curve["name"].is_string()) throw InvalidInput("named curve needs a name");
    curve = named_curve(curve["name"].get<std::string>());
  }
  std::optional<TwistSection> tw;
  if (!twist.is_null())
    tw = coefficients_exact(twist) ? TwistSection::from_rational(poly_q_from_json(twist))
                                   : TwistSection::from_coefficients(poly_c_from_json(twist));
  const std::string kind = curve["kind"].is_string() ? curve["kind"].get<std::string>() : "";
  if (kind == "hyperelliptic") {
    if (!curve.contains("P")) throw InvalidInput("hyperelliptic curve needs P");
    return SpectralCurve::hyperelliptic(poly_c_from_json(curve["P"]), tw);
  }
  if (kind == "parametric") {
    for (const char* k : {"x", "y"})
      if (!curve.contains(k) || !curve[k].is_object() || !curve[k].contains("num"))
        throw InvalidInput("parametric curve needs x and y with num (and optional den)");
    auto den = [](const json& f) { return f.contains("den") ? f["den"] : json::array({1}); };
    const json &x = curve["x"], &y = curve["y"];
    const bool exact = coefficients_exact(x["num"]) && coefficients_exact(den(x)) && coefficients_exact(y["num"]) &&
                       coefficients_exact(den(y));
    if (exact)
      return SpectralCurve::parametric(RatFnQ{poly_q_from_json(x["num"]), poly_q_from_json(den(x))},
                                       RatFnQ{poly_q_from_json(y["num"]), poly_q_from_json(den(y))}, tw);
    return SpectralCurve::parametric(RatFnC{poly_c_from_json(x["num"]), poly_c_from_json(den(x))},
                                     RatFnC{poly_c_from_json(y["num"]), poly_c_from_json(den(y))}, tw);
  }
  throw InvalidInput("unknown curve kind '" + kind + "'");
}

KernelSpec kernel_spec(const RecursionConfig& r) {
  KernelSpec k;
  k.variant = parse_variant(r.variant);
  if (!r.multiplier.is_null()) {
    const PolyC m = poly_c_from_json(r.multiplier);
    k.w01_multiplier = [m](cplx x) { return m(x); };
  }
  return k;
}

std::optional<PolyQ> exact_multiplier(const RecursionConfig& r) {
  if (r.multiplier.is_null() || !coefficients_exact(r.multiplier)) return std::nullopt;
  return poly_q_from_json(r.multiplier);
}

RunConfig::RunConfig() {
  dims.rank = 2;
  dims.degree = -1;
  dims.genus = 0;
  dims.deg_l = 2;
}

void RunConfig::validate() const {
  if (command != "dims" && command != "recursion" && command != "periods" && command != "verify")
    throw InvalidInput("unknown command '" + command + "'");
  const Tolerances& t = tolerances;
  for (double v : {t.properties, t.properties_numeric, t.rauch, t.dm_cubic, t.taylor, t.taylor_m2, t.bergman_a, t.bergman_b, t.cauchy,
                   t.quadrature, t.degenerate_floor})
    if (!(v > 0.0)) throw InvalidInput("tolerances must be positive");
  const RecursionConfig& r = recursion;
  if (r.g < 0 || r.n < 1 || r.g_max < 0 || r.n_max < 1) throw InvalidInput("g must be >= 0 and n >= 1");
  if (2 * r.g - 2 + r.n > r.max_euler)
    throw InvalidInput("2g - 2 + n exceeds the configured bound " + std::to_string(r.max_euler));
  if (r.mode != "exact" && r.mode != "numeric") throw InvalidInput("mode must be exact or numeric");
  parse_variant(r.variant);
  if (r.contour_nodes < 8 || r.samples < 1 || r.series_order < 0) throw InvalidInput("node and sample counts too small");
  if (!(family.radius > 0.0) || !(family.step > 0.0) || family.pairs < 1) throw InvalidInput("bad family parameters");
  for (const auto& s : suite)
    if (s != "all" && s != "properties" && s != "rauch" && s != "dm-cubic" && s != "taylor" && s != "bergman-normalization")
      throw InvalidInput("unknown check '" + s + "'");
  if (threads < 1) throw InvalidInput("threads must be at least 1");
}

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  j["curve"] = curve;
  j["twist"] = twist;
  j["family"] = {{"direction", complex_json(family.direction)},
                 {"radius", family.radius},
                 {"step", family.step},
                 {"a_pair", pair_json(family.a_pair)},
                 {"b_pair", pair_json(family.b_pair)},
                 {"separation", family.separation},
                 {"pairs", family.pairs}};
  const RecursionConfig& r = recursion;
  j["recursion"] = {{"g", r.g},
                    {"n", r.n},
                    {"g_max", r.g_max},
                    {"n_max", r.n_max},
                    {"max_euler", r.max_euler},
                    {"variant", r.variant},
                    {"mode", r.mode},
                    {"series_order", r.series_order},
                    {"contour_nodes", r.contour_nodes},
                    {"samples", r.samples},
                    {"multiplier", r.multiplier}};
  j["dims"] = {{"rank", dims.rank},   {"degree", dims.degree},       {"genus", dims.genus},
               {"deg_l", dims.deg_l}, {"canonical", dims.canonical}, {"trace_free", dims.trace_free}};
  const Tolerances& t = tolerances;
  j["tolerances"] = {{"properties", t.properties}, {"properties_numeric", t.properties_numeric}, {"rauch", t.rauch},         {"dm_cubic", t.dm_cubic},
                     {"taylor", t.taylor},         {"taylor_m2", t.taylor_m2}, {"bergman_a", t.bergman_a},
                     {"bergman_b", t.bergman_b},   {"cauchy", t.cauchy},       {"quadrature", t.quadrature},
                     {"degenerate_floor", t.degenerate_floor}};
  j["suite"] = suite;
  j["output"] = {{"dir", output.dir}, {"report", output.report}, {"csv", output.csv}};
  j["seed"] = seed;
  j["threads"] = threads;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    static const char* known[] = {"command", "curve",  "twist",  "family", "recursion", "dims",
                                  "tolerances", "suite", "output", "seed", "threads"};
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw InvalidInput("unknown config field '" + k + "'");
  }
  RunConfig c;
  read(j, "command", c.command);
  if (j.contains("curve")) c.curve = j["curve"];
  if (j.contains("twist")) c.twist = j["twist"];
  if (j.contains("family")) {
    const json& f = j["family"];
    if (f.contains("direction")) c.family.direction = complex_from_json(f["direction"]);
    read(f, "radius", c.family.radius);
    read(f, "step", c.family.step);
    if (f.contains("a_pair")) c.family.a_pair = pair_from(f["a_pair"]);
    if (f.contains("b_pair")) c.family.b_pair = pair_from(f["b_pair"]);
    read(f, "separation", c.family.separation);
    read(f, "pairs", c.family.pairs);
  }
  if (j.contains("recursion")) {
    const json& r = j["recursion"];
    read(r, "g", c.recursion.g);
    read(r, "n", c.recursion.n);
    read(r, "g_max", c.recursion.g_max);
    read(r, "n_max", c.recursion.n_max);
    read(r, "max_euler", c.recursion.max_euler);
    read(r, "variant", c.recursion.variant);
    read(r, "mode", c.recursion.mode);
    read(r, "series_order", c.recursion.series_order);
    read(r, "contour_nodes", c.recursion.contour_nodes);
    read(r, "samples", c.recursion.samples);
    if (r.contains("multiplier")) c.recursion.multiplier = r["multiplier"];
  }
  if (j.contains("dims")) {
    const json& d = j["dims"];
    read(d, "rank", c.dims.rank);
    read(d, "degree", c.dims.degree);
    read(d, "genus", c.dims.genus);
    read(d, "deg_l", c.dims.deg_l);
    read(d, "canonical", c.dims.canonical);
    read(d, "trace_free", c.dims.trace_free);
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    read(t, "properties", c.tolerances.properties);
    read(t, "properties_numeric", c.tolerances.properties_numeric);
    read(t, "rauch", c.tolerances.rauch);
    read(t, "dm_cubic", c.tolerances.dm_cubic);
    read(t, "taylor", c.tolerances.taylor);
    read(t, "taylor_m2", c.tolerances.taylor_m2);
    read(t, "bergman_a", c.tolerances.bergman_a);
    read(t, "bergman_b", c.tolerances.bergman_b);
    read(t, "cauchy", c.tolerances.cauchy);
    read(t, "quadrature", c.tolerances.quadrature);
    read(t, "degenerate_floor", c.tolerances.degenerate_floor);
  }
  read(j, "suite", c.suite);
  if (j.contains("output")) {
    read(j["output"], "dir", c.output.dir);
    read(j["output"], "report", c.output.report);
    read(j["output"], "csv", c.output.csv);
  }
  read(j, "seed", c.seed);
  read(j, "threads", c.threads);
  return c;
}

}  // namespace ttr
