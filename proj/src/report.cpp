#include "ttr/report.hpp"

#include <ostream>

namespace ttr {

using nlohmann::json;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InvalidInput("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json constants_resolved() {
  return {{"b_period_of_bergman", "2*pi*i*v"},
          {"double_b_period_of_bergman", "2*pi*i*tau"},
          {"taylor_prefactor", "-(i/(2*pi))^(m-1)"},
          {"dm_residue_prefactor", "-2*pi*i"},
          {"kernel_normalization", -2}};
}

json CheckRecord::to_json() const {
  json j = {{"check", check},
            {"lhs", complex_json(lhs)},
            {"rhs", complex_json(rhs)},
            {"rel_err", rel_err},
            {"tolerance", tolerance},
            {"pass", pass},
            {"constants_resolved", constants_resolved()}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

CheckRecord compare(std::string check, cplx lhs, cplx rhs, double tol, double abs_floor) {
  CheckRecord r;
  r.check = std::move(check);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tol;
  r.rel_err = rel_err(lhs, rhs);
  if (abs_floor > 0.0 && std::abs(lhs) < abs_floor && std::abs(rhs) < abs_floor) {
    // Both sides are at round-off level: compare absolutely against the floor.
    r.detail["mode"] = "absolute";
    r.detail["relative_error"] = r.rel_err;
    r.detail["relative_tolerance"] = tol;
    r.rel_err = std::abs(lhs - rhs);
    r.tolerance = abs_floor;
    r.pass = r.rel_err < abs_floor;
  } else {
    r.pass = r.rel_err < tol;
  }
  return r;
}

CheckRecord compare_abs(std::string check, cplx lhs, cplx rhs, double tol) {
  CheckRecord r;
  r.check = std::move(check);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tol;
  r.rel_err = std::abs(lhs - rhs);
  r.pass = r.rel_err < tol;
  r.detail["mode"] = "absolute";
  return r;
}

CheckRecord failed_record(std::string check, const std::string& reason, double tol) {
  CheckRecord r;
  r.check = std::move(check);
  r.rel_err = 1.0;
  r.tolerance = tol;
  r.pass = false;
  r.detail["error"] = reason;
  return r;
}

bool validate_record(const json& j, std::string* why) {
  auto fail = [&](const char* m) {
    if (why) *why = m;
    return false;
  };
  if (!j.is_object()) return fail("not an object");
  for (const char* k : {"check", "lhs", "rhs", "rel_err", "tolerance", "pass", "constants_resolved"})
    if (!j.contains(k)) return fail("missing field");
  if (!j["check"].is_string()) return fail("check must be a string");
  for (const char* k : {"lhs", "rhs"})
    if (!j[k].is_array() || j[k].size() != 2 || !j[k][0].is_number() || !j[k][1].is_number())
      return fail("lhs/rhs must be [re, im]");
  if (!j["rel_err"].is_number() || !j["tolerance"].is_number()) return fail("rel_err/tolerance must be numbers");
  if (!(j["tolerance"].get<double>() > 0.0)) return fail("tolerance must be positive");
  if (!j["pass"].is_boolean()) return fail("pass must be boolean");
  if (!j["constants_resolved"].is_object()) return fail("constants_resolved must be an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "check" && k != "lhs" && k != "rhs" && k != "rel_err" && k != "tolerance" && k != "pass" &&
        k != "constants_resolved" && k != "detail")
      return fail("unexpected field");
  }
  return true;
}

void write_jsonl(std::ostream& os, const std::vector<CheckRecord>& records) {
  for (const auto& r : records) os << r.to_json().dump() << '\n';
}

}  // namespace ttr
