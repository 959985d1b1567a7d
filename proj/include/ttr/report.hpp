#pragma once

// Verification records, one JSON object per check.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttr/numeric.hpp"

namespace ttr {

nlohmann::json complex_json(cplx z);  // [re, im]
cplx complex_from_json(const nlohmann::json& j);

// Constants fixed by the m = 2 calibration and the kernel normalization.
nlohmann::json constants_resolved();

struct CheckRecord {
  std::string check;
  cplx lhs{}, rhs{};
  double rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json detail = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// Relative comparison. When abs_floor > 0 and both sides are below it, the
// record switches to |lhs - rhs| against abs_floor and detail.mode = "absolute".
CheckRecord compare(std::string check, cplx lhs, cplx rhs, double tol, double abs_floor = 0.0);

// Absolute comparison: rel_err holds |lhs - rhs| and detail.mode = "absolute".
CheckRecord compare_abs(std::string check, cplx lhs, cplx rhs, double tol);

// Failed record for a pipeline that raised.
CheckRecord failed_record(std::string check, const std::string& reason, double tol);

// True when j has exactly the record fields with the right types.
bool validate_record(const nlohmann::json& j, std::string* why = nullptr);

void write_jsonl(std::ostream& os, const std::vector<CheckRecord>& records);

}  // namespace ttr
