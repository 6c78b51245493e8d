#pragma once

// One verification outcome in the JSON form
//   {check, params, lhs, rhs, rel_gap, certified_error, pass}.
// lhs and rhs are numbers when real and [re, im] pairs otherwise.

#include <string>
#include <vector>

#include <json.hpp>

#include "cuspsum/decomposition.hpp"
#include "cuspsum/forms.hpp"
#include "cuspsum/mellin.hpp"

namespace cuspsum {

struct CheckReport {
  std::string check;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  special::Complex lhs;
  special::Complex rhs;
  double rel_gap = 0;
  double certified_error = 0;
  bool pass = false;
};

nlohmann::ordered_json to_json(const CheckReport& r);

// Non-finite doubles become null.
nlohmann::ordered_json json_number(double x);
nlohmann::ordered_json json_complex(special::Complex z);

CheckReport kernel_report(const mellin::KernelParams& p, const mellin::KernelIntegral& q, double tolerance);
CheckReport transform_report(const mellin::TransformReport& r);
CheckReport decomposition_report(const mellin::DecompositionReport& r, int weight);
// lhs = rhs = number of failures, certified_error 0.
CheckReport hecke_check_report(const forms::HeckeReport& r, int weight);

// {"suite": name, "pass": all passed, "checks": [...]}
nlohmann::ordered_json suite_json(const std::string& suite, const std::vector<CheckReport>& checks);

}  // namespace cuspsum
