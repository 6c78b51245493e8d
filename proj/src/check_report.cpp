#include "cuspsum/check_report.hpp"

#include <algorithm>
#include <cmath>

namespace cuspsum {

nlohmann::ordered_json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::ordered_json json_complex(special::Complex z) {
  if (z.imag() == 0) return json_number(z.real());
  return nlohmann::ordered_json::array({json_number(z.real()), json_number(z.imag())});
}

nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["params"] = r.params;
  j["lhs"] = json_complex(r.lhs);
  j["rhs"] = json_complex(r.rhs);
  j["rel_gap"] = json_number(r.rel_gap);
  j["certified_error"] = json_number(r.certified_error);
  j["pass"] = r.pass;
  return j;
}

CheckReport kernel_report(const mellin::KernelParams& p, const mellin::KernelIntegral& q, double tolerance) {
  CheckReport r;
  r.check = "kernel";
  const double closed = mellin::kernel_closed_form(p);
  r.params = {{"X", p.X},
              {"y", p.y},
              {"sigma", q.contour.sigma},
              {"T", q.contour.T},
              {"h", q.contour.h},
              {"tolerance", tolerance},
              {"tail_bound", json_number(q.tail_bound)},
              {"truncation_warning", q.truncation_warning}};
  r.lhs = q.value;
  r.rhs = closed;
  r.rel_gap = std::abs(q.value - closed) / closed;
  r.certified_error = q.tail_bound / closed;
  r.pass = r.rel_gap <= tolerance && !q.truncation_warning;
  return r;
}

CheckReport transform_report(const mellin::TransformReport& t) {
  CheckReport r;
  r.check = "transform";
  r.params = {{"m", t.m},
              {"l", t.l},
              {"X", t.params.X},
              {"y", t.params.y},
              {"tolerance", t.tolerance},
              {"envelope", json_number(t.envelope)},
              {"observed_constant", json_number(t.observed_constant)}};
  r.lhs = t.lhs;
  r.rhs = t.rhs;
  r.rel_gap = t.rel_gap;
  r.certified_error = t.fd_error;
  r.pass = t.pass;
  return r;
}

CheckReport decomposition_report(const mellin::DecompositionReport& d, int weight) {
  CheckReport r;
  r.check = "decomposition";
  const auto& b = d.budget;
  r.params = {{"weight", weight},
              {"s", json_complex(d.s)},
              {"sigma_z", d.sigma_z},
              {"N", d.N},
              {"T", d.contour.T},
              {"h", d.contour.h},
              {"nodes", d.nodes},
              {"target", d.target},
              {"abs_gap", json_number(d.abs_gap)},
              {"budget",
               {{"lhs_tail", json_number(b.lhs_tail)},
                {"w_tail", json_number(b.w_tail)},
                {"shifted_w_tail", json_number(b.shifted_w_tail)},
                {"integral_w_tail", json_number(b.integral_w_tail)},
                {"truncation", json_number(b.truncation)},
                {"discretization", json_number(b.discretization)},
                {"rounding", json_number(b.rounding)}}}};
  r.lhs = d.lhs;
  r.rhs = d.rhs;
  r.rel_gap = d.rel_gap;
  r.certified_error = d.certified_error;
  r.pass = d.pass;
  return r;
}

CheckReport hecke_check_report(const forms::HeckeReport& h, int weight) {
  CheckReport r;
  r.check = "hecke";
  r.params = {{"weight", weight},
              {"bound", h.bound},
              {"multiplicativity_checked", h.multiplicativity_checked},
              {"prime_power_checked", h.prime_power_checked},
              {"deligne_checked", h.deligne_checked}};
  if (h.first_failure) {
    r.params["first_failure"] = {{"kind", forms::to_string(h.first_failure->kind)},
                                 {"m", h.first_failure->m},
                                 {"n", h.first_failure->n}};
  }
  r.lhs = static_cast<double>(h.failures());
  r.rhs = 0;
  r.rel_gap = static_cast<double>(h.failures());
  r.certified_error = 0;
  r.pass = h.passed();
  return r;
}

nlohmann::ordered_json suite_json(const std::string& suite, const std::vector<CheckReport>& checks) {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["pass"] = std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass; });
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) j["checks"].push_back(to_json(c));
  return j;
}

}  // namespace cuspsum
