#include "rse/report.hpp"

#include <nlohmann/json.hpp>

namespace rse {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::violation:
      return "violation";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["check"] = check;
  j["verdict"] = to_string(verdict);
  j["worst_margin"] = worst_margin;
  j["decided"] = decided;
  j["unknown"] = unknown;
  if (witness) {
    nlohmann::json pt = nlohmann::json::array();
    for (Cx c : witness->point) pt.push_back({c.real(), c.imag()});
    j["witness"] = {{"point", pt}, {"t", witness->t}, {"margin", witness->margin}};
  }
  j["notes"] = notes;
  if (!params.empty()) j["params"] = nlohmann::json::parse(params);
  return j;
}

Verdict standard_verdict(long decided, long unknown, double worst_margin, bool has_violation) {
  if (has_violation || worst_margin <= -1e-9) return Verdict::violation;
  long total = decided + unknown;
  if (total > 0 && unknown * 20 > total) return Verdict::inconclusive;
  return Verdict::pass;
}

}  // namespace rse
