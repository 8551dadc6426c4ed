#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rse/types.hpp"

namespace rse {

enum class Verdict { pass, violation, inconclusive };

const char* to_string(Verdict v);

// Probe that reproduces a negative margin: re-evaluating the underlying
// membership at (point, t) must recover `margin`.
struct Witness {
  std::vector<Cx> point;
  double t = 0.0;
  double margin = 0.0;
};

struct CheckReport {
  std::string check;
  Verdict verdict = Verdict::pass;
  double worst_margin = 0.0;
  long decided = 0;
  long unknown = 0;
  std::optional<Witness> witness;
  std::vector<std::string> notes;
  std::string params;  // echoed parameter summary, JSON text

  nlohmann::json to_json() const;
};

// Combines probe tallies into the standard verdict: any decided margin at or
// below -1e-9 is a violation; more than 5% unknown probes (and no violation)
// is inconclusive.
Verdict standard_verdict(long decided, long unknown, double worst_margin, bool has_violation);

}  // namespace rse
