#include "qmbh/ratio_check.hpp"

#include <algorithm>
#include <cmath>

#include "qmbh/error.hpp"

namespace qmbh {

std::string to_string(ToleranceKind kind) {
  switch (kind) {
    case ToleranceKind::relative: return "relative";
    case ToleranceKind::absolute: return "absolute";
    case ToleranceKind::order_of_magnitude: return "order_of_magnitude";
    case ToleranceKind::upper_bound: return "upper_bound";
    case ToleranceKind::lower_bound: return "lower_bound";
  }
  return "relative";
}

ToleranceKind tolerance_kind_from_string(const std::string& s) {
  if (s == "relative") return ToleranceKind::relative;
  if (s == "absolute") return ToleranceKind::absolute;
  if (s == "order_of_magnitude") return ToleranceKind::order_of_magnitude;
  if (s == "upper_bound") return ToleranceKind::upper_bound;
  if (s == "lower_bound") return ToleranceKind::lower_bound;
  throw ConfigError("unknown tolerance kind '" + s + "'");
}

bool within_tolerance(double computed, double reference, ToleranceKind kind,
                      double tolerance) {
  if (!std::isfinite(computed) || !std::isfinite(reference)) return false;
  switch (kind) {
    case ToleranceKind::relative:
      return std::abs(computed - reference) <= tolerance * std::abs(reference);
    case ToleranceKind::absolute:
      return std::abs(computed - reference) <= tolerance;
    case ToleranceKind::order_of_magnitude:
      if (computed == 0.0 || reference == 0.0 || (computed < 0) != (reference < 0)) {
        return false;
      }
      return std::abs(std::log10(computed / reference)) <= tolerance;
    case ToleranceKind::upper_bound:
      return computed <= reference;
    case ToleranceKind::lower_bound:
      return computed >= reference;
  }
  return false;
}

RatioCheck make_check(std::string id, double computed, double reference,
                      ToleranceKind kind, double tolerance, std::string note) {
  RatioCheck c;
  c.id = std::move(id);
  c.computed = computed;
  c.reference = reference;
  c.kind = kind;
  c.tolerance = tolerance;
  c.pass = within_tolerance(computed, reference, kind, tolerance);
  c.note = std::move(note);
  return c;
}

bool all_pass(const std::vector<RatioCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const RatioCheck& c) { return c.pass; });
}

}  // namespace qmbh
