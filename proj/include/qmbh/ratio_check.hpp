#pragma once

#include <string>
#include <vector>

namespace qmbh {

/// How a RatioCheck compares its computed value against the reference.
enum class ToleranceKind {
  relative,            ///< |computed - reference| <= tol * |reference|
  absolute,            ///< |computed - reference| <= tol
  order_of_magnitude,  ///< |log10(computed / reference)| <= tol decades
  upper_bound,         ///< computed <= reference (tol unused)
  lower_bound,         ///< computed >= reference (tol unused)
};

std::string to_string(ToleranceKind kind);
ToleranceKind tolerance_kind_from_string(const std::string& s);

/// A single claim: a computed number checked against a reference under a
/// declared tolerance. `pass` is always derived, never set by hand.
struct RatioCheck {
  std::string id;
  double computed = 0.0;
  double reference = 0.0;
  ToleranceKind kind = ToleranceKind::relative;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;

  bool operator==(const RatioCheck&) const = default;
};

/// Evaluates the pass predicate for the given kind. NaN never passes.
bool within_tolerance(double computed, double reference, ToleranceKind kind,
                      double tolerance);

RatioCheck make_check(std::string id, double computed, double reference,
                      ToleranceKind kind, double tolerance, std::string note = {});

inline RatioCheck relative_check(std::string id, double computed, double reference,
                                 double eps, std::string note = {}) {
  return make_check(std::move(id), computed, reference, ToleranceKind::relative, eps,
                    std::move(note));
}

inline RatioCheck absolute_check(std::string id, double computed, double reference,
                                 double delta, std::string note = {}) {
  return make_check(std::move(id), computed, reference, ToleranceKind::absolute, delta,
                    std::move(note));
}

inline RatioCheck decades_check(std::string id, double computed, double reference,
                                double decades, std::string note = {}) {
  return make_check(std::move(id), computed, reference,
                    ToleranceKind::order_of_magnitude, decades, std::move(note));
}

inline RatioCheck at_most(std::string id, double computed, double bound,
                          std::string note = {}) {
  return make_check(std::move(id), computed, bound, ToleranceKind::upper_bound, 0.0,
                    std::move(note));
}

inline RatioCheck at_least(std::string id, double computed, double bound,
                           std::string note = {}) {
  return make_check(std::move(id), computed, bound, ToleranceKind::lower_bound, 0.0,
                    std::move(note));
}

bool all_pass(const std::vector<RatioCheck>& checks);

}  // namespace qmbh
