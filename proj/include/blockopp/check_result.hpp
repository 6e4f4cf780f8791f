#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "blockopp/tolerances.hpp"

namespace blockopp {

enum class Verdict { Holds, Equality, Violated };

inline const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Holds: return "Holds";
  case Verdict::Equality: return "Equality";
  case Verdict::Violated: return "Violated";
  }
  return "?";
}

struct NamedValue {
  std::string name;
  double value;
};

//! Side condition attached to a certificate: holds iff value >= threshold.
struct Condition {
  std::string label;
  double value;
  double threshold;
  bool holds() const { return value >= threshold; }
};

//! Normalized signed gap (lhs - rhs) / max(|lhs|, |rhs|, 1).
inline double margin(double lhs, double rhs) {
  return (lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

//! The same quantity for lhs = exp(log_lhs), rhs = exp(log_rhs) without
//! leaving the log domain until the common scale is removed.
inline double margin_from_logs(double log_lhs, double log_rhs) {
  const double s = std::max({log_lhs, log_rhs, 0.0});
  return std::exp(log_lhs - s) - std::exp(log_rhs - s);
}

//! Equality is tested first, so a near-zero margin is never reported as a
//! violation even when eq_rel_tol exceeds ineq_rel_tol.
inline Verdict classify_margin(double m, const Tolerances &tol) {
  if (std::abs(m) <= tol.eq_rel_tol)
    return Verdict::Equality;
  if (m < -tol.ineq_rel_tol)
    return Verdict::Violated;
  return Verdict::Holds;
}

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<NamedValue> factors;
  std::vector<Condition> conditions;
  double margin = 0.0;
  Verdict verdict = Verdict::Holds;
  bool log_domain = false;
  bool exploratory = false;

  bool conditions_hold() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const Condition &c) { return c.holds(); });
  }
  bool passed() const { return verdict != Verdict::Violated && conditions_hold(); }

  double factor(const std::string &key) const {
    for (const auto &f : factors)
      if (f.name == key)
        return f.value;
    return std::nan("");
  }
};

inline CheckResult make_result(std::string name, double lhs, double rhs, const Tolerances &tol) {
  CheckResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = margin(lhs, rhs);
  r.verdict = classify_margin(r.margin, tol);
  return r;
}

//! Multi-stage chain s_0 >= s_1 >= ... ; one link certificate per
//! consecutive pair.
struct ChainResult {
  std::string name;
  std::vector<std::pair<std::string, double>> stages;
  std::vector<CheckResult> links;

  Verdict verdict() const {
    bool all_eq = true;
    for (const auto &l : links) {
      if (l.verdict == Verdict::Violated)
        return Verdict::Violated;
      all_eq = all_eq && l.verdict == Verdict::Equality;
    }
    return all_eq ? Verdict::Equality : Verdict::Holds;
  }
  bool holds() const { return verdict() != Verdict::Violated; }
  double min_margin() const {
    double m = INFINITY;
    for (const auto &l : links)
      m = std::min(m, l.margin);
    return m;
  }
};

inline ChainResult make_chain(std::string name, std::vector<std::pair<std::string, double>> stages,
                              const Tolerances &tol) {
  ChainResult c;
  c.name = std::move(name);
  c.stages = std::move(stages);
  for (std::size_t i = 0; i + 1 < c.stages.size(); ++i)
    c.links.push_back(make_result(c.name + "[" + c.stages[i].first + " >= " +
                                      c.stages[i + 1].first + "]",
                                  c.stages[i].second, c.stages[i + 1].second, tol));
  return c;
}

} // namespace blockopp
