#pragma once

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "blockopp/io.hpp"

namespace blockopp {

enum class OutputFormat { Json, Csv };

struct CampaignConfig {
  std::uint64_t master_seed = 1;
  int trials = 100;
  std::vector<std::pair<int, int>> dims{{2, 2}, {3, 1}};
  std::vector<int> m_values{2, 3};
  std::vector<FieldMode> field_modes{FieldMode::Real, FieldMode::Complex};
  std::vector<std::string> inequalities; // empty = every registered check
  Tolerances tolerances;
  double magnitude = 1.0;
  bool explore_noncommuting = false;
  std::string output_path;
  OutputFormat output_format = OutputFormat::Json;

  std::vector<std::string> selected_checks() const {
    if (!inequalities.empty())
      return inequalities;
    std::vector<std::string> all;
    for (const auto &c : check_registry())
      all.push_back(c.name);
    return all;
  }

  void validate() const {
    if (trials < 1)
      throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
    if (dims.empty())
      throw Error(ErrorKind::InvalidArgument, "dims must be non-empty");
    for (const auto &[n, k] : dims)
      if (n < 1 || k < 1)
        throw Error(ErrorKind::InvalidArgument, "dims entries need n, k >= 1");
    if (m_values.empty())
      throw Error(ErrorKind::InvalidArgument, "m values must be non-empty");
    for (int m : m_values)
      if (m < 1)
        throw Error(ErrorKind::InvalidArgument, "m values must be >= 1");
    if (field_modes.empty())
      throw Error(ErrorKind::InvalidArgument, "field modes must be non-empty");
    if (!(magnitude > 0))
      throw Error(ErrorKind::InvalidArgument, "magnitude must be > 0");
    for (const auto &name : inequalities)
      require_check(name);
    tolerances.validate();
  }
};

//! One executed record, as written to the CSV report.
struct ReportRow {
  std::string check_name;
  GeneratorSpec spec;
  CheckResult result;
};

struct ViolationRecord {
  std::string check;
  GeneratorSpec spec;
  Certificate certificate;
};

struct ErrorRecord {
  std::string check;
  GeneratorSpec spec;
  std::string message;
};

struct CheckAggregate {
  std::string name;
  bool exploratory = false;
  long count = 0;
  long holds = 0;
  long equalities = 0;
  long violations = 0;
  long errors = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<ViolationRecord> argmin; // instance attaining min_margin

  void add(const GeneratorSpec &spec, const Certificate &c) {
    ++count;
    switch (c.verdict()) {
    case Verdict::Holds: ++holds; break;
    case Verdict::Equality: ++equalities; break;
    case Verdict::Violated: ++violations; break;
    }
    const double m = c.min_margin();
    if (!argmin || m < min_margin || (m == min_margin && spec.seed < argmin->spec.seed)) {
      min_margin = m;
      argmin = ViolationRecord{c.check, spec, c};
    }
  }
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<CheckAggregate> checks;
  std::vector<ViolationRecord> violations;             // asserted checks only
  std::vector<ViolationRecord> exploratory_violations; // never affect the exit code
  std::vector<ErrorRecord> errors;
  std::vector<ReportRow> rows;
  double duration_seconds = 0.0;

  long asserted_violations() const { return static_cast<long>(violations.size()); }

  //! 0 on success, 1 on any asserted violation, 2 if a generated instance
  //! could not be evaluated.
  int exit_code() const {
    if (!violations.empty())
      return 1;
    return errors.empty() ? 0 : 2;
  }
};

//! Seed of one trial; depends only on the trial coordinates so trials can
//! run in any order.
inline std::uint64_t trial_seed(std::uint64_t master, const std::string &check, int n, int k, int m,
                                FieldMode f, int trial) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : check)
    h = (h ^ c) * 1099511628211ULL;
  return derive_seed(master, h, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k),
                     static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(f),
                     static_cast<std::uint64_t>(trial));
}

namespace detail {

inline void run_trials(const CheckInfo &check, const std::string &label, const CampaignConfig &cfg,
                       const RunOptions &opts,
                       const std::function<GeneratorSpec(const GeneratorSpec &)> &adjust,
                       CampaignReport &report, bool exploratory) {
  CheckAggregate agg;
  agg.name = label;
  agg.exploratory = exploratory;
  for (const auto &[n, k] : cfg.dims) {
    if (!check.applicable(n, k))
      continue;
    for (int m : cfg.m_values)
      for (FieldMode f : cfg.field_modes)
        for (int t = 0; t < cfg.trials; ++t) {
          GeneratorSpec spec =
              check.spec(n, k, m, f, trial_seed(cfg.master_seed, label, n, k, m, f, t), t);
          spec.magnitude = cfg.magnitude;
          spec = adjust(spec);
          try {
            const Instance in = check.materialize(spec);
            Certificate c = run_check(check, in, cfg.tolerances, opts);
            c.exploratory = exploratory;
            for (auto &r : c.records) {
              r.exploratory = exploratory;
              report.rows.push_back({label, spec, r});
            }
            agg.add(spec, c);
            if (!c.passed()) {
              auto &sink = exploratory ? report.exploratory_violations : report.violations;
              sink.push_back({label, spec, c});
            }
          } catch (const Error &e) {
            ++agg.count;
            ++agg.errors;
            report.errors.push_back({label, spec, e.what()});
          }
        }
  }
  report.checks.push_back(std::move(agg));
}

inline bool violation_less(const ViolationRecord &a, const ViolationRecord &b) {
  return std::tie(a.spec.seed, a.check) < std::tie(b.spec.seed, b.check);
}

} // namespace detail

//! Runs trials x |dims| x |m_values| x |field_modes| instances of every
//! selected check. Checks with nothing to evaluate at a geometry (an index
//! range that is empty there) skip it.
inline CampaignReport run_campaign(const CampaignConfig &cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  CampaignReport report;
  report.config = cfg;
  RunOptions opts;
  opts.lemma22_both_modes = true;
  const auto identity = [](const GeneratorSpec &s) { return s; };
  for (const auto &name : cfg.selected_checks()) {
    const CheckInfo &check = require_check(name);
    detail::run_trials(check, name, cfg, opts, identity, report, false);
    if (name == "lin_block" && cfg.explore_noncommuting) {
      RunOptions explore = opts;
      explore.explore_noncommuting = true;
      const auto generic = [](const GeneratorSpec &s) {
        GeneratorSpec g = s;
        g.family = Family::GenericPd;
        g.m = 2;
        return g;
      };
      detail::run_trials(check, "lin_block_explore", cfg, explore, generic, report, true);
    }
  }
  std::sort(report.violations.begin(), report.violations.end(), detail::violation_less);
  std::sort(report.exploratory_violations.begin(), report.exploratory_violations.end(),
            detail::violation_less);
  std::stable_sort(report.errors.begin(), report.errors.end(),
                   [](const ErrorRecord &a, const ErrorRecord &b) { return a.spec.seed < b.spec.seed; });
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

//! Regenerates the instance behind a report record and evaluates it again.
inline Certificate replay(const std::string &check_label, const GeneratorSpec &spec,
                          const Tolerances &tol) {
  const bool explore = check_label == "lin_block_explore";
  const CheckInfo &check = require_check(explore ? "lin_block" : check_label);
  RunOptions opts;
  opts.lemma22_both_modes = true;
  opts.explore_noncommuting = explore;
  return run_check(check, check.materialize(spec), tol, opts);
}

// -- serialization ---------------------------------------------------------

inline json tolerances_to_json(const Tolerances &t) {
  return {{"psd_scale", t.psd_scale},
          {"pd_scale", t.pd_scale},
          {"ineq_rel_tol", t.ineq_rel_tol},
          {"eq_rel_tol", t.eq_rel_tol},
          {"commute_tol", t.commute_tol}};
}

inline Tolerances tolerances_from_json(const json &j, Tolerances t = {}) {
  t.psd_scale = j.value("psd_scale", t.psd_scale);
  t.pd_scale = j.value("pd_scale", t.pd_scale);
  t.ineq_rel_tol = j.value("ineq_rel_tol", t.ineq_rel_tol);
  t.eq_rel_tol = j.value("eq_rel_tol", t.eq_rel_tol);
  t.commute_tol = j.value("commute_tol", t.commute_tol);
  return t;
}

inline json config_to_json(const CampaignConfig &c) {
  json dims = json::array();
  for (const auto &[n, k] : c.dims)
    dims.push_back({n, k});
  json fields = json::array();
  for (auto f : c.field_modes)
    fields.push_back(to_string(f));
  return {{"master_seed", c.master_seed},
          {"trials", c.trials},
          {"dims", dims},
          {"m_values", c.m_values},
          {"field_modes", fields},
          {"inequalities", c.selected_checks()},
          {"tolerances", tolerances_to_json(c.tolerances)},
          {"magnitude", c.magnitude},
          {"explore_noncommuting", c.explore_noncommuting},
          {"output_path", c.output_path},
          {"output_format", c.output_format == OutputFormat::Json ? "json" : "csv"}};
}

//! Reads a campaign config file; absent fields keep the values of `base`.
inline CampaignConfig config_from_json(const json &j, CampaignConfig c = {}) {
  if (!j.is_object())
    detail::parse_fail("<root>", "campaign config must be an object");
  try {
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("dims")) {
      c.dims.clear();
      for (const auto &d : j.at("dims"))
        c.dims.emplace_back(d.at(0).get<int>(), d.at(1).get<int>());
    }
    if (j.contains("m_values")) c.m_values = j.at("m_values").get<std::vector<int>>();
    if (j.contains("field_modes")) {
      c.field_modes.clear();
      for (const auto &f : j.at("field_modes"))
        c.field_modes.push_back(parse_field(f.get<std::string>()));
    }
    if (j.contains("inequalities"))
      c.inequalities = j.at("inequalities").get<std::vector<std::string>>();
    if (j.contains("tolerances")) c.tolerances = tolerances_from_json(j.at("tolerances"), c.tolerances);
    if (j.contains("magnitude")) c.magnitude = j.at("magnitude").get<double>();
    if (j.contains("explore_noncommuting"))
      c.explore_noncommuting = j.at("explore_noncommuting").get<bool>();
    if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
    if (j.contains("output_format")) {
      const auto f = j.at("output_format").get<std::string>();
      if (f != "json" && f != "csv")
        detail::parse_fail("output_format", "must be json or csv");
      c.output_format = f == "json" ? OutputFormat::Json : OutputFormat::Csv;
    }
  } catch (const json::exception &e) {
    detail::parse_fail("config", e.what());
  }
  return c;
}

inline json violation_to_json(const ViolationRecord &v) {
  return {{"check", v.check}, {"spec", spec_to_json(v.spec)},
          {"certificate", certificate_to_json(v.certificate)}};
}

inline json report_to_json(const CampaignReport &r) {
  json checks = json::array();
  for (const auto &a : r.checks) {
    json entry = {{"name", a.name},
                  {"exploratory", a.exploratory},
                  {"count", a.count},
                  {"holds", a.holds},
                  {"equalities", a.equalities},
                  {"violations", a.violations},
                  {"errors", a.errors},
                  {"min_margin", detail::finite_or_null(a.min_margin)},
                  {"argmin_seed", a.argmin ? json(a.argmin->spec.seed) : json(nullptr)}};
    if (a.argmin)
      entry["argmin"] = violation_to_json(*a.argmin);
    checks.push_back(std::move(entry));
  }
  json viol = json::array(), explore = json::array(), errs = json::array();
  for (const auto &v : r.violations)
    viol.push_back(violation_to_json(v));
  for (const auto &v : r.exploratory_violations)
    explore.push_back(violation_to_json(v));
  for (const auto &e : r.errors)
    errs.push_back({{"check", e.check}, {"spec", spec_to_json(e.spec)}, {"message", e.message}});
  return {{"config", config_to_json(r.config)},
          {"checks", std::move(checks)},
          {"violations", std::move(viol)},
          {"exploratory_violations", std::move(explore)},
          {"errors", std::move(errs)},
          {"duration_seconds", r.duration_seconds}};
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string report_to_csv(const CampaignReport &r) {
  std::ostringstream os;
  os << "check_name,n,k,m,field_mode,seed,lhs,rhs,margin,verdict\n";
  for (const auto &row : r.rows) {
    os << row.check_name << ',' << row.spec.n << ',' << row.spec.k << ',' << row.spec.m << ','
       << to_string(row.spec.field) << ',' << row.spec.seed << ',' << format_double(row.result.lhs)
       << ',' << format_double(row.result.rhs) << ',' << format_double(row.result.margin) << ','
       << to_string(row.result.verdict) << '\n';
  }
  return os.str();
}

} // namespace blockopp
