#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "blockopp/campaign.hpp"

// Random-restart hill climbing on certificate margins. Matrix instances are
// perturbed through their Cholesky factors (L -> L o (1 + sigma G)) and
// projected back to PD by clipping eigenvalues at pd_tol; vector instances
// are perturbed multiplicatively above 1. The search looks for tight
// instances and never reports a violation as real: margins below
// -ineq_rel_tol are re-evaluated in the log domain and flagged suspect.

namespace blockopp {

enum class TightenStart { Generic, Diagonal };

struct TightenConfig {
  std::string check;
  std::uint64_t master_seed = 1;
  int n = 2;
  int k = 1;
  int m = 2;
  FieldMode field = FieldMode::Real;
  int steps = 200;
  int restarts = 4;
  double sigma = 0.1;
  double magnitude = 1.0;
  TightenStart start = TightenStart::Generic;
  Tolerances tolerances;
};

struct TightenStep {
  int step;
  std::uint64_t seed;
  double margin;
};

struct TightenReport {
  std::string check;
  double best_margin = std::numeric_limits<double>::infinity();
  int best_restart = -1;
  GeneratorSpec best_spec;       // start of the restart that found the best margin
  std::vector<TightenStep> accepted; // accepted perturbations of that restart, in order
  std::vector<double> margin_trace; // current margin after each step of that restart
  Certificate best_certificate;
  bool numerical_suspect = false;
  double log_domain_margin = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline HermitianMatrix project_pd(const DenseMatrix &a, const Tolerances &tol) {
  const HermitianMatrix h = HermitianMatrix::hermitian_part(a);
  const double floor = pd_tol_for(h, tol) * 2.0;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h.entries());
  RealVector ev = es.eigenvalues();
  if (ev.minCoeff() > floor)
    return h;
  for (auto &v : ev)
    v = std::max(v, floor);
  return HermitianMatrix::hermitian_part(es.eigenvectors() * ev.cast<Complex>().asDiagonal() *
                                         es.eigenvectors().adjoint());
}

inline DenseMatrix cholesky_factor(const HermitianMatrix &a) {
  Eigen::LLT<DenseMatrix> llt(a.entries());
  if (llt.info() == Eigen::Success)
    return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a.entries());
  const RealVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<Complex>().asDiagonal();
}

inline bool is_vector_check(const std::string &name) {
  return name == "scalar_product" || name == "eqlin";
}

inline Instance perturb(const Instance &in, const std::string &check, std::uint64_t seed,
                        double sigma, const Tolerances &tol) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Instance out = in;
  out.matrices.clear();
  for (const auto &a : in.matrices) {
    if (is_vector_check(check)) {
      RealVector d = a.base().diagonal_entries();
      for (auto &v : d)
        v = 1.0 + (v - 1.0) * std::abs(1.0 + sigma * nd(rng)) + 1e-3 * sigma * std::abs(nd(rng));
      out.matrices.emplace_back(HermitianMatrix::diagonal(d), a.n(), a.k());
      continue;
    }
    DenseMatrix l = cholesky_factor(a.base());
    for (int j = 0; j < l.cols(); ++j)
      for (int i = 0; i < l.rows(); ++i)
        l(i, j) *= 1.0 + sigma * nd(rng);
    out.matrices.emplace_back(project_pd(l * l.adjoint(), tol), a.n(), a.k());
  }
  return out;
}

inline GeneratorSpec tighten_spec(const TightenConfig &cfg, const CheckInfo &check, int restart) {
  GeneratorSpec s = check.spec(cfg.n, cfg.k, cfg.m, cfg.field,
                               derive_seed(cfg.master_seed, 0x7469676874ULL,
                                           static_cast<std::uint64_t>(restart)),
                               restart);
  s.magnitude = cfg.magnitude;
  if (cfg.start == TightenStart::Diagonal && !is_vector_check(cfg.check)) {
    s.family = Family::Diagonal;
    s.rank = 0;
  }
  return s;
}

inline std::uint64_t step_seed(const GeneratorSpec &start, int step) {
  return derive_seed(start.seed, 0x70657274ULL, static_cast<std::uint64_t>(step));
}

} // namespace detail

inline void validate_tighten(const TightenConfig &cfg) {
  const CheckInfo &check = require_check(cfg.check);
  if (!check.tightenable)
    throw Error(ErrorKind::InvalidArgument, "check '" + cfg.check + "' does not support tightening");
  if (cfg.steps < 0 || cfg.restarts < 1)
    throw Error(ErrorKind::InvalidArgument, "tighten needs steps >= 0 and restarts >= 1");
  if (cfg.n < 1 || cfg.k < 1 || cfg.m < 1)
    throw Error(ErrorKind::InvalidArgument, "tighten needs n, k, m >= 1");
  if (!check.applicable(cfg.n, cfg.k))
    throw Error(ErrorKind::InvalidArgument,
                "check '" + cfg.check + "' has nothing to evaluate at this geometry");
  if (!(cfg.sigma > 0))
    throw Error(ErrorKind::InvalidArgument, "sigma must be > 0");
  cfg.tolerances.validate();
}

//! Rebuilds the best instance of a report from its start spec and accepted
//! perturbation seeds.
inline Instance replay_tighten(const TightenConfig &cfg, const TightenReport &report) {
  const CheckInfo &check = require_check(cfg.check);
  Instance in = check.materialize(report.best_spec);
  for (const auto &s : report.accepted)
    in = detail::perturb(in, cfg.check, s.seed, cfg.sigma, cfg.tolerances);
  return in;
}

inline TightenReport run_tighten(const TightenConfig &cfg) {
  validate_tighten(cfg);
  const CheckInfo &check = require_check(cfg.check);
  RunOptions opts;
  TightenReport report;
  report.check = cfg.check;
  for (int r = 0; r < cfg.restarts; ++r) {
    const GeneratorSpec start = detail::tighten_spec(cfg, check, r);
    Instance current = check.materialize(start);
    Certificate cert = run_check(check, current, cfg.tolerances, opts);
    double cur = cert.min_margin();
    std::vector<TightenStep> accepted;
    std::vector<double> trace{cur};
    for (int s = 1; s <= cfg.steps; ++s) {
      const std::uint64_t seed = detail::step_seed(start, s);
      try {
        Instance cand = detail::perturb(current, cfg.check, seed, cfg.sigma, cfg.tolerances);
        Certificate c = run_check(check, cand, cfg.tolerances, opts);
        if (c.min_margin() < cur) {
          cur = c.min_margin();
          current = std::move(cand);
          cert = std::move(c);
          accepted.push_back({s, seed, cur});
        }
      } catch (const Error &) {
        // candidate left the hypothesis region; reject it
      }
      trace.push_back(cur);
    }
    if (cur < report.best_margin) {
      report.best_margin = cur;
      report.best_restart = r;
      report.best_spec = start;
      report.accepted = std::move(accepted);
      report.margin_trace = std::move(trace);
      report.best_certificate = cert;
    }
  }
  if (report.best_margin < -cfg.tolerances.ineq_rel_tol) {
    report.numerical_suspect = true;
    RunOptions log_opts;
    log_opts.eval.force_log_domain = true;
    report.log_domain_margin =
        run_check(check, replay_tighten(cfg, report), cfg.tolerances, log_opts).min_margin();
  }
  return report;
}

inline json tighten_to_json(const TightenConfig &cfg, const TightenReport &r) {
  json acc = json::array();
  for (const auto &s : r.accepted)
    acc.push_back({{"step", s.step}, {"seed", s.seed}, {"margin", detail::finite_or_null(s.margin)}});
  json trace = json::array();
  for (double m : r.margin_trace)
    trace.push_back(detail::finite_or_null(m));
  return {{"check", r.check},
          {"best_margin", detail::finite_or_null(r.best_margin)},
          {"best_restart", r.best_restart},
          {"start_spec", spec_to_json(r.best_spec)},
          {"sigma", cfg.sigma},
          {"steps", cfg.steps},
          {"restarts", cfg.restarts},
          {"accepted", std::move(acc)},
          {"margin_trace", std::move(trace)},
          {"numerical_suspect", r.numerical_suspect},
          {"log_domain_margin", detail::finite_or_null(r.log_domain_margin)},
          {"best_certificate", certificate_to_json(r.best_certificate)}};
}

} // namespace blockopp
