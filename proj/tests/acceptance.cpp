// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Every tolerance used below is pinned here.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "blockopp/cli.hpp"

using namespace blockopp;
namespace fs = std::filesystem;

namespace {

constexpr double kMarginFloor = -1e-8;  // margins must stay >= this
constexpr double kFactorFloor = 1 - 1e-8; // per-mu and R/S factors
constexpr double kEqualityBand = 1e-9;  // |margin| for the 2x2 identities
constexpr double kReductionRel = 1e-12; // reduction coherences
constexpr double kSchurRel = 1e-9;      // Schur determinant identity
constexpr double kEqlinRel = 1e-15;     // eqlin vs two-list specialization
constexpr double kReplayRel = 1e-15;    // replayed lhs/rhs
constexpr double kCommuteMax = 1e-10;   // commuting-family defect
constexpr double kHatFactor = 10.0;     // |min eig of hat| <= 10 psd_tol

constexpr FieldMode kFields[] = {FieldMode::Real, FieldMode::Complex};
const Tolerances kTol;

double rel(double a, double b) {
  if (a == b)
    return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

//! Collects the first few failures of one criterion.
struct Tally {
  long checks = 0;
  long failures = 0;
  double worst_margin = INFINITY;
  std::vector<std::string> notes;

  void expect(bool ok, const std::function<std::string()> &what) {
    ++checks;
    if (ok)
      return;
    ++failures;
    if (notes.size() < 5)
      notes.push_back(what());
  }
  void margin(double m, const std::string &what) {
    worst_margin = std::min(worst_margin, m);
    expect(m >= kMarginFloor, [&] { return what + " margin " + format_double(m); });
  }
  void result(const CheckResult &r, const std::string &what) {
    margin(r.margin, what + " " + r.name);
    expect(r.verdict != Verdict::Violated, [&] { return what + " " + r.name + " Violated"; });
    for (const auto &c : r.conditions)
      expect(c.holds(), [&] { return what + " condition '" + c.label + "' = " + format_double(c.value); });
  }
  void chain(const ChainResult &c, const std::string &what) {
    for (const auto &l : c.links)
      result(l, what);
  }
};

GeneratorSpec spec(Family fam, int n, int k, int m, FieldMode f, std::uint64_t seed) {
  GeneratorSpec s;
  s.seed = seed;
  s.n = n;
  s.k = k;
  s.m = m;
  s.field = f;
  s.family = fam;
  return s;
}

std::uint64_t seed_for(std::uint64_t criterion, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0, std::uint64_t d = 0) {
  return derive_seed(20261014, criterion, a, b, c, d);
}

std::string where(FieldMode f, int n, int k, int m, int trial) {
  std::ostringstream os;
  os << to_string(f) << " n=" << n << " k=" << k << " m=" << m << " trial=" << trial;
  return os.str();
}

// -- criteria --------------------------------------------------------------

Tally ac1() {
  Tally t;
  for (auto f : kFields)
    for (int order = 1; order <= 8; ++order)
      for (int trial = 0; trial < 1000; ++trial) {
        const auto s = spec(Family::GenericPd, order, 1, 2, f, seed_for(1, order, static_cast<int>(f), trial));
        const auto a = gen_pd(s, 0).base(), b = gen_pd(s, 1).base();
        const auto w = where(f, order, 1, 2, trial);
        t.result(check_hadamard(a, kTol), w);
        const auto oc = check_oppenheim_chain(a, b, kTol);
        t.chain(oc.direct, w);
        t.chain(oc.commuted, w);
        t.result(check_oppenheim_schur(a, b, kTol), w);
        t.result(check_chen(a, b, kTol), w);
        // Fischer needs a proper split; order 1 has none
        for (int p = 1; p < order; ++p)
          t.chain(check_fischer(a, p, kTol), w + " p=" + std::to_string(p));
      }
  return t;
}

Tally ac2() {
  Tally t;
  for (auto f : kFields)
    for (int trial = 0; trial < 10000; ++trial) {
      const auto s = spec(Family::GenericPd, 2, 1, 2, f, seed_for(2, static_cast<int>(f), trial));
      const auto a = gen_pd(s, 0).base(), b = gen_pd(s, 1).base();
      const double P = a(0, 0).real() * a(1, 1).real(), p = std::norm(a(0, 1));
      const double Q = b(0, 0).real() * b(1, 1).real(), q = std::norm(b(0, 1));
      const double identity = 2 * P * Q - P * q - Q * p;
      const auto w = where(f, 2, 1, 2, trial);
      for (const auto &r : {check_chen(a, b, kTol), check_oppenheim_schur(a, b, kTol)}) {
        t.worst_margin = std::min(t.worst_margin, -std::abs(r.margin));
        t.expect(r.verdict == Verdict::Equality && std::abs(r.margin) <= kEqualityBand,
                 [&] { return w + " " + r.name + " margin " + format_double(r.margin); });
      }
      const auto os = check_oppenheim_schur(a, b, kTol);
      t.expect(rel(os.lhs, identity) <= 1e-12 && rel(os.rhs, identity) <= 1e-12,
               [&] { return w + " symbolic 2PQ-Pq-Qp mismatch"; });
    }
  return t;
}

const std::pair<int, int> kGrid[] = {{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3}};

Tally ac3() {
  Tally t;
  for (auto f : kFields)
    for (const auto &[n, k] : kGrid)
      for (int m = 2; m <= 4; ++m)
        for (int trial = 0; trial < 500; ++trial) {
          const auto s = spec(Family::GenericPd, n, k, m, f, seed_for(3, static_cast<int>(f), n * 10 + k, m, trial));
          const auto mats = gen_matrices(s);
          const auto r = check_main_multi(mats, kTol);
          const auto w = where(f, n, k, m, trial);
          t.result(r, w);
          for (const auto &c : r.conditions)
            t.expect(c.value >= kFactorFloor, [&] { return w + " " + c.label; });
        }
  return t;
}

Tally ac4() {
  Tally t;
  for (auto f : kFields)
    for (const auto &[n, k] : kGrid)
      for (int m = 2; m <= 4; ++m) {
        const int nk = n * k;
        for (int rank : {nk, nk - 1, 1})
          for (int trial = 0; trial < 500; ++trial) {
            auto s = spec(Family::PsdRankDeficient, n, k, m, f,
                          seed_for(4, static_cast<int>(f), n * 10 + k, m * 100 + rank, trial));
            s.rank = rank;
            const auto mats = gen_matrices(s);
            const auto w = where(f, n, k, m, trial) + " rank=" + std::to_string(rank);
            const auto r = check_psd_sum(mats, kTol);
            t.result(r, w);
            if (m == 2 && k == 1) {
              const auto os = check_oppenheim_schur(mats[0].base(), mats[1].base(), kTol);
              const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
              t.expect(std::abs(r.lhs - os.lhs) <= kReductionRel * scale &&
                           std::abs(r.rhs - os.rhs) <= kReductionRel * scale,
                       [&] { return w + " psd_sum vs oppenheim_schur mismatch"; });
            }
          }
      }
  return t;
}

Tally ac5() {
  Tally t;
  const std::pair<int, int> dims[] = {{2, 2}, {3, 2}, {2, 3}};
  for (auto f : kFields) {
    for (const auto &[n, k] : dims)
      for (int trial = 0; trial < 500; ++trial) {
        const auto s = spec(Family::CommutingFamily, n, k, 2, f, seed_for(5, static_cast<int>(f), n * 10 + k, trial));
        const auto cf = gen_commuting_family(s);
        const auto w = where(f, n, k, 2, trial);
        const double defect = commutation_defect(cf.a, cf.b);
        t.expect(defect <= kCommuteMax, [&] { return w + " defect " + format_double(defect); });
        const auto grid = block_hadamard(cf.a, cf.b);
        const auto view = grid.hermitian_view();
        t.expect(view && classify_definiteness(view->base(), kTol).is_pd(),
                 [&] { return w + " block_hadamard not PD"; });
        t.result(check_lin_block(cf.a, cf.b, kTol), w);
      }
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 2 + trial % 5;
      const auto s = spec(Family::CommutingFamily, n, 1, 2, f, seed_for(5, 100 + static_cast<int>(f), n, trial));
      const auto cf = gen_commuting_family(s);
      const auto l = check_lin_block(cf.a, cf.b, kTol);
      const auto c = check_chen(cf.a.base(), cf.b.base(), kTol);
      t.expect(rel(l.lhs, c.lhs) <= kReductionRel && rel(l.rhs, c.rhs) <= kReductionRel,
               [&] { return where(f, n, 1, 2, trial) + " lin_block vs chen mismatch"; });
    }
  }
  return t;
}

Tally ac6() {
  Tally t;
  const std::pair<int, int> dims[] = {{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3}, {4, 1}};
  for (auto f : kFields)
    for (int trial = 0; trial < 500; ++trial) {
      const auto [n, k] = dims[trial % 6];
      const auto w = where(f, n, k, 2, trial);
      const auto s = spec(Family::GenericPd, n, k, 2, f, seed_for(6, static_cast<int>(f), trial));
      const auto a = gen_pd(s, 0), b = gen_pd(s, 1);
      for (int p = 2; p <= n * k; ++p) {
        const auto r = check_lemma21(a.base(), b.base(), p, kTol);
        t.result(r, w + " p=" + std::to_string(p));
        for (const auto &hat : {construct_hat(a.base(), p), construct_hat(b.base(), p)}) {
          const double lmin = hat.min_eigenvalue();
          const double ptol = psd_tol_for(hat, kTol);
          t.expect(classify_definiteness(hat, kTol).is_psd() && std::abs(lmin) <= kHatFactor * ptol,
                   [&] { return w + " hat min eig " + format_double(lmin); });
        }
      }
      for (int mu = 2; mu <= n; ++mu) {
        const auto p24 = check_prop24(a, b, mu, kTol);
        t.result(p24, w + " mu=" + std::to_string(mu));
        // each Loewner link: min eigenvalue of the difference >= -psd_tol
        t.expect(p24.conditions.size() == 5, [&] { return w + " prop24 links missing"; });
        t.result(check_lemma26(a, b, mu, kTol), w + " mu=" + std::to_string(mu));
      }
      auto qs = spec(Family::Lemma22Quadruple, n, k, 4, f, seed_for(6, 10 + static_cast<int>(f), trial));
      qs.boundary = trial % 10 == 8 ? QuadrupleBoundary::ZeroE
                    : trial % 10 == 9 ? QuadrupleBoundary::ZeroAll
                                      : QuadrupleBoundary::None;
      const auto q = gen_lemma22_quadruple(qs);
      for (auto mode : {Lemma22Mode::Strong, Lemma22Mode::Weak})
        t.result(check_lemma22(q.x, q.y, q.w, q.z, kTol, mode), w + " quadruple");
      const auto v = gen_corollary23_vectors(qs);
      t.result(check_corollary23(v.x, v.y, v.w, v.z, kTol), w + " vectors");
    }
  return t;
}

Tally ac7() {
  Tally t;
  for (int trial = 0; trial < 10000; ++trial) {
    auto s = spec(Family::ScalarVectorsGe1, 1 + trial % 6, 1, 1 + (trial / 6) % 5, FieldMode::Real,
                  seed_for(7, trial));
    s.magnitude = trial % 3 == 0 ? 0.1 : 1.0;
    const auto a = gen_scalar_vectors_ge1(s);
    t.result(check_scalar_product_ineq(a, kTol), where(FieldMode::Real, s.n, 1, s.m, trial));
  }
  for (int trial = 0; trial < 500; ++trial) {
    auto s = spec(Family::ScalarVectorsGe1, 1 + trial % 6, 1, 2, FieldMode::Real, seed_for(7, 1, trial));
    const auto a = gen_scalar_vectors_ge1(s);
    const auto e = check_eqlin(a[0], a[1], kTol);
    const auto g = check_scalar_product_ineq(a, kTol);
    t.result(e, where(FieldMode::Real, s.n, 1, 2, trial));
    t.expect(rel(e.lhs, g.lhs) <= kEqlinRel && rel(e.rhs, g.rhs) <= kEqlinRel,
             [&] { return "eqlin vs scalar_product trial " + std::to_string(trial); });
  }
  const std::pair<int, int> dims[] = {{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3}};
  for (auto f : kFields)
    for (int trial = 0; trial < 500; ++trial) {
      const auto [n, k] = dims[trial % 5];
      const int m = 2 + trial % 3;
      const auto s = spec(Family::GenericPd, n, k, m, f, seed_for(7, 2, static_cast<int>(f), trial));
      const auto mats = gen_matrices(s);
      for (int mu = 2; mu <= n; ++mu) {
        const auto r = check_rs_factors(mats, mu, kTol);
        const auto w = where(f, n, k, m, trial) + " mu=" + std::to_string(mu);
        t.result(r, w);
        const double R = r.factor("R"), S = r.factor("S");
        t.expect(R >= kFactorFloor && S >= kFactorFloor, [&] { return w + " R/S below 1"; });
        t.expect(R * S >= R + S - 1 - 1e-8, [&] { return w + " RS < R+S-1"; });
      }
    }
  return t;
}

Tally ac8() {
  Tally t;
  for (auto f : kFields)
    for (int trial = 0; trial < 500; ++trial) {
      const int order = 2 + trial % 7;
      const auto s = spec(Family::GenericPd, order, 1, 2, f, seed_for(8, static_cast<int>(f), trial));
      const auto a = gen_pd(s, 0).base();
      for (int p = 1; p < order; ++p) {
        const double lhs = determinant(a);
        const double rhs = determinant(leading_principal_submatrix(a, p)) * determinant(schur_complement(a, p, kTol));
        t.expect(rel(lhs, rhs) <= kSchurRel, [&] { return "Schur identity order " + std::to_string(order); });
      }
      // k = 1: block product is the entrywise product, leading blocks are
      // scalar leading submatrices
      const auto x = gen_pd(s, 0), y = gen_pd(s, 1);
      t.expect(block_hadamard(x, y).entries() == hadamard(x.base(), y.base()).entries(),
               [&] { return "k=1 block product differs from entrywise"; });
      for (int mu = 1; mu <= order; ++mu)
        t.expect(x.leading(mu).base().entries() == leading_principal_submatrix(x.base(), mu).entries(),
                 [&] { return "k=1 leading block"; });
      // n = 1: block product is the matrix product
      const auto s1 = spec(Family::GenericPd, 1, order, 2, f, seed_for(8, 10 + static_cast<int>(f), trial));
      const auto u = gen_pd(s1, 0), v = gen_pd(s1, 1);
      t.expect(block_hadamard(u, v).entries() == mat_mul(u.base(), v.base()),
               [&] { return "n=1 block product differs from matrix product"; });
      t.expect(u.block(0, 0) == u.base().entries(), [&] { return "n=1 block access"; });
    }
  CampaignConfig cfg;
  cfg.master_seed = 99;
  cfg.trials = 5;
  const auto r1 = run_campaign(cfg), r2 = run_campaign(cfg);
  auto j1 = report_to_json(r1), j2 = report_to_json(r2);
  t.expect(r1.exit_code() == 0, [&] { return "default campaign exit " + std::to_string(r1.exit_code()); });
  j1.erase("duration_seconds");
  j2.erase("duration_seconds");
  t.expect(j1.dump() == j2.dump(), [] { return "fuzz report not deterministic"; });
  t.expect(report_to_csv(r1) == report_to_csv(r2), [] { return "fuzz CSV not deterministic"; });
  for (const auto &agg : r1.checks) {
    if (!agg.argmin)
      continue;
    const auto cert = replay(agg.name, agg.argmin->spec, cfg.tolerances);
    const auto &orig = agg.argmin->certificate;
    t.expect(cert.records.size() == orig.records.size(), [&] { return agg.name + " replay record count"; });
    for (std::size_t i = 0; i < std::min(cert.records.size(), orig.records.size()); ++i)
      t.expect(cert.records[i].lhs == orig.records[i].lhs && cert.records[i].rhs == orig.records[i].rhs,
               [&] { return agg.name + " replay differs"; });
  }
  return t;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "blockopp");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

Tally ac9() {
  Tally t;
  const fs::path dir = fs::temp_directory_path() / ("blockopp_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto file = [&](const std::string &name) { return (dir / name).string(); };
  auto put = [](const std::string &path, const std::string &text) { std::ofstream(path) << text; };

  // exit 0: identity pair
  put(file("id.json"), R"({"n": 2, "k": 1, "field": "real", "matrices": [[1, 0, 0, 1], [1, 0, 0, 1]]})");
  const auto ok = cli_run({"check", file("id.json"), "oppenheim_chain"});
  t.expect(ok.code == 0, [&] { return "identity pair exit " + std::to_string(ok.code); });
  // exit 2: n*k does not match the data
  put(file("bad.json"), R"({"n": 2, "k": 2, "field": "real", "matrices": [[1, 0, 0, 1]]})");
  const auto bad = cli_run({"check", file("bad.json"), "chen"});
  t.expect(bad.code == 2, [&] { return "bad dims exit " + std::to_string(bad.code); });
  t.expect(cli_run({"fuzz", "--trials", "0"}).code == 2, [] { return "trials=0 exit"; });
  // exit 1: rounding noise on the 2x2 Chen identity counts once both bands vanish
  const std::vector<std::string> tight{"--tol", "1e-300", "--eq-tol", "1e-300"};
  std::vector<std::string> fuzz{"fuzz", "--ineq", "chen", "--dims", "2:1", "--m", "2", "--trials", "50",
                                "--out", file("v.json")};
  fuzz.insert(fuzz.end(), tight.begin(), tight.end());
  const auto viol = cli_run(fuzz);
  t.expect(viol.code == 1, [&] { return "violation exit " + std::to_string(viol.code); });
  // violation replay
  const auto report = read_json_file(file("v.json"));
  t.expect(!report.at("violations").empty(), [] { return "no violation records"; });
  for (const auto &v : report.at("violations")) {
    put(file("rec.json"), v.dump());
    std::vector<std::string> args{"check", "--replay", file("rec.json")};
    args.insert(args.end(), tight.begin(), tight.end());
    const auto r = cli_run(args);
    t.expect(r.code == 1, [&] { return "replayed violation exit " + std::to_string(r.code); });
    const auto cert = certificate_from_json(json::parse(r.out));
    const auto orig = certificate_from_json(v.at("certificate"));
    for (std::size_t i = 0; i < orig.records.size(); ++i)
      t.expect(rel(cert.records[i].lhs, orig.records[i].lhs) <= kReplayRel &&
                   rel(cert.records[i].rhs, orig.records[i].rhs) <= kReplayRel,
               [] { return "replay lhs/rhs differ"; });
  }
  // schema round-trip on generated instances of every check
  for (const auto &c : check_registry())
    for (auto f : kFields) {
      const int n = 3, k = c.name == "lin_block" ? 2 : 1 + static_cast<int>(f);
      if (!c.applicable(n, k))
        continue;
      const auto s = c.spec(n, k, 3, f, seed_for(9, static_cast<int>(f)), 0);
      put(file("spec.json"), spec_to_json(s).dump());
      const auto first = cli_run({"check", "--replay", file("spec.json"), c.name, "--write-instance", file("inst.json")});
      const auto second = cli_run({"check", file("inst.json"), c.name});
      t.expect(first.code == 0 && second.code == 0, [&] { return c.name + " round-trip exit codes"; });
      if (first.code != 0 || second.code != 0)
        continue;
      const auto a = certificate_from_json(json::parse(first.out));
      const auto b = certificate_from_json(json::parse(second.out));
      t.expect(a.verdict() == b.verdict(), [&] { return c.name + " verdict changed after round-trip"; });
      for (std::size_t i = 0; i < a.records.size(); ++i)
        t.expect(a.records[i].verdict == b.records[i].verdict &&
                     rel(a.records[i].lhs, b.records[i].lhs) <= kReplayRel &&
                     rel(a.records[i].rhs, b.records[i].rhs) <= kReplayRel,
                 [&] { return c.name + " record changed after round-trip"; });
    }
  fs::remove_all(dir);
  return t;
}

} // namespace

int main() {
  struct Criterion {
    const char *id;
    const char *title;
    Tally (*run)();
    double budget_seconds; // 0 = none
  };
  const Criterion criteria[] = {
      {"AC1", "classical chain suite, orders 1-8, 1000 pairs each, real+complex", ac1, 60},
      {"AC2", "2x2 Chen and Oppenheim-Schur equality, 10000 pairs per field", ac2, 0},
      {"AC3", "block multi-matrix bound, 5 geometries x m=2..4 x 500", ac3, 300},
      {"AC4", "PSD sum bound, ranks nk, nk-1, 1", ac4, 0},
      {"AC5", "commuting block families and k=1 reduction", ac5, 0},
      {"AC6", "lemma suite: lemma21, lemma22, corollary23, prop24, lemma26", ac6, 0},
      {"AC7", "scalar product inequalities and R/S factors", ac7, 0},
      {"AC8", "structural identities, degenerations, campaign determinism", ac8, 0},
      {"AC9", "CLI exit codes, schema round-trip, violation replay", ac9, 0},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Tally t;
    std::string crash;
    try {
      t = c.run();
    } catch (const std::exception &e) {
      crash = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool over = c.budget_seconds > 0 && secs > c.budget_seconds;
    const bool pass = crash.empty() && t.failures == 0 && t.checks > 0 && !over;
    failed += !pass;
    std::printf("[%s] %s %s: %ld assertions, %ld failures, worst margin %s, %.2fs%s\n", pass ? "PASS" : "FAIL",
                c.id, c.title, t.checks, t.failures,
                std::isfinite(t.worst_margin) ? format_double(t.worst_margin).c_str() : "n/a", secs,
                over ? " (over time budget)" : "");
    if (!crash.empty())
      std::printf("       exception: %s\n", crash.c_str());
    for (const auto &n : t.notes)
      std::printf("       %s\n", n.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
