#include <gtest/gtest.h>

#include "blockopp/campaign.hpp"
#include "blockopp/tighten.hpp"

using namespace blockopp;

namespace {

CampaignConfig small_config() {
  CampaignConfig c;
  c.trials = 3;
  c.dims = {{2, 2}, {3, 1}};
  c.m_values = {2, 3};
  return c;
}

json without_duration(json j) {
  j.erase("duration_seconds");
  return j;
}

} // namespace

TEST(Campaign, DefaultSuiteHasNoViolations) {
  CampaignConfig c = small_config();
  c.trials = 10;
  const auto r = run_campaign(c);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.errors.empty()) << (r.errors.empty() ? "" : r.errors[0].check + ": " + r.errors[0].message);
  EXPECT_EQ(r.checks.size(), check_registry().size());
  for (const auto &a : r.checks)
    EXPECT_GT(a.count, 0) << a.name;
}

TEST(Campaign, DeterministicExceptDuration) {
  const auto c = small_config();
  const auto a = report_to_json(run_campaign(c)), b = report_to_json(run_campaign(c));
  EXPECT_EQ(without_duration(a).dump(), without_duration(b).dump());
  EXPECT_EQ(report_to_csv(run_campaign(c)), report_to_csv(run_campaign(c)));
}

TEST(Campaign, SeedsDependOnCoordinates) {
  EXPECT_EQ(trial_seed(1, "chen", 2, 1, 2, FieldMode::Real, 0), trial_seed(1, "chen", 2, 1, 2, FieldMode::Real, 0));
  EXPECT_NE(trial_seed(1, "chen", 2, 1, 2, FieldMode::Real, 0), trial_seed(1, "chen", 2, 1, 2, FieldMode::Real, 1));
  EXPECT_NE(trial_seed(1, "chen", 2, 1, 2, FieldMode::Real, 0), trial_seed(2, "chen", 2, 1, 2, FieldMode::Real, 0));
  EXPECT_NE(trial_seed(1, "chen", 2, 1, 2, FieldMode::Real, 0), trial_seed(1, "hadamard", 2, 1, 2, FieldMode::Real, 0));
}

TEST(Campaign, ReplayReproducesEveryRecord) {
  auto c = small_config();
  c.trials = 2;
  const auto r = run_campaign(c);
  ASSERT_FALSE(r.rows.empty());
  std::size_t i = 0;
  while (i < r.rows.size()) {
    const auto &row = r.rows[i];
    const auto cert = replay(row.check_name, row.spec, c.tolerances);
    for (const auto &rec : cert.records) {
      ASSERT_LT(i, r.rows.size());
      EXPECT_EQ(r.rows[i].result.name, rec.name);
      EXPECT_LE(std::abs(r.rows[i].result.lhs - rec.lhs), 1e-15 * std::max(1.0, std::abs(rec.lhs)));
      EXPECT_LE(std::abs(r.rows[i].result.rhs - rec.rhs), 1e-15 * std::max(1.0, std::abs(rec.rhs)));
      ++i;
    }
  }
}

TEST(Campaign, InvalidConfigsRejected) {
  auto c = small_config();
  c.trials = 0;
  EXPECT_THROW(run_campaign(c), Error);
  c = small_config();
  c.inequalities = {"not_a_check"};
  EXPECT_THROW(run_campaign(c), Error);
  c = small_config();
  c.dims = {{0, 2}};
  EXPECT_THROW(run_campaign(c), Error);
  c = small_config();
  c.tolerances.ineq_rel_tol = -1;
  EXPECT_THROW(run_campaign(c), Error);
}

TEST(Campaign, ExploratoryLinBlockNeverAffectsExitCode) {
  auto c = small_config();
  c.inequalities = {"lin_block"};
  c.dims = {{2, 2}, {3, 2}};
  c.explore_noncommuting = true;
  c.trials = 20;
  const auto r = run_campaign(c);
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_EQ(r.checks[1].name, "lin_block_explore");
  EXPECT_TRUE(r.checks[1].exploratory);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_EQ(r.exit_code(), 0);
  for (const auto &v : r.exploratory_violations)
    EXPECT_TRUE(v.certificate.exploratory);
}

TEST(Campaign, CsvHeaderAndRowCount) {
  auto c = small_config();
  c.inequalities = {"hadamard"};
  const auto r = run_campaign(c);
  const auto csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check_name,n,k,m,field_mode,seed,lhs,rhs,margin,verdict");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.rows.size() + 1);
  // 2 dims x 2 m values x 2 fields x 3 trials
  EXPECT_EQ(r.rows.size(), 24u);
}

TEST(Serialization, InstanceRoundTrip) {
  GeneratorSpec s;
  s.seed = 5;
  s.n = 2;
  s.k = 2;
  s.m = 3;
  s.field = FieldMode::Complex;
  const Instance in = instance_from_spec(s);
  const Instance back = instance_from_json(json::parse(instance_to_json(in).dump()));
  ASSERT_EQ(back.matrices.size(), 3u);
  EXPECT_EQ(back.n, 2);
  EXPECT_EQ(back.field, FieldMode::Complex);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(back.matrices[i].base().entries(), in.matrices[i].base().entries());
}

TEST(Serialization, InstanceValidationNamesField) {
  const json bad = json::parse(R"({"n": 2, "k": 2, "field": "real", "matrices": [[[1, 0], [0, 1]]]})");
  try {
    instance_from_json(bad);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("matrices[0]"), std::string::npos) << e.what();
  }
  const json nofield = json::parse(R"({"n": 1, "k": 1, "matrices": [[[1]]]})");
  EXPECT_THROW(instance_from_json(nofield), Error);
}

TEST(Serialization, SpecAndCertificateRoundTrip) {
  GeneratorSpec s;
  s.seed = 0xfedcba9876543210ULL;
  s.n = 3;
  s.k = 2;
  s.m = 4;
  s.family = Family::Lemma22Quadruple;
  s.boundary = QuadrupleBoundary::ZeroE;
  s.rank = 2;
  s.epsilon = 0.01;
  EXPECT_EQ(spec_from_json(json::parse(spec_to_json(s).dump())), s);

  s = GeneratorSpec{};
  s.seed = 9;
  const auto cert = run_check(require_check("oppenheim_schur"), instance_from_spec(s), {});
  const auto back = certificate_from_json(json::parse(certificate_to_json(cert).dump()));
  ASSERT_EQ(back.records.size(), cert.records.size());
  EXPECT_EQ(back.check, cert.check);
  EXPECT_EQ(back.records[0].lhs, cert.records[0].lhs);
  EXPECT_EQ(back.records[0].verdict, cert.records[0].verdict);
  EXPECT_EQ(back.records[0].factors.size(), cert.records[0].factors.size());
}

TEST(Serialization, ConfigRoundTrip) {
  auto c = small_config();
  c.master_seed = 77;
  c.field_modes = {FieldMode::Complex};
  c.inequalities = {"chen", "fischer"};
  c.tolerances.ineq_rel_tol = 1e-7;
  c.output_format = OutputFormat::Csv;
  const auto back = config_from_json(json::parse(config_to_json(c).dump()));
  EXPECT_EQ(back.master_seed, 77u);
  EXPECT_EQ(back.dims, c.dims);
  EXPECT_EQ(back.inequalities, c.inequalities);
  EXPECT_EQ(back.tolerances.ineq_rel_tol, 1e-7);
  EXPECT_EQ(back.output_format, OutputFormat::Csv);
}

TEST(Tighten, ChenTwoByTwoConvergesToEquality) {
  TightenConfig c;
  c.check = "chen";
  c.n = 2;
  c.k = 1;
  c.steps = 50;
  const auto r = run_tighten(c);
  EXPECT_LE(std::abs(r.best_margin), c.tolerances.eq_rel_tol);
  EXPECT_FALSE(r.numerical_suspect);
}

TEST(Tighten, HadamardDiagonalStartIsTightAtStepZero) {
  TightenConfig c;
  c.check = "hadamard";
  c.n = 3;
  c.k = 1;
  c.steps = 20;
  c.restarts = 1;
  c.start = TightenStart::Diagonal;
  const auto r = run_tighten(c);
  ASSERT_FALSE(r.margin_trace.empty());
  EXPECT_EQ(r.margin_trace[0], 0.0);
}

TEST(Tighten, MainMultiStaysNonnegative) {
  TightenConfig c;
  c.check = "main_multi";
  c.n = 2;
  c.k = 2;
  c.m = 3;
  c.steps = 1000;
  c.restarts = 1;
  const auto r = run_tighten(c);
  EXPECT_GE(r.best_margin, -c.tolerances.ineq_rel_tol);
  ASSERT_EQ(r.margin_trace.size(), 1001u);
  for (std::size_t i = 1; i < r.margin_trace.size(); ++i)
    EXPECT_LE(r.margin_trace[i], r.margin_trace[i - 1]);
}

TEST(Tighten, ReplayRebuildsBestInstance) {
  TightenConfig c;
  c.check = "oppenheim_chain";
  c.n = 3;
  c.steps = 40;
  c.restarts = 2;
  c.field = FieldMode::Complex;
  const auto r = run_tighten(c);
  const auto cert = run_check(require_check(c.check), replay_tighten(c, r), c.tolerances);
  EXPECT_EQ(cert.min_margin(), r.best_margin);
}

TEST(Tighten, Validation) {
  TightenConfig c;
  c.check = "unknown";
  EXPECT_THROW(run_tighten(c), Error);
  c.check = "lin_block";
  EXPECT_THROW(run_tighten(c), Error);
  c.check = "prop24";
  c.n = 1;
  EXPECT_THROW(run_tighten(c), Error);
}
