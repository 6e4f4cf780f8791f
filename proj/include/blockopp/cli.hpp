#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "blockopp/tighten.hpp"

// Command-line front end. Exit codes: 0 every asserted certificate holds,
// 1 an asserted certificate is violated, 2 input, parse or precondition error.

namespace blockopp::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolated = 1;
inline constexpr int kUsage = 2;

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty())
      out.push_back(item);
  return out;
}

inline int parse_int(const std::string &s, const std::string &what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception &) {
    throw Error(ErrorKind::Parse, what + ": '" + s + "' is not an integer");
  }
}

//! "n:k[,n:k...]"
inline std::vector<std::pair<int, int>> parse_dims(const std::string &s) {
  std::vector<std::pair<int, int>> out;
  for (const auto &item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2)
      throw Error(ErrorKind::Parse, "--dims entry '" + item + "' is not n:k");
    out.emplace_back(parse_int(parts[0], "--dims"), parse_int(parts[1], "--dims"));
  }
  if (out.empty())
    throw Error(ErrorKind::Parse, "--dims is empty");
  return out;
}

inline std::vector<FieldMode> parse_fields(const std::string &s) {
  if (s == "both")
    return {FieldMode::Real, FieldMode::Complex};
  return {parse_field(s)};
}

//! Defaults, then BLOCKOPP_DEFAULT_TOL for ineq_rel_tol.
inline Tolerances env_tolerances() {
  Tolerances t;
  if (const char *env = std::getenv("BLOCKOPP_DEFAULT_TOL")) {
    char *end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0')
      throw Error(ErrorKind::Parse, std::string("BLOCKOPP_DEFAULT_TOL='") + env + "' is not a number");
    t.ineq_rel_tol = v;
  }
  return t;
}

struct TolFlags {
  std::optional<double> tol;
  std::optional<double> eq_tol;

  void add(CLI::App *app) {
    app->add_option("--tol", tol, "relative tolerance below which a margin counts as a violation");
    app->add_option("--eq-tol", eq_tol, "relative tolerance for reporting Equality");
  }
  Tolerances apply(Tolerances t) const {
    if (tol)
      t.ineq_rel_tol = *tol;
    if (eq_tol)
      t.eq_rel_tol = *eq_tol;
    t.validate();
    return t;
  }
};

inline int exit_for(const Certificate &c) {
  if (c.exploratory)
    return kOk;
  return c.passed() ? kOk : kViolated;
}

inline int cmd_list_checks(std::ostream &out) {
  for (const auto &c : check_registry())
    out << c.name << "\t" << c.description << "\n";
  return kOk;
}

struct CheckArgs {
  std::string input;
  std::string name;
  std::string ineq;
  std::string replay;
  std::string write_instance;
  std::string lemma22_mode = "weak";
  bool explore = false;
  TolFlags tol;
};

//! Loads a replay file: either a bare generator spec or a report record
//! carrying "check" and "spec".
inline std::pair<std::string, GeneratorSpec> load_replay(const std::string &path) {
  const json j = read_json_file(path);
  if (j.contains("spec"))
    return {j.value("check", std::string()), spec_from_json(j.at("spec"))};
  return {std::string(), spec_from_json(j)};
}

inline int cmd_check(const CheckArgs &a, std::ostream &out) {
  std::string name = !a.ineq.empty() ? a.ineq : a.name;
  const Tolerances tol = a.tol.apply(env_tolerances());
  Instance in;
  bool explore = a.explore;
  if (!a.replay.empty()) {
    // with --replay the only positional is the check name
    if (name.empty() && !a.input.empty())
      name = a.input;
    auto [label, spec] = load_replay(a.replay);
    if (name.empty())
      name = label;
    if (name.empty())
      throw Error(ErrorKind::InvalidArgument, "no check name given for replay");
    if (name == "lin_block_explore") {
      explore = true;
      name = "lin_block";
    }
    in = require_check(name).materialize(spec);
  } else {
    if (a.input.empty())
      throw Error(ErrorKind::InvalidArgument, "check needs an instance file or --replay");
    in = load_instance(a.input);
  }
  if (name.empty())
    throw Error(ErrorKind::InvalidArgument, "no check name given (positional or --ineq)");
  const CheckInfo &check = require_check(name);
  if (!a.write_instance.empty())
    save_instance(a.write_instance, in);
  RunOptions opts;
  opts.explore_noncommuting = explore;
  if (a.lemma22_mode == "strong")
    opts.lemma22_mode = Lemma22Mode::Strong;
  else if (a.lemma22_mode == "both")
    opts.lemma22_both_modes = true;
  else if (a.lemma22_mode != "weak")
    throw Error(ErrorKind::Parse, "--lemma22-mode must be weak, strong or both");
  const Certificate c = run_check(check, in, tol, opts);
  out << certificate_to_json(c).dump(2) << "\n";
  return exit_for(c);
}

struct FuzzArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string dims, m, field, ineq, out, format;
  std::optional<double> magnitude;
  bool explore = false;
  TolFlags tol;
};

inline int cmd_fuzz(const FuzzArgs &a, std::ostream &out) {
  CampaignConfig cfg;
  cfg.tolerances = env_tolerances();
  if (!a.config.empty())
    cfg = config_from_json(read_json_file(a.config), cfg);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (!a.dims.empty()) cfg.dims = parse_dims(a.dims);
  if (!a.m.empty()) {
    cfg.m_values.clear();
    for (const auto &s : split(a.m, ','))
      cfg.m_values.push_back(parse_int(s, "--m"));
  }
  if (!a.field.empty()) cfg.field_modes = parse_fields(a.field);
  if (!a.ineq.empty()) cfg.inequalities = split(a.ineq, ',');
  if (!a.out.empty()) cfg.output_path = a.out;
  if (a.magnitude) cfg.magnitude = *a.magnitude;
  if (a.explore) cfg.explore_noncommuting = true;
  if (!a.format.empty()) {
    if (a.format != "json" && a.format != "csv")
      throw Error(ErrorKind::Parse, "--format must be json or csv");
    cfg.output_format = a.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  }
  cfg.tolerances = a.tol.apply(cfg.tolerances);
  cfg.validate();

  const CampaignReport report = run_campaign(cfg);
  const std::string text = cfg.output_format == OutputFormat::Json
                               ? report_to_json(report).dump(2) + "\n"
                               : report_to_csv(report);
  if (cfg.output_path.empty()) {
    out << text;
  } else {
    write_text_file(cfg.output_path, text);
    for (const auto &c : report.checks)
      out << c.name << ": count=" << c.count << " holds=" << c.holds << " equalities=" << c.equalities
          << " violations=" << c.violations << " errors=" << c.errors
          << " min_margin=" << format_double(c.min_margin) << (c.exploratory ? " (exploratory)" : "")
          << "\n";
  }
  return report.exit_code();
}

struct TightenArgs {
  std::string name;
  std::uint64_t seed = 1;
  std::string dims = "2:1";
  int m = 2;
  std::string field = "real";
  int steps = 200;
  int restarts = 4;
  double sigma = 0.1;
  std::string start = "generic";
  std::string out;
  TolFlags tol;
};

inline int cmd_tighten(const TightenArgs &a, std::ostream &out) {
  TightenConfig cfg;
  cfg.check = a.name;
  cfg.master_seed = a.seed;
  const auto dims = parse_dims(a.dims);
  cfg.n = dims.front().first;
  cfg.k = dims.front().second;
  cfg.m = a.m;
  cfg.field = parse_field(a.field);
  cfg.steps = a.steps;
  cfg.restarts = a.restarts;
  cfg.sigma = a.sigma;
  if (a.start != "generic" && a.start != "diagonal")
    throw Error(ErrorKind::Parse, "--start must be generic or diagonal");
  cfg.start = a.start == "generic" ? TightenStart::Generic : TightenStart::Diagonal;
  cfg.tolerances = a.tol.apply(env_tolerances());
  const TightenReport r = run_tighten(cfg);
  const std::string text = tighten_to_json(cfg, r).dump(2) + "\n";
  if (a.out.empty())
    out << text;
  else {
    write_text_file(a.out, text);
    out << "best_margin=" << format_double(r.best_margin) << " restart=" << r.best_restart
        << " accepted=" << r.accepted.size() << (r.numerical_suspect ? " numerical-suspect" : "")
        << "\n";
  }
  return kOk;
}

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  CLI::App app{"Determinantal inequality certificates for (block) positive definite matrices"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto *check = app.add_subcommand("check", "evaluate one instance file");
  check->add_option("input", check_args.input, "instance file (JSON)");
  check->add_option("name", check_args.name, "check identifier");
  check->add_option("--ineq", check_args.ineq, "check identifier");
  check->add_option("--replay", check_args.replay,
                    "regenerate the instance from a generator spec or report record file");
  check->add_option("--write-instance", check_args.write_instance, "save the evaluated instance");
  check->add_option("--lemma22-mode", check_args.lemma22_mode, "weak|strong|both");
  check->add_flag("--explore-noncommuting", check_args.explore,
                  "lin_block: evaluate without requiring commuting blocks");
  check_args.tol.add(check);

  FuzzArgs fuzz_args;
  auto *fuzz = app.add_subcommand("fuzz", "seeded campaign over generated instances");
  fuzz->add_option("--config", fuzz_args.config, "campaign config file (JSON)");
  fuzz->add_option("--seed", fuzz_args.seed, "master seed");
  fuzz->add_option("--trials", fuzz_args.trials, "trials per (dims, m, field) cell");
  fuzz->add_option("--dims", fuzz_args.dims, "n:k[,n:k...]");
  fuzz->add_option("--m", fuzz_args.m, "matrix counts, comma separated");
  fuzz->add_option("--field", fuzz_args.field, "real|complex|both");
  fuzz->add_option("--ineq", fuzz_args.ineq, "check identifiers, comma separated");
  fuzz->add_option("--out", fuzz_args.out, "report path");
  fuzz->add_option("--format", fuzz_args.format, "json|csv");
  fuzz->add_option("--magnitude", fuzz_args.magnitude, "generator entry scale");
  fuzz->add_flag("--explore-noncommuting", fuzz_args.explore,
                 "also run lin_block on generic (non-commuting) pairs, never asserted");
  fuzz_args.tol.add(fuzz);

  TightenArgs tighten_args;
  auto *tighten = app.add_subcommand("tighten", "hill-climb towards the smallest margin");
  tighten->add_option("name", tighten_args.name, "check identifier")->required();
  tighten->add_option("--seed", tighten_args.seed, "master seed");
  tighten->add_option("--dims", tighten_args.dims, "n:k (first entry used)");
  tighten->add_option("--m", tighten_args.m, "matrix count");
  tighten->add_option("--field", tighten_args.field, "real|complex");
  tighten->add_option("--steps", tighten_args.steps, "steps per restart");
  tighten->add_option("--restarts", tighten_args.restarts, "random restarts");
  tighten->add_option("--sigma", tighten_args.sigma, "relative perturbation size");
  tighten->add_option("--start", tighten_args.start, "generic|diagonal");
  tighten->add_option("--out", tighten_args.out, "report path");
  tighten_args.tol.add(tighten);

  auto *list = app.add_subcommand("list-checks", "print the check identifiers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (check->parsed())
      return cmd_check(check_args, out);
    if (fuzz->parsed())
      return cmd_fuzz(fuzz_args, out);
    if (tighten->parsed())
      return cmd_tighten(tighten_args, out);
    if (list->parsed())
      return cmd_list_checks(out);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

} // namespace blockopp::cli
