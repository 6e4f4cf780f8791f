#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "blockopp/checks.hpp"

// JSON forms of instances, generator specs and certificates.
//
// Instance schema:
//   { "n": int, "k": int, "field": "real" | "complex",
//     "matrices": [ [ (n k)^2 row-major entries ], ... ] }
// Real entries are numbers, complex entries are [re, im] pairs.

namespace blockopp {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void parse_fail(const std::string &field, const std::string &why) {
  throw Error(ErrorKind::Parse, "field '" + field + "': " + why);
}

inline int positive_int(const json &j, const char *key) {
  if (!j.contains(key))
    parse_fail(key, "missing");
  const auto &v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    parse_fail(key, "must be a positive integer");
  return v.get<int>();
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline double number_or_nan(const json &j) { return j.is_number() ? j.get<double>() : std::nan(""); }

} // namespace detail

inline FieldMode parse_field(const std::string &s) {
  if (s == "real")
    return FieldMode::Real;
  if (s == "complex")
    return FieldMode::Complex;
  throw Error(ErrorKind::Parse, "field must be 'real' or 'complex', got '" + s + "'");
}

inline Family parse_family(const std::string &s) {
  for (Family f : {Family::GenericPd, Family::PsdRankDeficient, Family::CommutingFamily,
                   Family::Diagonal, Family::NearIdentity, Family::Lemma22Quadruple,
                   Family::ScalarVectorsGe1})
    if (s == to_string(f))
      return f;
  throw Error(ErrorKind::Parse, "unknown generator family '" + s + "'");
}

inline QuadrupleBoundary parse_boundary(const std::string &s) {
  for (auto b : {QuadrupleBoundary::None, QuadrupleBoundary::ZeroE, QuadrupleBoundary::ZeroAll})
    if (s == to_string(b))
      return b;
  throw Error(ErrorKind::Parse, "unknown boundary '" + s + "'");
}

// -- instances -------------------------------------------------------------

inline json instance_to_json(const Instance &in) {
  json mats = json::array();
  for (const auto &a : in.matrices) {
    json entries = json::array();
    const auto &e = a.base().entries();
    for (int i = 0; i < e.rows(); ++i)
      for (int j = 0; j < e.cols(); ++j) {
        if (in.field == FieldMode::Real)
          entries.push_back(e(i, j).real());
        else
          entries.push_back(json::array({e(i, j).real(), e(i, j).imag()}));
      }
    mats.push_back(std::move(entries));
  }
  return {{"n", in.n}, {"k", in.k}, {"field", to_string(in.field)}, {"matrices", std::move(mats)}};
}

inline Instance instance_from_json(const json &j) {
  if (!j.is_object())
    detail::parse_fail("<root>", "instance must be a JSON object");
  Instance in;
  in.n = detail::positive_int(j, "n");
  in.k = detail::positive_int(j, "k");
  if (!j.contains("field") || !j.at("field").is_string())
    detail::parse_fail("field", "must be \"real\" or \"complex\"");
  try {
    in.field = parse_field(j.at("field").get<std::string>());
  } catch (const Error &) {
    detail::parse_fail("field", "must be \"real\" or \"complex\"");
  }
  if (!j.contains("matrices") || !j.at("matrices").is_array() || j.at("matrices").empty())
    detail::parse_fail("matrices", "must be a non-empty list");
  const int order = in.n * in.k;
  const std::size_t expected = static_cast<std::size_t>(order) * order;
  const auto &mats = j.at("matrices");
  for (std::size_t m = 0; m < mats.size(); ++m) {
    const std::string field = "matrices[" + std::to_string(m) + "]";
    const auto &list = mats[m];
    if (!list.is_array())
      detail::parse_fail(field, "must be a list of entries");
    if (list.size() != expected)
      detail::parse_fail(field, "expected " + std::to_string(expected) + " entries for n*k = " +
                                    std::to_string(order) + ", got " + std::to_string(list.size()));
    DenseMatrix a(order, order);
    for (std::size_t t = 0; t < expected; ++t) {
      const auto &v = list[t];
      const int i = static_cast<int>(t) / order, c = static_cast<int>(t) % order;
      const std::string where = field + "[" + std::to_string(t) + "]";
      if (in.field == FieldMode::Real) {
        if (!v.is_number())
          detail::parse_fail(where, "real mode expects a number");
        a(i, c) = Complex(v.get<double>(), 0.0);
      } else {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
          detail::parse_fail(where, "complex mode expects a [re, im] pair");
        a(i, c) = Complex(v[0].get<double>(), v[1].get<double>());
      }
    }
    try {
      in.matrices.emplace_back(HermitianMatrix(a), in.n, in.k);
    } catch (const Error &e) {
      detail::parse_fail(field, e.what());
    }
  }
  return in;
}

inline json read_json_file(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error &e) {
    throw Error(ErrorKind::Parse, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream f(path);
  if (!f)
    throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  f << text;
}

inline Instance load_instance(const std::string &path) { return instance_from_json(read_json_file(path)); }

inline void save_instance(const std::string &path, const Instance &in) {
  write_text_file(path, instance_to_json(in).dump() + "\n");
}

// -- generator specs -------------------------------------------------------

inline json spec_to_json(const GeneratorSpec &s) {
  return {{"seed", s.seed},           {"n", s.n},
          {"k", s.k},                 {"m", s.m},
          {"field", to_string(s.field)}, {"family", to_string(s.family)},
          {"rank", s.rank},           {"epsilon", s.epsilon},
          {"magnitude", s.magnitude}, {"boundary", to_string(s.boundary)}};
}

inline GeneratorSpec spec_from_json(const json &j) {
  if (!j.is_object())
    detail::parse_fail("spec", "must be an object");
  GeneratorSpec s;
  try {
    s.seed = j.at("seed").get<std::uint64_t>();
    s.n = j.at("n").get<int>();
    s.k = j.at("k").get<int>();
    s.m = j.value("m", 2);
    s.field = parse_field(j.value("field", std::string("real")));
    s.family = parse_family(j.value("family", std::string("generic_pd")));
    s.rank = j.value("rank", 0);
    s.epsilon = j.value("epsilon", 0.0);
    s.magnitude = j.value("magnitude", 1.0);
    s.boundary = parse_boundary(j.value("boundary", std::string("none")));
  } catch (const json::exception &e) {
    detail::parse_fail("spec", e.what());
  }
  return s;
}

// -- certificates ----------------------------------------------------------

inline json result_to_json(const CheckResult &r) {
  json factors = json::array();
  for (const auto &f : r.factors)
    factors.push_back({{"name", f.name}, {"value", detail::finite_or_null(f.value)}});
  json conds = json::array();
  for (const auto &c : r.conditions)
    conds.push_back({{"label", c.label},
                     {"value", detail::finite_or_null(c.value)},
                     {"threshold", detail::finite_or_null(c.threshold)},
                     {"holds", c.holds()}});
  return {{"name", r.name},
          {"lhs", detail::finite_or_null(r.lhs)},
          {"rhs", detail::finite_or_null(r.rhs)},
          {"margin", detail::finite_or_null(r.margin)},
          {"verdict", to_string(r.verdict)},
          {"factors", std::move(factors)},
          {"conditions", std::move(conds)},
          {"log_domain", r.log_domain},
          {"exploratory", r.exploratory}};
}

inline Verdict parse_verdict(const std::string &s) {
  if (s == "Holds") return Verdict::Holds;
  if (s == "Equality") return Verdict::Equality;
  if (s == "Violated") return Verdict::Violated;
  throw Error(ErrorKind::Parse, "unknown verdict '" + s + "'");
}

inline CheckResult result_from_json(const json &j) {
  CheckResult r;
  r.name = j.at("name").get<std::string>();
  r.lhs = detail::number_or_nan(j.at("lhs"));
  r.rhs = detail::number_or_nan(j.at("rhs"));
  r.margin = detail::number_or_nan(j.at("margin"));
  r.verdict = parse_verdict(j.at("verdict").get<std::string>());
  for (const auto &f : j.at("factors"))
    r.factors.push_back({f.at("name").get<std::string>(), detail::number_or_nan(f.at("value"))});
  for (const auto &c : j.at("conditions"))
    r.conditions.push_back({c.at("label").get<std::string>(), detail::number_or_nan(c.at("value")),
                            detail::number_or_nan(c.at("threshold"))});
  r.log_domain = j.value("log_domain", false);
  r.exploratory = j.value("exploratory", false);
  return r;
}

inline json certificate_to_json(const Certificate &c) {
  json recs = json::array();
  for (const auto &r : c.records)
    recs.push_back(result_to_json(r));
  return {{"check", c.check},
          {"verdict", to_string(c.verdict())},
          {"passed", c.passed()},
          {"exploratory", c.exploratory},
          {"min_margin", detail::finite_or_null(c.min_margin())},
          {"records", std::move(recs)}};
}

inline Certificate certificate_from_json(const json &j) {
  Certificate c;
  c.check = j.at("check").get<std::string>();
  c.exploratory = j.value("exploratory", false);
  for (const auto &r : j.at("records"))
    c.records.push_back(result_from_json(r));
  return c;
}

} // namespace blockopp
