#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "blockopp/generators.hpp"
#include "blockopp/inequalities.hpp"

namespace blockopp {

//! A concrete instance as stored in instance files: m matrices sharing one
//! block geometry. Checks over real vectors read the diagonals.
struct Instance {
  int n = 1;
  int k = 1;
  FieldMode field = FieldMode::Real;
  std::vector<BlockMatrix> matrices;

  std::vector<std::vector<double>> diagonals() const {
    std::vector<std::vector<double>> out;
    for (const auto &a : matrices) {
      const RealVector d = a.base().diagonal_entries();
      out.emplace_back(d.data(), d.data() + d.size());
    }
    return out;
  }
};

//! All records one check produced on one instance.
struct Certificate {
  std::string check;
  std::vector<CheckResult> records;
  bool exploratory = false;

  bool passed() const {
    return std::all_of(records.begin(), records.end(),
                       [](const CheckResult &r) { return r.passed(); });
  }
  Verdict verdict() const {
    if (!passed())
      return Verdict::Violated;
    const bool all_eq = std::all_of(records.begin(), records.end(), [](const CheckResult &r) {
      return r.verdict == Verdict::Equality;
    });
    return all_eq ? Verdict::Equality : Verdict::Holds;
  }
  double min_margin() const {
    double m = INFINITY;
    for (const auto &r : records)
      m = std::min(m, r.margin);
    return m;
  }
};

inline Instance diagonal_instance(const GeneratorSpec &spec,
                                  const std::vector<std::vector<double>> &vectors) {
  Instance in;
  in.n = spec.n;
  in.k = spec.k;
  in.field = spec.field;
  for (const auto &v : vectors) {
    RealVector d = Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
    in.matrices.emplace_back(HermitianMatrix::diagonal(d), spec.n, spec.k);
  }
  return in;
}

//! Materializes the instance a spec describes. Vector families become
//! diagonal matrices so every instance fits the file schema.
inline Instance instance_from_spec(const GeneratorSpec &spec) {
  if (spec.family == Family::ScalarVectorsGe1) {
    GeneratorSpec s = spec;
    s.k = 1;
    return diagonal_instance(s, gen_scalar_vectors_ge1(s));
  }
  Instance in;
  in.n = spec.n;
  in.k = spec.k;
  in.field = spec.field;
  in.matrices = gen_matrices(spec);
  return in;
}

//! The corollary23 instance: the vector analogue of the quadruple family.
inline Instance corollary23_instance(const GeneratorSpec &spec) {
  const auto q = gen_corollary23_vectors(spec);
  return diagonal_instance(spec, {q.x, q.y, q.w, q.z});
}

struct RunOptions {
  Lemma22Mode lemma22_mode = Lemma22Mode::Weak;
  bool lemma22_both_modes = false;
  bool explore_noncommuting = false;
  EvalOptions eval;
};

struct CheckInfo {
  std::string name;
  std::string description;
  std::size_t min_matrices;
  std::size_t max_matrices; // 0 = unbounded
  bool tightenable;
  //! Whether the check has anything to evaluate at this geometry.
  std::function<bool(int n, int k)> applicable;
  std::function<Certificate(const Instance &, const Tolerances &, const RunOptions &)> run;
  //! Generator recipe for one campaign trial.
  std::function<GeneratorSpec(int n, int k, int m, FieldMode f, std::uint64_t seed, int trial)> spec;
  std::function<Instance(const GeneratorSpec &)> materialize = instance_from_spec;
};

namespace detail {

inline void append(Certificate &c, const ChainResult &chain) {
  c.records.insert(c.records.end(), chain.links.begin(), chain.links.end());
}

inline GeneratorSpec base_spec(Family fam, int n, int k, int m, FieldMode f, std::uint64_t seed) {
  GeneratorSpec s;
  s.seed = seed;
  s.n = n;
  s.k = k;
  s.m = m;
  s.field = f;
  s.family = fam;
  return s;
}

inline bool always(int, int) { return true; }

inline std::vector<CheckInfo> build_registry() {
  using I = const Instance &;
  using T = const Tolerances &;
  using O = const RunOptions &;
  auto pd = [](int m) {
    return [m](int n, int k, int, FieldMode f, std::uint64_t seed, int) {
      return base_spec(Family::GenericPd, n, k, m, f, seed);
    };
  };
  auto pd_m = [](int n, int k, int m, FieldMode f, std::uint64_t seed, int) {
    return base_spec(Family::GenericPd, n, k, std::max(m, 2), f, seed);
  };
  auto base = [](I in, std::size_t i) -> const HermitianMatrix & { return in.matrices[i].base(); };

  std::vector<CheckInfo> r;
  r.push_back({"hadamard", "prod a_ii >= det A", 1, 0, true, always,
               [](I in, T tol, O) {
                 Certificate c{"hadamard", {}};
                 for (const auto &a : in.matrices)
                   c.records.push_back(check_hadamard(a.base(), tol));
                 return c;
               },
               pd(1)});
  r.push_back({"oppenheim_chain", "det(AoB) >= detA prod b_ii >= det(AB), and the commuted chain",
               2, 2, true, always,
               [base](I in, T tol, O) {
                 Certificate c{"oppenheim_chain", {}};
                 const auto ch = check_oppenheim_chain(base(in, 0), base(in, 1), tol);
                 append(c, ch.direct);
                 append(c, ch.commuted);
                 return c;
               },
               pd(2)});
  r.push_back({"oppenheim_schur", "det(AoB) + det(AB) >= detA prod b_ii + detB prod a_ii", 2, 2,
               true, always,
               [base](I in, T tol, O) {
                 return Certificate{"oppenheim_schur",
                                    {check_oppenheim_schur(base(in, 0), base(in, 1), tol)}};
               },
               pd(2)});
  r.push_back({"chen", "det(AoB) >= det(AB) prod (ratio_A + ratio_B - 1), scalar entries", 2, 2,
               true, always,
               [base](I in, T tol, O o) {
                 return Certificate{"chen", {check_chen(base(in, 0), base(in, 1), tol, o.eval)}};
               },
               pd(2)});
  r.push_back({"fischer", "prod a_ii >= det A11 det A22 >= det A at every split", 1, 0, true,
               [](int n, int k) { return n * k >= 2; },
               [](I in, T tol, O) {
                 Certificate c{"fischer", {}};
                 for (const auto &a : in.matrices)
                   for (int p = 1; p < a.order(); ++p)
                     append(c, check_fischer(a.base(), p, tol));
                 return c;
               },
               pd(1)});
  r.push_back({"lin_block",
               "det(A [] B) >= det(AB) prod (ratio_A + ratio_B - 1) for commuting block families",
               2, 2, false, always,
               [](I in, T tol, O o) {
                 const auto mode = o.explore_noncommuting ? LinMode::Exploratory : LinMode::Asserted;
                 Certificate c{"lin_block",
                               {check_lin_block(in.matrices[0], in.matrices[1], tol, mode, o.eval)}};
                 c.exploratory = mode == LinMode::Exploratory;
                 return c;
               },
               [](int n, int k, int, FieldMode f, std::uint64_t seed, int) {
                 return base_spec(Family::CommutingFamily, n, k, 2, f, seed);
               }});
  r.push_back({"main_multi",
               "det(o A_i) >= prod det A_i prod_mu (sum_i ratio_i(mu) - (m-1)), block entries", 2,
               0, true, always,
               [](I in, T tol, O o) {
                 return Certificate{"main_multi", {check_main_multi(in.matrices, tol, o.eval)}};
               },
               pd_m});
  r.push_back({"psd_sum",
               "det(o A_i) + (m-1) prod det A_i >= sum_i prod_{j!=i} det A_j prod_mu det A_i,mumu",
               2, 0, true, always,
               [](I in, T tol, O) {
                 return Certificate{"psd_sum", {check_psd_sum(in.matrices, tol)}};
               },
               [](int n, int k, int m, FieldMode f, std::uint64_t seed, int trial) {
                 auto s = base_spec(Family::PsdRankDeficient, n, k, std::max(m, 2), f, seed);
                 const int nk = n * k;
                 const int ranks[3] = {nk, std::max(nk - 1, 1), 1};
                 s.rank = ranks[trial % 3];
                 return s;
               }});
  r.push_back({"lemma21", "scalar Schur-complement ratio inequality at every p >= 2", 2, 2, true,
               [](int n, int k) { return n * k >= 2; },
               [base](I in, T tol, O) {
                 Certificate c{"lemma21", {}};
                 for (int p = 2; p <= in.n * in.k; ++p)
                   c.records.push_back(check_lemma21(base(in, 0), base(in, 1), p, tol));
                 return c;
               },
               pd(2)});
  r.push_back({"lemma22", "det X + det Y >= det W + det Z under Loewner hypotheses", 4, 4, false,
               always,
               [base](I in, T tol, O o) {
                 Certificate c{"lemma22", {}};
                 auto run = [&](Lemma22Mode mode) {
                   c.records.push_back(check_lemma22(base(in, 0), base(in, 1), base(in, 2),
                                                     base(in, 3), tol, mode));
                 };
                 if (o.lemma22_both_modes) {
                   run(Lemma22Mode::Weak);
                   run(Lemma22Mode::Strong);
                 } else {
                   run(o.lemma22_mode);
                 }
                 return c;
               },
               [](int n, int k, int, FieldMode f, std::uint64_t seed, int trial) {
                 auto s = base_spec(Family::Lemma22Quadruple, n, k, 4, f, seed);
                 if (trial % 10 == 8)
                   s.boundary = QuadrupleBoundary::ZeroE;
                 else if (trial % 10 == 9)
                   s.boundary = QuadrupleBoundary::ZeroAll;
                 return s;
               }});
  r.push_back({"corollary23", "prod x + prod y >= prod w + prod z for ordered nonnegative vectors",
               4, 4, false, always,
               [](I in, T tol, O) {
                 const auto d = in.diagonals();
                 return Certificate{"corollary23", {check_corollary23(d[0], d[1], d[2], d[3], tol)}};
               },
               [](int n, int k, int, FieldMode f, std::uint64_t seed, int trial) {
                 auto s = base_spec(Family::Lemma22Quadruple, n, k, 4, f, seed);
                 if (trial % 10 == 9)
                   s.boundary = QuadrupleBoundary::ZeroE;
                 return s;
               }});
  r.back().materialize = corollary23_instance;
  r.push_back({"prop24", "block Schur-complement inequality with its Loewner chains", 2, 2, true,
               [](int n, int) { return n >= 2; },
               [](I in, T tol, O) {
                 Certificate c{"prop24", {}};
                 for (int mu = 2; mu <= in.n; ++mu)
                   c.records.push_back(check_prop24(in.matrices[0], in.matrices[1], mu, tol));
                 return c;
               },
               pd(2)});
  r.push_back({"lemma26", "block determinant-ratio inequality at every mu >= 2", 2, 2, true,
               [](int n, int) { return n >= 2; },
               [](I in, T tol, O) {
                 Certificate c{"lemma26", {}};
                 for (int mu = 2; mu <= in.n; ++mu)
                   c.records.push_back(check_lemma26(in.matrices[0], in.matrices[1], mu, tol));
                 return c;
               },
               pd(2)});
  r.push_back({"thm26", "two-matrix case of main_multi", 2, 2, true, always,
               [](I in, T tol, O o) {
                 return Certificate{"thm26",
                                    {check_thm26(in.matrices[0], in.matrices[1], tol, o.eval)}};
               },
               pd(2)});
  r.push_back({"scalar_product",
               "prod_mu (sum_i a_i - (m-1)) >= sum_i prod_mu a_i - (m-1) for entries >= 1", 1, 0,
               true, always,
               [](I in, T tol, O) {
                 return Certificate{"scalar_product", {check_scalar_product_ineq(in.diagonals(), tol)}};
               },
               [](int n, int k, int m, FieldMode f, std::uint64_t seed, int) {
                 return base_spec(Family::ScalarVectorsGe1, n * k, 1, m, f, seed);
               }});
  r.push_back({"rs_factors", "induction factors R, S >= 1 and R S >= R + S - 1", 2, 0, true,
               [](int n, int) { return n >= 2; },
               [](I in, T tol, O) {
                 Certificate c{"rs_factors", {}};
                 for (int mu = 2; mu <= in.n; ++mu)
                   c.records.push_back(check_rs_factors(in.matrices, mu, tol));
                 return c;
               },
               pd_m});
  r.push_back({"eqlin", "prod (a + b - 1) >= prod a + prod b - 1 for entries >= 1", 2, 2, true,
               always,
               [](I in, T tol, O) {
                 const auto d = in.diagonals();
                 return Certificate{"eqlin", {check_eqlin(d[0], d[1], tol)}};
               },
               [](int n, int k, int, FieldMode f, std::uint64_t seed, int) {
                 return base_spec(Family::ScalarVectorsGe1, n * k, 1, 2, f, seed);
               }});
  return r;
}

} // namespace detail

inline const std::vector<CheckInfo> &check_registry() {
  static const std::vector<CheckInfo> registry = detail::build_registry();
  return registry;
}

inline const CheckInfo *find_check(const std::string &name) {
  for (const auto &c : check_registry())
    if (c.name == name)
      return &c;
  return nullptr;
}

inline const CheckInfo &require_check(const std::string &name) {
  if (const auto *c = find_check(name))
    return *c;
  throw Error(ErrorKind::InvalidArgument, "unknown check '" + name + "'");
}

inline Certificate run_check(const CheckInfo &check, const Instance &in, const Tolerances &tol,
                             const RunOptions &opts = {}) {
  const std::size_t m = in.matrices.size();
  if (m < check.min_matrices || (check.max_matrices != 0 && m > check.max_matrices))
    throw Error(ErrorKind::InvalidArgument,
                check.name + " needs " +
                    (check.max_matrices == check.min_matrices
                         ? std::to_string(check.min_matrices)
                         : "at least " + std::to_string(check.min_matrices)) +
                    " matrices, instance has " + std::to_string(m));
  return check.run(in, tol, opts);
}

} // namespace blockopp
