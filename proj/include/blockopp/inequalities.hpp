#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "blockopp/block_matrix.hpp"
#include "blockopp/check_result.hpp"

// Determinantal inequality certificates. Each check evaluates both sides of
// one inequality, records the intermediate quantities as named factors and
// classifies the normalized margin. Preconditions (definiteness, index
// ranges, hypotheses) are enforced by throwing blockopp::Error.
//
// Two different products appear on block matrices: block_hadamard (blockwise
// matrix products, used only by check_lin_block) and entrywise_hadamard (the
// ordinary Hadamard product of the full matrices, used by every other block
// check).

namespace blockopp {

struct EvalOptions {
  //! Evaluate ratio-form bounds in the log domain even when the linear
  //! values are representable.
  bool force_log_domain = false;
};

namespace detail {

inline constexpr double kTiny = 1e-300;
inline constexpr double kHuge = 1e300;

inline void require_pd(const HermitianMatrix &a, const Tolerances &tol, const std::string &what) {
  const auto d = classify_definiteness(a, tol);
  if (!d.is_pd())
    throw Error(ErrorKind::NotPositiveDefinite,
                what + " is not positive definite (min eigenvalue " +
                    std::to_string(d.min_eigenvalue) + ")");
}

inline void require_psd(const HermitianMatrix &a, const Tolerances &tol, const std::string &what) {
  const auto d = classify_definiteness(a, tol);
  if (!d.is_psd())
    throw Error(ErrorKind::NotPositiveSemidefinite,
                what + " is not positive semidefinite (min eigenvalue " +
                    std::to_string(d.min_eigenvalue) + ")");
}

inline std::string nth(const char *sym, std::size_t i) { return std::string(sym) + "[" + std::to_string(i) + "]"; }

inline double diag_product(const HermitianMatrix &a) { return a.diagonal_entries().prod(); }

//! Product of the determinants of the diagonal blocks.
inline double diag_block_det_product(const BlockMatrix &a) {
  double p = 1.0;
  for (int i = 0; i < a.n(); ++i)
    p *= determinant(a.diagonal_block(i));
  return p;
}

inline bool linear_ok(double v) { return std::abs(v) >= kTiny && std::abs(v) <= kHuge; }

inline void require_geometry(std::span<const BlockMatrix> mats) {
  for (std::size_t i = 1; i < mats.size(); ++i)
    require_same_geometry(mats[0], mats[i]);
}

inline BlockMatrix entrywise_product(std::span<const BlockMatrix> mats) {
  BlockMatrix acc = mats[0];
  for (std::size_t i = 1; i < mats.size(); ++i)
    acc = entrywise_hadamard(acc, mats[i]);
  return acc;
}

} // namespace detail

//! det A_{mu mu} det A_{mu-1} / det A_mu for 2 <= mu <= n, evaluated as the
//! exponential of a log-determinant difference. At least 1 for PD input.
inline double fischer_ratio(const BlockMatrix &a, int mu) {
  if (mu < 2 || mu > a.n())
    throw Error(ErrorKind::IndexOutOfRange,
                "Fischer ratio index " + std::to_string(mu) + " outside [2, " +
                    std::to_string(a.n()) + "]");
  return std::exp(log_det_pd(a.diagonal_block(mu - 1)) + log_det_pd(a.leading(mu - 1).base()) -
                  log_det_pd(a.leading(mu).base()));
}

//! prod_i det A^(i) * prod_{mu=2}^n (sum_i ratio_i(mu) - (m-1)), the common
//! right-hand side of the block Chen-type bounds.
struct FischerBound {
  double det_product = 1.0;     // prod_i det A^(i)
  double log_det_product = 0.0; // sum_i log det A^(i)
  std::vector<double> mu_factors;
  std::vector<std::vector<double>> ratios; // ratios[i][mu-2]
  double rhs = 1.0;
  double log_rhs = 0.0;
};

inline FischerBound fischer_bound(std::span<const BlockMatrix> mats) {
  FischerBound fb;
  const int n = mats[0].n();
  const double m = static_cast<double>(mats.size());
  fb.ratios.resize(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    fb.det_product *= determinant(mats[i].base());
    fb.log_det_product += log_det_pd(mats[i].base());
    for (int mu = 2; mu <= n; ++mu)
      fb.ratios[i].push_back(fischer_ratio(mats[i], mu));
  }
  fb.rhs = fb.det_product;
  fb.log_rhs = fb.log_det_product;
  for (int mu = 2; mu <= n; ++mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < mats.size(); ++i)
      s += fb.ratios[i][mu - 2];
    const double f = s - (m - 1.0);
    fb.mu_factors.push_back(f);
    fb.rhs *= f;
    fb.log_rhs += std::log(f);
  }
  return fb;
}

namespace detail {

//! Builds the certificate lhs >= FischerBound.rhs with log-domain fallback.
inline CheckResult fischer_bound_result(std::string name, double lhs, double log_lhs,
                                        const FischerBound &fb, const Tolerances &tol,
                                        const EvalOptions &opts, bool record_ratios = true) {
  CheckResult r = make_result(std::move(name), lhs, fb.rhs, tol);
  bool need_log = opts.force_log_domain || !linear_ok(lhs) || !linear_ok(fb.det_product) ||
                  !std::isfinite(fb.rhs);
  if (need_log && std::isfinite(log_lhs)) {
    r.log_domain = true;
    r.margin = margin_from_logs(log_lhs, fb.log_rhs);
    r.verdict = classify_margin(r.margin, tol);
    r.factors.push_back({"log_lhs", log_lhs});
    r.factors.push_back({"log_rhs", fb.log_rhs});
  }
  r.factors.push_back({"det_product", fb.det_product});
  for (std::size_t j = 0; j < fb.mu_factors.size(); ++j) {
    const std::string mu = "mu=" + std::to_string(j + 2);
    r.factors.push_back({mu + ":factor", fb.mu_factors[j]});
    if (record_ratios)
      for (std::size_t i = 0; i < fb.ratios.size(); ++i)
        r.factors.push_back({mu + ":ratio" + nth("", i), fb.ratios[i][j]});
  }
  return r;
}

inline std::pair<double, double> det_and_log(const HermitianMatrix &a) {
  const double d = determinant(a);
  const double ld = a.cholesky_ok() ? log_det_pd(a) : (d > 0 ? std::log(d) : -INFINITY);
  return {d, ld};
}

} // namespace detail

// -- classical scalar inequalities -----------------------------------------

//! prod a_ii >= det A.
inline CheckResult check_hadamard(const HermitianMatrix &a, const Tolerances &tol = {}) {
  detail::require_psd(a, tol, "A");
  CheckResult r = make_result("hadamard", detail::diag_product(a), determinant(a), tol);
  return r;
}

struct OppenheimChains {
  ChainResult direct;   // det(A o B) >= det A prod b_ii >= det(AB)
  ChainResult commuted; // det(A o B) >= det B prod a_ii >= det(AB)
  bool holds() const { return direct.holds() && commuted.holds(); }
};

inline OppenheimChains check_oppenheim_chain(const HermitianMatrix &a, const HermitianMatrix &b,
                                             const Tolerances &tol = {}) {
  require_same_order(a, b);
  detail::require_psd(a, tol, "A");
  detail::require_psd(b, tol, "B");
  const double dh = determinant(hadamard(a, b));
  const double da = determinant(a), db = determinant(b);
  const double dab = da * db;
  return {make_chain("oppenheim_chain",
                     {{"det(AoB)", dh}, {"detA*prod(b_ii)", da * detail::diag_product(b)},
                      {"det(AB)", dab}},
                     tol),
          make_chain("oppenheim_chain_commuted",
                     {{"det(AoB)", dh}, {"detB*prod(a_ii)", db * detail::diag_product(a)},
                      {"det(AB)", dab}},
                     tol)};
}

//! det(A o B) + det(AB) >= det A prod b_ii + det B prod a_ii.
inline CheckResult check_oppenheim_schur(const HermitianMatrix &a, const HermitianMatrix &b,
                                         const Tolerances &tol = {}) {
  require_same_order(a, b);
  detail::require_psd(a, tol, "A");
  detail::require_psd(b, tol, "B");
  const double dh = determinant(hadamard(a, b));
  const double da = determinant(a), db = determinant(b);
  const double pa = detail::diag_product(a), pb = detail::diag_product(b);
  CheckResult r = make_result("oppenheim_schur", dh + da * db, da * pb + db * pa, tol);
  r.factors = {{"det(AoB)", dh}, {"det(AB)", da * db}, {"detA*prod(b_ii)", da * pb},
               {"detB*prod(a_ii)", db * pa}};
  return r;
}

//! det(A o B) >= det(AB) prod_{mu=2}^n (a_mm det A_{m-1}/det A_m +
//! b_mm det B_{m-1}/det B_m - 1).
inline CheckResult check_chen(const HermitianMatrix &a, const HermitianMatrix &b,
                              const Tolerances &tol = {}, const EvalOptions &opts = {}) {
  require_same_order(a, b);
  detail::require_pd(a, tol, "A");
  detail::require_pd(b, tol, "B");
  const std::vector<BlockMatrix> pair{BlockMatrix(a, a.order(), 1), BlockMatrix(b, b.order(), 1)};
  const auto fb = fischer_bound(pair);
  const auto [d, ld] = detail::det_and_log(hadamard(a, b));
  return detail::fischer_bound_result("chen", d, ld, fb, tol, opts);
}

//! prod a_ii >= det A_11 det A_22 >= det A, split after row p.
inline ChainResult check_fischer(const HermitianMatrix &a, int p, const Tolerances &tol = {}) {
  if (p < 1 || p >= a.order())
    throw Error(ErrorKind::IndexOutOfRange, "Fischer split " + std::to_string(p) +
                                                " outside [1, " + std::to_string(a.order() - 1) +
                                                "]");
  detail::require_psd(a, tol, "A");
  const double d11 = determinant(principal_submatrix(a, 0, p));
  const double d22 = determinant(principal_submatrix(a, p, a.order() - p));
  return make_chain("fischer",
                    {{"prod(a_ii)", detail::diag_product(a)},
                     {"detA11*detA22", d11 * d22},
                     {"detA", determinant(a)}},
                    tol);
}

// -- block extensions ------------------------------------------------------

//! max over block pairs of max|A_ij B_rs - B_rs A_ij|.
inline double commutation_defect(const BlockMatrix &a, const BlockMatrix &b) {
  require_same_geometry(a, b);
  if (a.k() == 1)
    return 0.0;
  const int n = a.n();
  std::vector<DenseMatrix> ab, bb;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ab.push_back(a.block(i, j));
      bb.push_back(b.block(i, j));
    }
  double defect = 0.0;
  for (const auto &x : ab)
    for (const auto &y : bb)
      defect = std::max(defect, max_abs_entry(x * y - y * x));
  return defect;
}

enum class LinMode { Asserted, Exploratory };

//! det(A [] B) >= det(AB) prod_{mu=2}^n (Fischer ratio of A + Fischer ratio
//! of B - 1), where [] is the block Hadamard product. A theorem only when
//! every block of A commutes with every block of B; in exploratory mode the
//! commutation hypothesis is recorded but not required.
inline CheckResult check_lin_block(const BlockMatrix &a, const BlockMatrix &b,
                                   const Tolerances &tol = {}, LinMode mode = LinMode::Asserted,
                                   const EvalOptions &opts = {}) {
  require_same_geometry(a, b);
  detail::require_pd(a.base(), tol, "A");
  detail::require_pd(b.base(), tol, "B");
  const double defect = commutation_defect(a, b);
  const double defect_tol = tol.commute_tol * std::max(1.0, a.base().max_abs() * b.base().max_abs());
  if (mode == LinMode::Asserted && defect > defect_tol)
    throw Error(ErrorKind::NotCommuting,
                "commutation defect " + std::to_string(defect) + " exceeds " +
                    std::to_string(defect_tol));
  const BlockGrid grid = block_hadamard(a, b);
  double lhs, log_lhs, imag = 0.0;
  if (auto view = grid.hermitian_view()) {
    std::tie(lhs, log_lhs) = detail::det_and_log(view->base());
  } else {
    const Complex d = grid.determinant();
    lhs = d.real();
    imag = d.imag();
    log_lhs = lhs > 0 ? std::log(lhs) : -INFINITY;
  }
  const std::vector<BlockMatrix> pair{a, b};
  CheckResult r = detail::fischer_bound_result("lin_block", lhs, log_lhs, fischer_bound(pair), tol, opts);
  r.exploratory = mode == LinMode::Exploratory;
  r.factors.push_back({"commutation_defect", defect});
  r.factors.push_back({"lhs_imag", imag});
  r.factors.push_back({"grid_hermitian", grid.is_hermitian() ? 1.0 : 0.0});
  return r;
}

namespace detail {
inline void require_pd_family(std::span<const BlockMatrix> mats, const Tolerances &tol, std::size_t min_m) {
  if (mats.size() < min_m)
    throw Error(ErrorKind::InvalidArgument,
                "need at least " + std::to_string(min_m) + " matrices, got " + std::to_string(mats.size()));
  require_geometry(mats);
  for (std::size_t i = 0; i < mats.size(); ++i)
    require_pd(mats[i].base(), tol, nth("A", i));
}
} // namespace detail

//! Multi-matrix block Oppenheim bound:
//! det(o_i A^(i)) >= prod_i det A^(i) * prod_{mu=2}^n (sum_i ratio_i(mu) - (m-1)).
//! Requires m >= 2: at m = 1 the bound reads det A >= prod_mu det A_mumu,
//! which is Fischer's inequality reversed.
inline CheckResult check_main_multi(std::span<const BlockMatrix> mats, const Tolerances &tol = {},
                                    const EvalOptions &opts = {}) {
  detail::require_pd_family(mats, tol, 2);
  const FischerBound fb = fischer_bound(mats);
  const auto [d, ld] = detail::det_and_log(detail::entrywise_product(mats).base());
  CheckResult r = detail::fischer_bound_result("main_multi", d, ld, fb, tol, opts);
  for (std::size_t j = 0; j < fb.mu_factors.size(); ++j)
    r.conditions.push_back({"mu=" + std::to_string(j + 2) + ":factor>=1", fb.mu_factors[j],
                            1.0 - tol.ineq_rel_tol});
  return r;
}

//! Two-matrix case of check_main_multi.
inline CheckResult check_thm26(const BlockMatrix &a, const BlockMatrix &b, const Tolerances &tol = {},
                               const EvalOptions &opts = {}) {
  const std::vector<BlockMatrix> pair{a, b};
  CheckResult r = check_main_multi(pair, tol, opts);
  r.name = "thm26";
  return r;
}

//! det(o_i A^(i)) + (m-1) prod_i det A^(i) >=
//! sum_i prod_{j != i} det A^(j) * prod_mu det A^(i)_mumu, for PSD input.
inline CheckResult check_psd_sum(std::span<const BlockMatrix> mats, const Tolerances &tol = {}) {
  if (mats.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "need at least 2 matrices, got " + std::to_string(mats.size()));
  detail::require_geometry(mats);
  const std::size_t m = mats.size();
  std::vector<double> dets, diag_prods;
  for (std::size_t i = 0; i < m; ++i) {
    detail::require_psd(mats[i].base(), tol, detail::nth("A", i));
    dets.push_back(determinant(mats[i].base()));
    diag_prods.push_back(detail::diag_block_det_product(mats[i]));
  }
  double det_all = 1.0;
  for (double d : dets)
    det_all *= d;
  const double dh = determinant(detail::entrywise_product(mats).base());
  double rhs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i)
        others *= dets[j];
    rhs += others * diag_prods[i];
  }
  CheckResult r = make_result("psd_sum", dh + static_cast<double>(m - 1) * det_all, rhs, tol);
  r.factors.push_back({"det(oA)", dh});
  for (std::size_t i = 0; i < m; ++i) {
    r.factors.push_back({detail::nth("det", i), dets[i]});
    r.factors.push_back({detail::nth("diag_block_det_product", i), diag_prods[i]});
  }
  return r;
}

//! check_psd_sum at A^(i) + eps I for each eps, tracing the approach to the
//! semidefinite boundary.
inline std::vector<CheckResult> check_psd_sum_perturbed(std::span<const BlockMatrix> mats,
                                                        const std::vector<double> &eps,
                                                        const Tolerances &tol = {}) {
  std::vector<CheckResult> out;
  for (double e : eps) {
    std::vector<BlockMatrix> shifted;
    for (const auto &a : mats) {
      DenseMatrix s = a.base().entries();
      s.diagonal().array() += e;
      shifted.emplace_back(HermitianMatrix::hermitian_part(s), a.n(), a.k());
    }
    CheckResult r = check_psd_sum(shifted, tol);
    r.factors.insert(r.factors.begin(), {"eps", e});
    out.push_back(std::move(r));
  }
  return out;
}

// -- lemmas behind the block bound -----------------------------------------

//! The singular PSD matrix [[A_{p-1}, alpha], [alpha^*, a_pp - det A_p / det A_{p-1}]].
inline HermitianMatrix construct_hat(const HermitianMatrix &a, int p) {
  if (p < 2 || p > a.order())
    throw Error(ErrorKind::IndexOutOfRange, "hat index " + std::to_string(p) + " outside [2, " +
                                                std::to_string(a.order()) + "]");
  DenseMatrix h = leading_principal_submatrix(a, p).entries();
  const double ratio = determinant(leading_principal_submatrix(a, p)) /
                       determinant(leading_principal_submatrix(a, p - 1));
  h(p - 1, p - 1) -= ratio;
  return HermitianMatrix::hermitian_part(h);
}

inline CheckResult check_lemma21(const HermitianMatrix &a, const HermitianMatrix &b, int p,
                                 const Tolerances &tol = {}) {
  require_same_order(a, b);
  if (p < 2 || p > a.order())
    throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(p) + " outside [2, " +
                                                std::to_string(a.order()) + "]");
  detail::require_pd(a, tol, "A");
  detail::require_pd(b, tol, "B");
  const auto ap = leading_principal_submatrix(a, p), ap1 = leading_principal_submatrix(a, p - 1);
  const auto bp = leading_principal_submatrix(b, p), bp1 = leading_principal_submatrix(b, p - 1);
  const double dap = determinant(ap), dap1 = determinant(ap1);
  const double dbp = determinant(bp), dbp1 = determinant(bp1);
  const double hp = determinant(hadamard(ap, bp)), hp1 = determinant(hadamard(ap1, bp1));
  const double app = a(p - 1, p - 1).real(), bpp = b(p - 1, p - 1).real();
  CheckResult r = make_result("lemma21", hp / hp1 + (dap * dbp) / (dap1 * dbp1),
                              app * dbp / dbp1 + bpp * dap / dap1, tol);
  r.factors.push_back({"p", static_cast<double>(p)});
  const HermitianMatrix hats[2] = {construct_hat(a, p), construct_hat(b, p)};
  const char *labels[2] = {"hatA", "hatB"};
  for (int i = 0; i < 2; ++i) {
    const double lmin = hats[i].min_eigenvalue();
    const double ptol = psd_tol_for(hats[i], tol);
    r.factors.push_back({std::string(labels[i]) + ".min_eig", lmin});
    r.conditions.push_back({std::string(labels[i]) + " psd", lmin, -ptol});
    r.conditions.push_back({std::string(labels[i]) + " singular", -std::abs(lmin), -10.0 * ptol});
  }
  return r;
}

enum class Lemma22Mode {
  Strong, //!< X >= W >= Y, X >= Z >= Y, X + Y >= W + Z
  Weak,   //!< X >= W, X >= Z, X + Y >= W + Z
};

//! det X + det Y >= det W + det Z for PSD X, Y, W, Z under the Loewner
//! hypotheses of `mode`.
inline CheckResult check_lemma22(const HermitianMatrix &x, const HermitianMatrix &y,
                                 const HermitianMatrix &w, const HermitianMatrix &z,
                                 const Tolerances &tol = {}, Lemma22Mode mode = Lemma22Mode::Weak) {
  require_same_order(x, y);
  require_same_order(x, w);
  require_same_order(x, z);
  detail::require_psd(x, tol, "X");
  detail::require_psd(y, tol, "Y");
  detail::require_psd(w, tol, "W");
  detail::require_psd(z, tol, "Z");
  struct Hyp {
    const char *label;
    HermitianMatrix lhs, rhs;
  };
  std::vector<Hyp> hyps{{"X >= W", x, w}, {"X >= Z", x, z}};
  if (mode == Lemma22Mode::Strong) {
    hyps.push_back({"W >= Y", w, y});
    hyps.push_back({"Z >= Y", z, y});
  }
  hyps.push_back({"X + Y >= W + Z", HermitianMatrix::hermitian_part(x.entries() + y.entries()),
                  HermitianMatrix::hermitian_part(w.entries() + z.entries())});
  CheckResult r;
  std::vector<Condition> conds;
  for (const auto &h : hyps) {
    const auto gap = loewner_gap(h.lhs, h.rhs, tol);
    if (!gap.holds())
      throw Error(ErrorKind::HypothesisViolated,
                  std::string(h.label) + " fails (min eigenvalue of difference " +
                      std::to_string(gap.min_eigenvalue) + ")");
    conds.push_back({h.label, gap.min_eigenvalue, -gap.tol});
  }
  const double dx = determinant(x), dy = determinant(y), dw = determinant(w), dz = determinant(z);
  r = make_result("lemma22", dx + dy, dw + dz, tol);
  r.conditions = std::move(conds);
  r.factors = {{"detX", dx}, {"detY", dy}, {"detW", dw}, {"detZ", dz},
               {"strong_mode", mode == Lemma22Mode::Strong ? 1.0 : 0.0}};
  return r;
}

//! prod x_i + prod y_i >= prod w_i + prod z_i for nonnegative vectors with
//! x >= w >= y, x >= z >= y and x + y >= w + z elementwise.
inline CheckResult check_corollary23(const std::vector<double> &x, const std::vector<double> &y,
                                     const std::vector<double> &w, const std::vector<double> &z,
                                     const Tolerances &tol = {}) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n || w.size() != n || z.size() != n)
    throw Error(ErrorKind::DimensionMismatch, "corollary23 needs four non-empty vectors of equal length");
  double px = 1, py = 1, pw = 1, pz = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double slack = 1e-12 * std::max({1.0, x[i], y[i], w[i], z[i]});
    auto fail = [&](const char *what) {
      throw Error(ErrorKind::HypothesisViolated,
                  std::string(what) + " fails at index " + std::to_string(i));
    };
    if (!(y[i] >= 0) || !(w[i] >= 0) || !(z[i] >= 0) || !(x[i] >= 0))
      fail("nonnegativity");
    if (x[i] < w[i] - slack) fail("x >= w");
    if (w[i] < y[i] - slack) fail("w >= y");
    if (x[i] < z[i] - slack) fail("x >= z");
    if (z[i] < y[i] - slack) fail("z >= y");
    if (x[i] + y[i] < w[i] + z[i] - slack) fail("x + y >= w + z");
    px *= x[i];
    py *= y[i];
    pw *= w[i];
    pz *= z[i];
  }
  CheckResult r = make_result("corollary23", px + py, pw + pz, tol);
  r.factors = {{"prod(x)", px}, {"prod(y)", py}, {"prod(w)", pw}, {"prod(z)", pz}};
  return r;
}

struct Prop24Terms {
  HermitianMatrix s_ab; // (A_mu o B_mu) / (A_{mu-1} o B_{mu-1})
  HermitianMatrix s_a;  // A_mu / A_{mu-1}
  HermitianMatrix s_b;  // B_mu / B_{mu-1}
  HermitianMatrix a_mm; // A_{mu mu}
  HermitianMatrix b_mm; // B_{mu mu}
};

inline Prop24Terms prop24_terms(const BlockMatrix &a, const BlockMatrix &b, int mu,
                                const Tolerances &tol = {}) {
  const int split = (mu - 1) * a.k();
  const auto am = a.leading(mu).base(), bm = b.leading(mu).base();
  return {schur_complement(hadamard(am, bm), split, tol), schur_complement(am, split, tol),
          schur_complement(bm, split, tol), a.diagonal_block(mu - 1), b.diagonal_block(mu - 1)};
}

//! Schur-complement form of the block analogue of check_lemma21, with the Loewner
//! chains used in its proof attached as conditions:
//!   S_AB + S_A o S_B >= A_mm o S_B + B_mm o S_A
//!   S_AB >= A_mm o S_B >= S_A o S_B
//!   S_AB >= B_mm o S_A >= S_A o S_B
inline CheckResult check_prop24(const BlockMatrix &a, const BlockMatrix &b, int mu,
                                const Tolerances &tol = {}) {
  require_same_geometry(a, b);
  if (mu < 2 || mu > a.n())
    throw Error(ErrorKind::IndexOutOfRange,
                "index " + std::to_string(mu) + " outside [2, " + std::to_string(a.n()) + "]");
  detail::require_pd(a.base(), tol, "A");
  detail::require_pd(b.base(), tol, "B");
  const Prop24Terms t = prop24_terms(a, b, mu, tol);
  const HermitianMatrix sa_sb = hadamard(t.s_a, t.s_b);
  const HermitianMatrix amm_sb = hadamard(t.a_mm, t.s_b);
  const HermitianMatrix bmm_sa = hadamard(t.b_mm, t.s_a);
  const double t1 = determinant(t.s_ab), t2 = determinant(sa_sb);
  const double t3 = determinant(amm_sb), t4 = determinant(bmm_sa);
  CheckResult r = make_result("prop24", t1 + t2, t3 + t4, tol);
  r.factors = {{"mu", static_cast<double>(mu)},
               {"det(S_AB)", t1},
               {"det(S_A o S_B)", t2},
               {"det(A_mm o S_B)", t3},
               {"det(B_mm o S_A)", t4}};
  auto link = [&](const char *label, const HermitianMatrix &hi, const HermitianMatrix &lo) {
    const auto gap = loewner_gap(hi, lo, tol);
    r.conditions.push_back({label, gap.min_eigenvalue, -gap.tol});
  };
  link("sum: S_AB + S_A o S_B >= A_mm o S_B + B_mm o S_A",
       HermitianMatrix::hermitian_part(t.s_ab.entries() + sa_sb.entries()),
       HermitianMatrix::hermitian_part(amm_sb.entries() + bmm_sa.entries()));
  link("chainA: S_AB >= A_mm o S_B", t.s_ab, amm_sb);
  link("chainA: A_mm o S_B >= S_A o S_B", amm_sb, sa_sb);
  link("chainB: S_AB >= B_mm o S_A", t.s_ab, bmm_sa);
  link("chainB: B_mm o S_A >= S_A o S_B", bmm_sa, sa_sb);
  return r;
}

inline CheckResult check_lemma26(const BlockMatrix &a, const BlockMatrix &b, int mu,
                                 const Tolerances &tol = {}) {
  require_same_geometry(a, b);
  if (mu < 2 || mu > a.n())
    throw Error(ErrorKind::IndexOutOfRange,
                "index " + std::to_string(mu) + " outside [2, " + std::to_string(a.n()) + "]");
  detail::require_pd(a.base(), tol, "A");
  detail::require_pd(b.base(), tol, "B");
  const auto am = a.leading(mu).base(), am1 = a.leading(mu - 1).base();
  const auto bm = b.leading(mu).base(), bm1 = b.leading(mu - 1).base();
  const double dam = determinant(am), dam1 = determinant(am1);
  const double dbm = determinant(bm), dbm1 = determinant(bm1);
  const double hm = determinant(hadamard(am, bm)), hm1 = determinant(hadamard(am1, bm1));
  const double damm = determinant(a.diagonal_block(mu - 1));
  const double dbmm = determinant(b.diagonal_block(mu - 1));
  CheckResult r = make_result("lemma26", hm / hm1 + (dam * dbm) / (dam1 * dbm1),
                              damm * dbm / dbm1 + dbmm * dam / dam1, tol);
  r.factors = {{"mu", static_cast<double>(mu)}, {"det(A_mm)", damm}, {"det(B_mm)", dbmm}};
  return r;
}

// -- scalar product inequalities -------------------------------------------

//! prod_mu (sum_i a_i(mu) - (m-1)) >= sum_i prod_mu a_i(mu) - (m-1) for
//! entries >= 1.
inline CheckResult check_scalar_product_ineq(const std::vector<std::vector<double>> &a,
                                             const Tolerances &tol = {}) {
  if (a.empty() || a[0].empty())
    throw Error(ErrorKind::InvalidArgument, "need m >= 1 lists of n >= 1 entries");
  const std::size_t m = a.size(), n = a[0].size();
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n)
      throw Error(ErrorKind::DimensionMismatch, "list " + std::to_string(i) + " has length " +
                                                    std::to_string(a[i].size()) + ", expected " +
                                                    std::to_string(n));
    for (std::size_t mu = 0; mu < n; ++mu)
      if (!(a[i][mu] >= 1.0))
        throw Error(ErrorKind::HypothesisViolated, "entry a[" + std::to_string(i) + "][" +
                                                       std::to_string(mu) + "] < 1");
  }
  const double shift = static_cast<double>(m - 1);
  double lhs = 1.0;
  for (std::size_t mu = 0; mu < n; ++mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      s += a[i][mu];
    lhs *= s - shift;
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double p = 1.0;
    for (double v : a[i])
      p *= v;
    rhs += p;
  }
  rhs -= shift;
  return make_result("scalar_product", lhs, rhs, tol);
}

//! prod (a_mu + b_mu - 1) >= prod a_mu + prod b_mu - 1, cross-checked
//! against the two-list case of check_scalar_product_ineq.
inline CheckResult check_eqlin(const std::vector<double> &a, const std::vector<double> &b,
                               const Tolerances &tol = {}) {
  if (a.size() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "eqlin lists differ in length");
  const CheckResult general = check_scalar_product_ineq({a, b}, tol);
  double lhs = 1.0, pa = 1.0, pb = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lhs *= (a[i] + b[i]) - 1.0;
    pa *= a[i];
    pb *= b[i];
  }
  CheckResult r = make_result("eqlin", lhs, (pa + pb) - 1.0, tol);
  const double dl = std::abs(lhs - general.lhs) / std::max(std::abs(lhs), 1.0);
  const double dr = std::abs(r.rhs - general.rhs) / std::max(std::abs(r.rhs), 1.0);
  r.factors = {{"crosscheck_lhs_reldiff", dl}, {"crosscheck_rhs_reldiff", dr}};
  r.conditions = {{"agrees with scalar_product (lhs)", -dl, -1e-15},
                  {"agrees with scalar_product (rhs)", -dr, -1e-15}};
  return r;
}

//! The two induction factors at index mu:
//!   R = sum_{i<m} ratio_i(mu) - (m-2)
//!   S = ratio(o_{i<m} A^(i), mu) + ratio_m(mu) - 1
//! Certificate: R S >= R + S - 1, with R >= 1, S >= 1 and S >= ratio_m as
//! conditions.
inline CheckResult check_rs_factors(std::span<const BlockMatrix> mats, int mu,
                                    const Tolerances &tol = {}) {
  detail::require_pd_family(mats, tol, 2);
  if (mu < 2 || mu > mats[0].n())
    throw Error(ErrorKind::IndexOutOfRange,
                "index " + std::to_string(mu) + " outside [2, " + std::to_string(mats[0].n()) + "]");
  const std::size_t m = mats.size();
  double big_r = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i)
    big_r += fischer_ratio(mats[i], mu);
  big_r -= static_cast<double>(m) - 2.0;
  const BlockMatrix head = detail::entrywise_product(mats.first(m - 1));
  const double last = fischer_ratio(mats[m - 1], mu);
  const double big_s = fischer_ratio(head, mu) + last - 1.0;
  CheckResult r = make_result("rs_factors", big_r * big_s, big_r + big_s - 1.0, tol);
  r.factors = {{"mu", static_cast<double>(mu)}, {"R", big_r}, {"S", big_s}, {"ratio_last", last}};
  r.conditions = {{"R >= 1", big_r, 1.0 - tol.ineq_rel_tol},
                  {"S >= 1", big_s, 1.0 - tol.ineq_rel_tol},
                  {"S >= ratio_last", big_s - last, -tol.ineq_rel_tol * std::max(1.0, last)}};
  return r;
}

} // namespace blockopp
