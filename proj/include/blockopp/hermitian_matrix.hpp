#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "blockopp/error.hpp"
#include "blockopp/tolerances.hpp"

namespace blockopp {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline double max_abs_entry(const DenseMatrix &a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

//! Dense Hermitian matrix with immutable shared storage.
//!
//! Construction checks conjugate symmetry to an absolute tolerance of 1e-12
//! and then stores the exact Hermitian part (A + A^*)/2. Copies share the
//! storage, including the lazily computed spectrum and Cholesky factor, so a
//! HermitianMatrix is cheap to pass by value and safe to read concurrently.
//!
//! Matrices whose imaginary parts are all zero are flagged real; the
//! factorizations then run on the real-symmetric path.
class HermitianMatrix {
public:
  static constexpr double kHermitianTol = 1e-12;

  explicit HermitianMatrix(const DenseMatrix &entries) {
    if (entries.rows() != entries.cols())
      throw Error(ErrorKind::DimensionMismatch, "matrix is not square (" +
                                                    std::to_string(entries.rows()) + "x" +
                                                    std::to_string(entries.cols()) + ")");
    if (entries.rows() == 0)
      throw Error(ErrorKind::InvalidArgument, "matrix order must be positive");
    const auto n = entries.rows();
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        const Complex z = entries(i, j);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
          throw Error(ErrorKind::NotFinite, "non-finite entry at (" + std::to_string(i) +
                                                "," + std::to_string(j) + ")");
        if (std::abs(z - std::conj(entries(j, i))) > kHermitianTol)
          throw Error(ErrorKind::NotHermitian, "entry (" + std::to_string(i) + "," +
                                                   std::to_string(j) +
                                                   ") is not the conjugate of its transpose");
      }
    init(entries);
  }

  explicit HermitianMatrix(const RealMatrix &entries)
      : HermitianMatrix(DenseMatrix(entries.cast<Complex>())) {}

  //! Stores the Hermitian part of `entries` without the symmetry check. For
  //! matrices that are Hermitian in exact arithmetic (Gram products, Schur
  //! complements) but carry rounding asymmetry.
  static HermitianMatrix hermitian_part(const DenseMatrix &entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
      throw Error(ErrorKind::DimensionMismatch, "hermitian_part needs a non-empty square matrix");
    return HermitianMatrix(entries, Trusted{});
  }

  static HermitianMatrix identity(int order) {
    return HermitianMatrix(DenseMatrix(DenseMatrix::Identity(order, order)), Trusted{});
  }

  static HermitianMatrix diagonal(const RealVector &d) {
    return HermitianMatrix(DenseMatrix(d.cast<Complex>().asDiagonal()), Trusted{});
  }

  int order() const { return static_cast<int>(data_->entries.rows()); }
  const DenseMatrix &entries() const { return data_->entries; }
  Complex operator()(int i, int j) const { return data_->entries(i, j); }
  bool is_real() const { return data_->real; }
  double max_abs() const { return data_->max_abs; }

  //! Same entries, with the real fast path disabled.
  HermitianMatrix complex_path() const {
    HermitianMatrix out(data_->entries, Trusted{});
    std::const_pointer_cast<Storage>(out.data_)->real = false;
    return out;
  }

  RealVector diagonal_entries() const { return data_->entries.diagonal().real(); }

  //! Ascending eigenvalues.
  const RealVector &eigenvalues() const {
    std::call_once(data_->eig_once, [this] {
      const auto &s = *data_;
      if (s.real) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(s.entries.real(), Eigen::EigenvaluesOnly);
        s.eig = es.eigenvalues();
      } else {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(s.entries, Eigen::EigenvaluesOnly);
        s.eig = es.eigenvalues();
      }
    });
    return data_->eig;
  }

  double min_eigenvalue() const { return eigenvalues()(0); }

  //! Diagonal of the Cholesky factor L (A = L L^*), empty when the
  //! factorization breaks down on a non-positive pivot.
  const RealVector &cholesky_diagonal() const {
    std::call_once(data_->chol_once, [this] {
      const auto &s = *data_;
      if (s.real) {
        Eigen::LLT<RealMatrix> llt(s.entries.real());
        if (llt.info() == Eigen::Success)
          s.chol = RealMatrix(llt.matrixL()).diagonal();
      } else {
        Eigen::LLT<DenseMatrix> llt(s.entries);
        if (llt.info() == Eigen::Success)
          s.chol = DenseMatrix(llt.matrixL()).diagonal().real();
      }
    });
    return data_->chol;
  }

  bool cholesky_ok() const { return cholesky_diagonal().size() == order(); }

private:
  struct Trusted {};

  struct Storage {
    DenseMatrix entries;
    bool real = false;
    double max_abs = 0.0;
    mutable std::once_flag eig_once;
    mutable RealVector eig;
    mutable std::once_flag chol_once;
    mutable RealVector chol;
  };

  HermitianMatrix(const DenseMatrix &entries, Trusted) { init(entries); }

  void init(const DenseMatrix &entries) {
    auto s = std::make_shared<Storage>();
    s->entries = (entries + entries.adjoint()) * 0.5;
    for (Eigen::Index i = 0; i < s->entries.rows(); ++i)
      s->entries(i, i) = Complex(s->entries(i, i).real(), 0.0);
    s->real = s->entries.imag().cwiseAbs().maxCoeff() == 0.0;
    s->max_abs = max_abs_entry(s->entries);
    data_ = std::move(s);
  }

  std::shared_ptr<const Storage> data_;
};

enum class DefinitenessTag { PositiveDefinite, PositiveSemidefinite, Indefinite };

inline const char *to_string(DefinitenessTag t) {
  switch (t) {
  case DefinitenessTag::PositiveDefinite: return "PositiveDefinite";
  case DefinitenessTag::PositiveSemidefinite: return "PositiveSemidefinite";
  case DefinitenessTag::Indefinite: return "Indefinite";
  }
  return "?";
}

struct Definiteness {
  DefinitenessTag tag;
  double min_eigenvalue;

  bool is_pd() const { return tag == DefinitenessTag::PositiveDefinite; }
  bool is_psd() const { return tag != DefinitenessTag::Indefinite; }
};

inline double psd_tol_for(const HermitianMatrix &a, const Tolerances &tol) {
  return tol.psd_tol(a.order(), a.max_abs());
}
inline double pd_tol_for(const HermitianMatrix &a, const Tolerances &tol) {
  return tol.pd_tol(a.order(), a.max_abs());
}

inline Definiteness classify_definiteness(const HermitianMatrix &a, const Tolerances &tol = {}) {
  const double lmin = a.min_eigenvalue();
  if (lmin > pd_tol_for(a, tol))
    return {DefinitenessTag::PositiveDefinite, lmin};
  if (lmin >= -psd_tol_for(a, tol))
    return {DefinitenessTag::PositiveSemidefinite, lmin};
  return {DefinitenessTag::Indefinite, lmin};
}

//! Product of squared Cholesky pivots when the factorization succeeds,
//! product of eigenvalues otherwise (singular PSD and indefinite input).
inline double determinant(const HermitianMatrix &a) {
  if (a.cholesky_ok()) {
    double d = 1.0;
    for (double l : a.cholesky_diagonal())
      d *= l * l;
    return d;
  }
  return a.eigenvalues().prod();
}

inline double log_det_pd(const HermitianMatrix &a) {
  if (!a.cholesky_ok())
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization broke down");
  return 2.0 * a.cholesky_diagonal().array().log().sum();
}

//! Determinant of a general square matrix by partial-pivot LU.
inline Complex general_determinant(const DenseMatrix &a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  if (a.rows() == 0)
    return 1.0;
  return Eigen::PartialPivLU<DenseMatrix>(a).determinant();
}

inline void require_same_order(const HermitianMatrix &a, const HermitianMatrix &b) {
  if (a.order() != b.order())
    throw Error(ErrorKind::DimensionMismatch,
                "orders differ: " + std::to_string(a.order()) + " vs " + std::to_string(b.order()));
}

inline HermitianMatrix hadamard(const HermitianMatrix &a, const HermitianMatrix &b) {
  require_same_order(a, b);
  return HermitianMatrix::hermitian_part(a.entries().cwiseProduct(b.entries()));
}

//! Ordinary product; in general not Hermitian.
inline DenseMatrix mat_mul(const HermitianMatrix &a, const HermitianMatrix &b) {
  require_same_order(a, b);
  return a.entries() * b.entries();
}

//! det(AB) through multiplicativity.
inline double det_of_product(const HermitianMatrix &a, const HermitianMatrix &b) {
  require_same_order(a, b);
  return determinant(a) * determinant(b);
}

//! Square principal submatrix on rows/columns [offset, offset + size).
inline HermitianMatrix principal_submatrix(const HermitianMatrix &a, int offset, int size) {
  if (size < 1 || offset < 0 || offset + size > a.order())
    throw Error(ErrorKind::IndexOutOfRange,
                "principal block [" + std::to_string(offset) + ", " +
                    std::to_string(offset + size) + ") outside order " + std::to_string(a.order()));
  return HermitianMatrix::hermitian_part(a.entries().block(offset, offset, size, size));
}

inline HermitianMatrix leading_principal_submatrix(const HermitianMatrix &a, int p) {
  if (p < 1 || p > a.order())
    throw Error(ErrorKind::IndexOutOfRange, "leading principal size " + std::to_string(p) +
                                                " outside [1, " + std::to_string(a.order()) + "]");
  if (p == a.order())
    return a;
  return principal_submatrix(a, 0, p);
}

//! A/A_11 = A_22 - A_21 A_11^{-1} A_12 where A_11 is the leading p x p block.
inline HermitianMatrix schur_complement(const HermitianMatrix &a, int p,
                                        const Tolerances &tol = {}) {
  if (p < 1 || p >= a.order())
    throw Error(ErrorKind::IndexOutOfRange, "Schur complement split " + std::to_string(p) +
                                                " outside [1, " + std::to_string(a.order() - 1) +
                                                "]");
  const HermitianMatrix a11 = leading_principal_submatrix(a, p);
  if (!classify_definiteness(a11, tol).is_pd())
    throw Error(ErrorKind::SingularLeadingBlock, "leading block of size " + std::to_string(p) +
                                                     " is not positive definite");
  const int q = a.order() - p;
  const auto &e = a.entries();
  if (a.is_real()) {
    const RealMatrix re = e.real();
    Eigen::LLT<RealMatrix> llt(re.topLeftCorner(p, p));
    const RealMatrix s =
        re.bottomRightCorner(q, q) - re.bottomLeftCorner(q, p) * llt.solve(re.topRightCorner(p, q));
    return HermitianMatrix::hermitian_part(s.cast<Complex>());
  }
  Eigen::LLT<DenseMatrix> llt(e.topLeftCorner(p, p));
  const DenseMatrix s =
      e.bottomRightCorner(q, q) - e.bottomLeftCorner(q, p) * llt.solve(e.topRightCorner(p, q));
  return HermitianMatrix::hermitian_part(s);
}

//! Smallest eigenvalue of A - B together with the threshold it is held to.
struct LoewnerGap {
  double min_eigenvalue;
  double tol;
  bool holds() const { return min_eigenvalue >= -tol; }
};

inline LoewnerGap loewner_gap(const HermitianMatrix &a, const HermitianMatrix &b,
                              const Tolerances &tol = {}) {
  require_same_order(a, b);
  const HermitianMatrix diff = HermitianMatrix::hermitian_part(a.entries() - b.entries());
  return {diff.min_eigenvalue(), tol.psd_tol(a.order(), std::max(a.max_abs(), b.max_abs()))};
}

//! A >= B in the Loewner order.
inline bool loewner_geq(const HermitianMatrix &a, const HermitianMatrix &b,
                        const Tolerances &tol = {}) {
  return loewner_gap(a, b, tol).holds();
}

} // namespace blockopp
