#pragma once

#include <optional>
#include <string>

#include "blockopp/hermitian_matrix.hpp"

namespace blockopp {

//! An n x n grid of k x k blocks laid over a Hermitian matrix of order n*k.
//!
//! Block indices are zero-based. Sizes passed to the leading-principal
//! accessors count blocks, so `leading(mu)` is the top-left mu x mu block
//! submatrix with 1 <= mu <= n.
class BlockMatrix {
public:
  BlockMatrix(HermitianMatrix base, int n, int k) : base_(std::move(base)), n_(n), k_(k) {
    if (n < 1 || k < 1)
      throw Error(ErrorKind::InvalidArgument, "block grid needs n >= 1 and k >= 1");
    if (base_.order() != n * k)
      throw Error(ErrorKind::DimensionMismatch,
                  "base order " + std::to_string(base_.order()) + " != n*k = " +
                      std::to_string(n * k));
  }

  //! Grid with a single block.
  explicit BlockMatrix(HermitianMatrix base) : BlockMatrix(base, 1, base.order()) {}

  const HermitianMatrix &base() const { return base_; }
  int n() const { return n_; }
  int k() const { return k_; }
  int order() const { return n_ * k_; }

  DenseMatrix block(int i, int j) const {
    check_index(i);
    check_index(j);
    return base_.entries().block(i * k_, j * k_, k_, k_);
  }

  HermitianMatrix diagonal_block(int i) const {
    check_index(i);
    return principal_submatrix(base_, i * k_, k_);
  }

  BlockMatrix leading(int mu) const {
    if (mu < 1 || mu > n_)
      throw Error(ErrorKind::IndexOutOfRange, "leading block size " + std::to_string(mu) +
                                                  " outside [1, " + std::to_string(n_) + "]");
    if (mu == n_)
      return *this;
    return BlockMatrix(leading_principal_submatrix(base_, mu * k_), mu, k_);
  }

  BlockMatrix complex_path() const { return BlockMatrix(base_.complex_path(), n_, k_); }

private:
  void check_index(int i) const {
    if (i < 0 || i >= n_)
      throw Error(ErrorKind::IndexOutOfRange,
                  "block index " + std::to_string(i) + " outside [0, " + std::to_string(n_) + ")");
  }

  HermitianMatrix base_;
  int n_;
  int k_;
};

inline BlockMatrix block_leading_principal(const BlockMatrix &a, int mu) { return a.leading(mu); }

inline void require_same_geometry(const BlockMatrix &a, const BlockMatrix &b) {
  if (a.n() != b.n() || a.k() != b.k())
    throw Error(ErrorKind::DimensionMismatch, "block geometry (" + std::to_string(a.n()) + "," +
                                                  std::to_string(a.k()) + ") vs (" +
                                                  std::to_string(b.n()) + "," +
                                                  std::to_string(b.k()) + ")");
}

//! General (not necessarily Hermitian) square block grid, the output of the
//! block Hadamard product.
class BlockGrid {
public:
  static constexpr double kHermitianTol = 1e-10;

  BlockGrid(DenseMatrix entries, int n, int k) : entries_(std::move(entries)), n_(n), k_(k) {
    const double asym = max_abs_entry(entries_ - entries_.adjoint());
    hermitian_ = asym <= kHermitianTol * std::max(1.0, max_abs_entry(entries_));
  }

  const DenseMatrix &entries() const { return entries_; }
  int n() const { return n_; }
  int k() const { return k_; }
  bool is_hermitian() const { return hermitian_; }

  DenseMatrix block(int i, int j) const { return entries_.block(i * k_, j * k_, k_, k_); }

  //! Hermitian-typed view; empty unless the grid passed the symmetry check.
  std::optional<BlockMatrix> hermitian_view() const {
    if (!hermitian_)
      return std::nullopt;
    return BlockMatrix(HermitianMatrix::hermitian_part(entries_), n_, k_);
  }

  Complex determinant() const { return general_determinant(entries_); }

private:
  DenseMatrix entries_;
  int n_;
  int k_;
  bool hermitian_;
};

//! Block Hadamard product [A_ij B_ij]: blockwise ordinary matrix products.
//! For k = 1 this is the entrywise product, for n = 1 the matrix product.
//! Not to be confused with entrywise_hadamard on the full matrices.
inline BlockGrid block_hadamard(const BlockMatrix &a, const BlockMatrix &b) {
  require_same_geometry(a, b);
  const int n = a.n(), k = a.k();
  DenseMatrix out(n * k, n * k);
  const auto &ea = a.base().entries();
  const auto &eb = b.base().entries();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.block(i * k, j * k, k, k).noalias() =
          ea.block(i * k, j * k, k, k) * eb.block(i * k, j * k, k, k);
  return BlockGrid(std::move(out), n, k);
}

//! Ordinary entrywise product of the underlying n*k x n*k matrices, keeping
//! the block geometry.
inline BlockMatrix entrywise_hadamard(const BlockMatrix &a, const BlockMatrix &b) {
  require_same_geometry(a, b);
  return BlockMatrix(hadamard(a.base(), b.base()), a.n(), a.k());
}

} // namespace blockopp
