#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "blockopp/block_matrix.hpp"

namespace blockopp {

enum class FieldMode { Real, Complex };

inline const char *to_string(FieldMode f) { return f == FieldMode::Real ? "real" : "complex"; }

enum class Family {
  GenericPd,
  PsdRankDeficient,
  CommutingFamily,
  Diagonal,
  NearIdentity,
  Lemma22Quadruple,
  ScalarVectorsGe1,
};

inline const char *to_string(Family f) {
  switch (f) {
  case Family::GenericPd: return "generic_pd";
  case Family::PsdRankDeficient: return "psd_rank_deficient";
  case Family::CommutingFamily: return "commuting_family";
  case Family::Diagonal: return "diagonal";
  case Family::NearIdentity: return "near_identity";
  case Family::Lemma22Quadruple: return "lemma22_quadruple";
  case Family::ScalarVectorsGe1: return "scalar_vectors_ge1";
  }
  return "?";
}

//! Boundary variants of the lemma22 quadruple construction.
enum class QuadrupleBoundary { None, ZeroE, ZeroAll };

inline const char *to_string(QuadrupleBoundary b) {
  switch (b) {
  case QuadrupleBoundary::None: return "none";
  case QuadrupleBoundary::ZeroE: return "zero_e";
  case QuadrupleBoundary::ZeroAll: return "zero_all";
  }
  return "?";
}

//! Seeded recipe for one random instance. Every generator is a pure function
//! of this value.
struct GeneratorSpec {
  std::uint64_t seed = 0;
  int n = 2;
  int k = 1;
  int m = 2;
  FieldMode field = FieldMode::Real;
  Family family = Family::GenericPd;
  int rank = 0;         // psd_rank_deficient; 0 means full rank n*k
  double epsilon = 0.0; // near_identity
  double magnitude = 1.0;
  QuadrupleBoundary boundary = QuadrupleBoundary::None;

  int order() const { return n * k; }
  int effective_rank() const { return rank == 0 ? order() : rank; }

  bool operator==(const GeneratorSpec &) const = default;
};

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t next, Rest... rest) {
  return derive_seed(mix64(base) ^ (next + 0x632be59bd9b4e019ULL), rest...);
}

namespace detail {

using Rng = std::mt19937_64;

inline void require_family(const GeneratorSpec &spec, std::initializer_list<Family> allowed,
                           const char *what) {
  for (Family f : allowed)
    if (spec.family == f)
      return;
  throw Error(ErrorKind::InvalidArgument,
              std::string(what) + " does not accept family " + to_string(spec.family));
}

inline void validate_matrix_spec(const GeneratorSpec &spec) {
  if (spec.n < 1 || spec.k < 1 || spec.m < 1)
    throw Error(ErrorKind::InvalidArgument, "generator needs n, k, m >= 1");
  if (!(spec.magnitude > 0))
    throw Error(ErrorKind::InvalidArgument, "matrix generators need magnitude > 0");
}

//! Entries with E|g|^2 = scale^2.
inline DenseMatrix gaussian(int rows, int cols, FieldMode field, double scale, Rng &rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  DenseMatrix g(rows, cols);
  const double s = field == FieldMode::Real ? scale : scale / std::sqrt(2.0);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = nd(rng);
      const double im = field == FieldMode::Real ? 0.0 : nd(rng);
      g(i, j) = Complex(s * re, s * im);
    }
  return g;
}

inline HermitianMatrix random_pd(int order, FieldMode field, double mag, Rng &rng) {
  const DenseMatrix g = gaussian(order, order, field, mag, rng);
  DenseMatrix a = g * g.adjoint();
  a.diagonal().array() += 1e-3 * mag * mag * order;
  return HermitianMatrix::hermitian_part(a);
}

inline HermitianMatrix random_psd(int order, int rank, FieldMode field, double mag, Rng &rng) {
  const DenseMatrix g = gaussian(order, rank, field, mag, rng);
  return HermitianMatrix::hermitian_part(g * g.adjoint());
}

inline DenseMatrix random_unitary(int k, FieldMode field, Rng &rng) {
  const DenseMatrix g = gaussian(k, k, field, 1.0, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(k, k);
  const DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0)
      q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline Rng member_rng(const GeneratorSpec &spec, std::uint64_t member) {
  return Rng(derive_seed(spec.seed, member));
}

} // namespace detail

//! G G^* + delta I with G of order n*k and delta = 1e-3 magnitude^2 n k.
//! `member` selects an independent draw within the same spec.
inline BlockMatrix gen_pd(const GeneratorSpec &spec, int member = 0) {
  detail::require_family(spec, {Family::GenericPd}, "gen_pd");
  detail::validate_matrix_spec(spec);
  auto rng = detail::member_rng(spec, static_cast<std::uint64_t>(member));
  return BlockMatrix(detail::random_pd(spec.order(), spec.field, spec.magnitude, rng), spec.n,
                     spec.k);
}

//! G G^* with G of shape n*k x rank.
inline BlockMatrix gen_psd_rank(const GeneratorSpec &spec, int member = 0) {
  detail::require_family(spec, {Family::PsdRankDeficient}, "gen_psd_rank");
  detail::validate_matrix_spec(spec);
  const int r = spec.effective_rank();
  if (r < 1 || r > spec.order())
    throw Error(ErrorKind::InvalidArgument,
                "rank " + std::to_string(r) + " outside [1, " + std::to_string(spec.order()) + "]");
  auto rng = detail::member_rng(spec, static_cast<std::uint64_t>(member));
  return BlockMatrix(detail::random_psd(spec.order(), r, spec.field, spec.magnitude, rng), spec.n,
                     spec.k);
}

struct CommutingFamily {
  BlockMatrix a;
  BlockMatrix b;
  DenseMatrix u;               // shared eigenbasis of every block
  std::vector<HermitianMatrix> ma, mb; // per-eigenindex n x n PD matrices
};

//! A_ij = U diag(M^A_1[i,j], ..., M^A_k[i,j]) U^*, likewise for B, with a
//! single random unitary U. Every block of A commutes with every block of B,
//! and both are permutation-similar to direct sums of the PD matrices M_t.
inline CommutingFamily gen_commuting_family(const GeneratorSpec &spec) {
  detail::require_family(spec, {Family::CommutingFamily}, "gen_commuting_family");
  detail::validate_matrix_spec(spec);
  const int n = spec.n, k = spec.k;
  auto rng = detail::member_rng(spec, 0);
  const DenseMatrix u = detail::random_unitary(k, spec.field, rng);
  std::vector<HermitianMatrix> ma, mb;
  for (int t = 0; t < k; ++t)
    ma.push_back(detail::random_pd(n, spec.field, spec.magnitude, rng));
  for (int t = 0; t < k; ++t)
    mb.push_back(detail::random_pd(n, spec.field, spec.magnitude, rng));
  auto assemble = [&](const std::vector<HermitianMatrix> &ms) {
    DenseMatrix out(n * k, n * k);
    Eigen::VectorXcd d(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int t = 0; t < k; ++t)
          d(t) = ms[t](i, j);
        out.block(i * k, j * k, k, k) = u * d.asDiagonal() * u.adjoint();
      }
    return BlockMatrix(HermitianMatrix::hermitian_part(out), n, k);
  };
  BlockMatrix a = assemble(ma);
  BlockMatrix b = assemble(mb);
  return {std::move(a), std::move(b), u, std::move(ma), std::move(mb)};
}

struct Quadruple {
  HermitianMatrix x, y, w, z;
};

//! Y, D1, D2, E random PSD; W = Y + D1, Z = Y + D2, X = Y + D1 + D2 + E.
inline Quadruple gen_lemma22_quadruple(const GeneratorSpec &spec) {
  detail::require_family(spec, {Family::Lemma22Quadruple}, "gen_lemma22_quadruple");
  detail::validate_matrix_spec(spec);
  const int order = spec.order();
  auto rng = detail::member_rng(spec, 0);
  std::uniform_int_distribution<int> rank_dist(1, order);
  auto psd = [&] {
    const int r = rank_dist(rng);
    return detail::random_psd(order, r, spec.field, spec.magnitude, rng).entries();
  };
  const DenseMatrix y = psd();
  DenseMatrix d1 = psd(), d2 = psd(), e = psd();
  if (spec.boundary != QuadrupleBoundary::None)
    e.setZero();
  if (spec.boundary == QuadrupleBoundary::ZeroAll) {
    d1.setZero();
    d2.setZero();
  }
  const DenseMatrix w = y + d1, z = y + d2;
  const DenseMatrix x = y + d1 + d2 + e;
  using H = HermitianMatrix;
  return {H::hermitian_part(x), H::hermitian_part(y), H::hermitian_part(w), H::hermitian_part(z)};
}

struct VectorQuadruple {
  std::vector<double> x, y, w, z;
};

//! Elementwise analogue of the quadruple: nonnegative vectors of length n*k.
inline VectorQuadruple gen_corollary23_vectors(const GeneratorSpec &spec) {
  detail::require_family(spec, {Family::Lemma22Quadruple}, "gen_corollary23_vectors");
  detail::validate_matrix_spec(spec);
  auto rng = detail::member_rng(spec, 1);
  std::normal_distribution<double> nd(0.0, 1.0);
  VectorQuadruple q;
  for (int i = 0; i < spec.order(); ++i) {
    const double y = std::abs(nd(rng)) * spec.magnitude;
    double d1 = std::abs(nd(rng)) * spec.magnitude;
    double d2 = std::abs(nd(rng)) * spec.magnitude;
    double e = std::abs(nd(rng)) * spec.magnitude;
    if (spec.boundary != QuadrupleBoundary::None)
      e = 0.0;
    if (spec.boundary == QuadrupleBoundary::ZeroAll)
      d1 = d2 = 0.0;
    q.y.push_back(y);
    q.w.push_back(y + d1);
    q.z.push_back(y + d2);
    q.x.push_back(y + d1 + d2 + e);
  }
  return q;
}

//! m lists of n entries 1 + |g| magnitude.
inline std::vector<std::vector<double>> gen_scalar_vectors_ge1(const GeneratorSpec &spec) {
  detail::require_family(spec, {Family::ScalarVectorsGe1}, "gen_scalar_vectors_ge1");
  if (spec.n < 1 || spec.m < 1 || spec.magnitude < 0)
    throw Error(ErrorKind::InvalidArgument, "scalar vectors need n, m >= 1 and magnitude >= 0");
  auto rng = detail::member_rng(spec, 0);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<std::vector<double>> a(spec.m, std::vector<double>(spec.n));
  for (auto &row : a)
    for (auto &v : row)
      v = 1.0 + std::abs(nd(rng)) * spec.magnitude;
  return a;
}

//! Tightness probes. Diagonal: exactly diagonal PD matrices. Near identity:
//! I + eps H with H Hermitian, |h_ij| <= 1, which is PD for eps < 1/(nk).
inline BlockMatrix gen_near_equality(const GeneratorSpec &spec, int member = 0) {
  detail::require_family(spec, {Family::Diagonal, Family::NearIdentity}, "gen_near_equality");
  detail::validate_matrix_spec(spec);
  const int order = spec.order();
  auto rng = detail::member_rng(spec, static_cast<std::uint64_t>(member));
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  if (spec.family == Family::Diagonal) {
    RealVector d(order);
    for (int i = 0; i < order; ++i)
      d(i) = spec.magnitude * spec.magnitude * std::exp(ud(rng));
    return BlockMatrix(HermitianMatrix::diagonal(d), spec.n, spec.k);
  }
  if (!(spec.epsilon >= 0.0) || spec.epsilon > 0.1)
    throw Error(ErrorKind::InvalidArgument, "near_identity needs 0 <= epsilon <= 0.1");
  DenseMatrix h = DenseMatrix::Zero(order, order);
  for (int i = 0; i < order; ++i) {
    h(i, i) = ud(rng);
    for (int j = i + 1; j < order; ++j) {
      Complex z = spec.field == FieldMode::Real ? Complex(ud(rng), 0.0)
                                                : Complex(ud(rng), ud(rng)) / std::sqrt(2.0);
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  DenseMatrix a = DenseMatrix::Identity(order, order) + spec.epsilon * h;
  return BlockMatrix(HermitianMatrix::hermitian_part(a), spec.n, spec.k);
}

//! spec.m matrices from one of the matrix families (commuting_family yields
//! its pair).
inline std::vector<BlockMatrix> gen_matrices(const GeneratorSpec &spec) {
  std::vector<BlockMatrix> out;
  switch (spec.family) {
  case Family::GenericPd:
    for (int i = 0; i < spec.m; ++i)
      out.push_back(gen_pd(spec, i));
    break;
  case Family::PsdRankDeficient:
    for (int i = 0; i < spec.m; ++i)
      out.push_back(gen_psd_rank(spec, i));
    break;
  case Family::Diagonal:
  case Family::NearIdentity:
    for (int i = 0; i < spec.m; ++i)
      out.push_back(gen_near_equality(spec, i));
    break;
  case Family::CommutingFamily: {
    auto cf = gen_commuting_family(spec);
    out.push_back(std::move(cf.a));
    out.push_back(std::move(cf.b));
    break;
  }
  case Family::Lemma22Quadruple: {
    auto q = gen_lemma22_quadruple(spec);
    for (auto *h : {&q.x, &q.y, &q.w, &q.z})
      out.emplace_back(*h, spec.n, spec.k);
    break;
  }
  case Family::ScalarVectorsGe1:
    throw Error(ErrorKind::InvalidArgument, "scalar_vectors_ge1 does not produce matrices");
  }
  return out;
}

} // namespace blockopp
