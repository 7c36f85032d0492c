#pragma once

// Dense complex linear algebra helpers: rank decisions, null spaces and
// subspaces compared through principal angles.

#include <complex>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace harmcoc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;
using Rng = std::mt19937_64;

/// Numerical tolerances shared by every module.
struct Tolerances {
  double rank = 1e-9;      // singular values <= rank * scale are treated as zero
  double residual = 1e-8;  // identities checked up to this residual
  double unitary = 1e-10;  // ||U*U - I|| for generator images
  double relator = 1e-8;   // ||pi(r) - I|| for relators
  double gap = 1e-8;       // smallest |1 - lambda| we are willing to invert
};

/// Largest singular value.
double operator_norm(const CMatrix& m);

/**
 * Number of singular values strictly above tol * max(sigma_max, scale).
 *
 * `scale` is a floor for the reference magnitude. Constraint systems built
 * from unitaries pass 1 so that a matrix that is zero up to rounding has rank
 * 0; spans of arbitrary vectors pass the magnitude of the data they came from.
 */
Index numerical_rank(const CMatrix& m, double tol, double scale = 0.0);

/// Orthonormal basis (columns) of ker(m), same threshold rule as numerical_rank.
CMatrix null_space(const CMatrix& m, double tol, double scale = 0.0);

/// Orthonormal basis of range(m).
CMatrix range_basis(const CMatrix& m, double tol, double scale = 0.0);

/**
 * A linear subspace of C^n held as an orthonormal basis.
 */
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient);
  static Subspace full(Index ambient);
  /// Span of the columns of `columns`.
  static Subspace span(const CMatrix& columns, double tol, double scale = 0.0);
  /// Wraps a basis that is already orthonormal.
  static Subspace from_orthonormal(CMatrix basis);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }
  const CMatrix& basis() const { return basis_; }

  CMatrix projector() const { return basis_ * basis_.adjoint(); }
  CVector project(const CVector& v) const { return basis_ * (basis_.adjoint() * v); }
  Subspace orthogonal_complement() const;

  /// ||(I - P) v||.
  double distance_to(const CVector& v) const { return (v - project(v)).norm(); }

 private:
  explicit Subspace(Index ambient, CMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}
  Index ambient_ = 0;
  CMatrix basis_;
};

/**
 * Principal angles between equal-dimensional subspaces, computed from the
 * sines (singular values of (I - P_a) B) so that angles near 1e-8 are
 * resolved. Sorted descending.
 */
std::vector<double> principal_angles(const Subspace& a, const Subspace& b);

/// Largest principal angle; pi/2 when the dimensions differ.
double max_principal_angle(const Subspace& a, const Subspace& b);

/// max_i ||(I - P_outer) q_i|| over the orthonormal basis q_i of inner.
double containment_residual(const Subspace& inner, const Subspace& outer);

/// Orthonormal basis of the intersection.
Subspace intersect(const Subspace& a, const Subspace& b, double tol);

CMatrix random_gaussian(Index rows, Index cols, Rng& rng);
CVector random_gaussian_vector(Index n, Rng& rng);
/// Haar-distributed unitary (QR of a complex Gaussian with phase fix).
CMatrix random_unitary(Index n, Rng& rng);

/// Block-diagonal sum of the given square matrices.
CMatrix direct_sum(std::span<const CMatrix> blocks);

/// Column-major vectorisation.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Index rows, Index cols);

}  // namespace harmcoc
