#pragma once

// Finite-dimensional unitary representations: validation, invariant vectors,
// the Markov operator pi(mu), commutants and their factor decomposition.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "harmcoc/groups.hpp"
#include "harmcoc/linalg.hpp"

namespace harmcoc {

/// Generator k acts by images[k]; real-entry input is just a complex matrix with zero imaginary part.
struct UnitaryRep {
  Index dim = 0;
  std::vector<CMatrix> images;

  /// pi(w), with pi(s^-1) = pi(s)^*.
  CMatrix image(const Word& w) const;
  /// pi(w) v without forming pi(w).
  CVector apply(const Word& w, const CVector& v) const;
};

UnitaryRep trivial_rep(std::size_t rank, Index dim);
/// Direct sum of representations of the same group.
UnitaryRep direct_sum(std::span<const UnitaryRep> parts);
/// W pi W^*.
UnitaryRep conjugate(const UnitaryRep& rep, const CMatrix& w);

struct RepCertificate {
  std::vector<double> unitary_residuals;  // per generator, ||U*U - I||
  std::vector<double> relator_residuals;  // per relator, ||pi(r) - I||
  double max_unitary = 0.0;
  double max_relator = 0.0;
};

/// Throws Validation errors NotUnitary / RelatorViolated / DimensionMismatch.
RepCertificate validate_rep(const UnitaryRep& rep, const GroupModel& group, const Tolerances& tol = {});

struct FixedSplit {
  Subspace invariant;  // H^G
  Subspace reduced;    // H^0 = (H^G)^perp
};

FixedSplit fixed_and_reduced(const UnitaryRep& rep, const Tolerances& tol = {});

/// pi(mu) = sum_x mu(x) pi(x) on the whole space.
CMatrix markov_operator(const UnitaryRep& rep, const FinMeasure& mu);

struct GapCertificate {
  /// min |1 - lambda| over the spectrum of pi0(mu); +inf when H^0 = 0.
  double gap = std::numeric_limits<double>::infinity();
  bool vacuous = true;
  Eigen::VectorXd eigenvalues;  // spectrum of pi0(mu), ascending
  Subspace reduced;
};

GapCertificate b1_closed_certificate(const UnitaryRep& rep, const FinMeasure& mu,
                                     const Tolerances& tol = {});

/// Exact rational number, always reduced with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational operator*(const Rational& a, const Rational& b);
bool operator<(const Rational& a, const Rational& b);

/// One minimal central projection P with P M P isomorphic to M_n acting with multiplicity j.
struct FactorBlock {
  CMatrix projection;
  Index rank = 0;          // = factor_size * multiplicity
  Index factor_size = 0;   // n (type I_n)
  Index multiplicity = 0;  // j

  /// Normalised trace on this block: Tr(P T P) / rank, so tau(P) = 1.
  cplx trace(const CMatrix& t) const;
};

/**
 * A *-closed algebra of d x d matrices given by a Hilbert-Schmidt orthonormal
 * basis.
 */
class VNAlgebra {
 public:
  VNAlgebra() = default;
  VNAlgebra(Index ambient, std::vector<CMatrix> basis) : ambient_(ambient), basis_(std::move(basis)) {}

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<CMatrix>& basis() const { return basis_; }

  /// Relative least-squares residual of t against the span of the basis.
  double membership_residual(const CMatrix& t) const;
  /// Largest distance from the algebra of products B_i B_j and adjoints B_i^*.
  double closure_residual() const;

 private:
  double distance_from(const CMatrix& t) const;

  Index ambient_ = 0;
  std::vector<CMatrix> basis_;
};

/// {T : T A = A T for every A in ops (and A^*)}.
VNAlgebra commutant_of(std::span<const CMatrix> ops, Index ambient, const Tolerances& tol = {});
/// pi(G)': commuting with generator images suffices.
VNAlgebra commutant(const UnitaryRep& rep, const Tolerances& tol = {});
/// Unital *-algebra generated by ops.
VNAlgebra generated_algebra(std::span<const CMatrix> ops, Index ambient, const Tolerances& tol = {});

struct BlockDecomposition {
  std::vector<CMatrix> center;  // basis of Z(M) = M cap M'
  std::vector<FactorBlock> blocks;
  bool is_factor() const { return center.size() == 1; }
};

/**
 * Centre and minimal central projections. Only type I_n can occur in finite
 * dimension. Throws Numerical/DegenerateBlock if the block structure is not
 * resolved at the rank tolerance.
 */
BlockDecomposition center_blocks(const VNAlgebra& m, const Tolerances& tol = {}, std::uint64_t seed = 1);

/// dim_M K = dim K / n^2 for a type I_n factor M; K must be M-invariant.
Rational vn_dimension(const VNAlgebra& factor, const Subspace& k, const Tolerances& tol = {});

}  // namespace harmcoc
