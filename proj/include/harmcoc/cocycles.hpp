#pragma once

// 1-cocycles b(gh) = b(g) + pi(g) b(h), stored by their values on the positive
// generators. The space Z^1 is embedded in L^2(supp mu, C^d) by
// b -> (sqrt(mu(x)) b(x))_x, which realises the mu-inner product as the
// Euclidean one; coboundaries, harmonic cocycles and the projection onto
// them all live in that picture.

#include <optional>

#include "harmcoc/groups.hpp"
#include "harmcoc/linalg.hpp"
#include "harmcoc/reps.hpp"

namespace harmcoc {

struct Cocycle {
  CMatrix values;  // d x |S|; column s is b(s)

  Index dim() const { return values.rows(); }
  std::size_t rank() const { return static_cast<std::size_t>(values.cols()); }
  /// Stacked generator values (length |S| d).
  CVector coords() const { return vec(values); }
  static Cocycle from_coords(const CVector& c, Index dim, std::size_t rank);
  static Cocycle zero(Index dim, std::size_t rank) {
    return {CMatrix::Zero(dim, static_cast<Index>(rank))};
  }

  /// (T b)(g) = T b(g).
  Cocycle acted_on_by(const CMatrix& t) const { return {t * values}; }
  Cocycle operator+(const Cocycle& o) const { return {values + o.values}; }
  Cocycle operator-(const Cocycle& o) const { return {values - o.values}; }
};

/// The linear map (generator coordinates) -> b(w), size d x |S| d.
CMatrix evaluation_map(const UnitaryRep& rep, const Word& w);
/// b(s1...sn) = sum_k pi(s1...s_{k-1}) b(s_k), with b(s^-1) = -pi(s)^* b(s).
CVector evaluate(const UnitaryRep& rep, const Cocycle& b, const Word& w);

/// The |S| d x d map v -> (pi(s) v - v)_s.
CMatrix coboundary_map(const UnitaryRep& rep);
Cocycle coboundary(const UnitaryRep& rep, const CVector& v);

/// max over relators r of ||b(r)||.
double relator_residual(const GroupModel& group, const UnitaryRep& rep, const Cocycle& b);

/// sum_x mu(x) b(x).
CVector m_mu(const UnitaryRep& rep, const FinMeasure& mu, const Cocycle& b);
/// sum_x mu(x) <b(x), c(x)>, conjugate-linear in b.
cplx inner_mu(const UnitaryRep& rep, const FinMeasure& mu, const Cocycle& b, const Cocycle& c);
/// max over x in S u S^-1 of ||b(x)||.
double norm_q(const UnitaryRep& rep, const Cocycle& b);

struct Z1Solution {
  CMatrix basis;  // generator coordinates, Euclidean-orthonormal columns
  double max_residual = 0.0;  // largest relator residual over the basis
  Index dim() const { return basis.cols(); }
};

/// Solutions of sum_k pi(r_1...r_{k-1}) B_{r_k} = 0 for every relator r.
Z1Solution z1_relators(const GroupModel& group, const UnitaryRep& rep, const Tolerances& tol = {});

/**
 * Brute force for finite groups: one unknown b(g) per element and one
 * constraint b(gh) = b(g) + pi(g) b(h) per pair. The basis returned is the
 * restriction to generators. Throws Unsupported for infinite groups.
 */
Z1Solution z1_all_pairs(const GroupModel& group, const UnitaryRep& rep, const Tolerances& tol = {});

struct HarmonicProjection {
  Cocycle harmonic;  // b0 = b - d_v
  CVector shift;     // v = (pi0(mu) - I)^-1 M_mu(b)
};

/**
 * Z^1, B^1 and Har_mu for one (group, rep, measure). Built once, then
 * read-only.
 */
class CocycleSpace {
 public:
  /// Validates the representation; throws on violated relators.
  static CocycleSpace build(GroupModel group, UnitaryRep rep, FinMeasure mu, Tolerances tol = {});

  const GroupModel& group() const { return group_; }
  const UnitaryRep& rep() const { return rep_; }
  const FinMeasure& measure() const { return mu_; }
  const Tolerances& tolerances() const { return tol_; }
  const GapCertificate& gap() const { return gap_; }

  Index dim_z1() const { return z1_.cols(); }
  Index dim_b1() const { return b1_.cols(); }
  Index dim_har() const { return har_.cols(); }

  // Bases in generator coordinates, orthonormal for <.,.>_mu.
  const CMatrix& z1_basis() const { return z1_; }
  const CMatrix& b1_basis() const { return b1_; }
  const CMatrix& har_basis() const { return har_; }

  /// Generator coordinates -> L^2(supp mu, C^d).
  const CMatrix& embedding() const { return embed_; }
  Subspace z1_embedded() const { return Subspace::from_orthonormal(embed_ * z1_); }
  Subspace b1_embedded() const { return Subspace::from_orthonormal(embed_ * b1_); }
  Subspace har_embedded() const { return Subspace::from_orthonormal(embed_ * har_); }
  /// (B^1)^perp inside Z^1, computed independently of M_mu.
  Subspace b1_complement_in_z1() const;

  Cocycle z1_element(const CVector& coeffs) const;
  Cocycle har_element(const CVector& coeffs) const;
  Cocycle random_z1(Rng& rng) const;
  Cocycle random_har(Rng& rng) const;

  CVector m_mu(const Cocycle& b) const { return harmcoc::m_mu(rep_, mu_, b); }
  cplx inner_mu(const Cocycle& b, const Cocycle& c) const { return harmcoc::inner_mu(rep_, mu_, b, c); }
  Cocycle coboundary(const CVector& v) const { return harmcoc::coboundary(rep_, v); }
  /// b0 = b - d_v with v = (pi0(mu) - I)^-1 M_mu(b). Throws GapTooSmall.
  HarmonicProjection project_harmonic(const Cocycle& b) const;
  /// Orthogonal projection onto Har through the Gram matrix of the Har basis.
  Cocycle gram_projection(const Cocycle& b) const;

  /// Largest principal angle between ker M_mu cap Z^1 and (B^1)^perp cap Z^1.
  double orthogonality_angle() const;

 private:
  GroupModel group_;
  UnitaryRep rep_;
  FinMeasure mu_;
  Tolerances tol_;
  GapCertificate gap_;
  CMatrix z1_, b1_, har_;
  CMatrix embed_;
  CMatrix mean_;  // M_mu in generator coordinates

  CocycleSpace(GroupModel g, UnitaryRep r, FinMeasure m, Tolerances t)
      : group_(std::move(g)), rep_(std::move(r)), mu_(std::move(m)), tol_(t) {}
};

}  // namespace harmcoc
