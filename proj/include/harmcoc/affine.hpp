#pragma once

// Affine isometric actions alpha(g) v = pi(g) v + b(g) and the decision
// procedures built on harmonic cocycles: irreducibility through the harmonic
// projection, separating vectors for pi(G)', and existence of an irreducible
// action with a given linear part.

#include <optional>
#include <string>
#include <vector>

#include "harmcoc/cocycles.hpp"
#include "harmcoc/reps.hpp"

namespace harmcoc {

struct AffineAction {
  UnitaryRep rep;
  Cocycle b;
};

/// pi(g) v + b(g).
CVector apply(const AffineAction& alpha, const Word& g, const CVector& v);

/**
 * Smallest pi(G)-invariant subspace containing the columns of `vectors`:
 * adjoin pi(s)^{+-1} applied to the current basis until the rank stops
 * growing. Rank decisions use tol.rank * max(sigma_max, scale).
 */
Subspace invariant_span(const UnitaryRep& rep, const CMatrix& vectors, const Tolerances& tol = {},
                        double scale = 0.0);

/// Closed span of b(G), i.e. invariant_span of the generator values.
Subspace cocycle_span(const UnitaryRep& rep, const Cocycle& b, const Tolerances& tol = {},
                      double scale = 0.0);

struct IrreducibilityVerdict {
  bool irreducible = false;
  HarmonicProjection projection;  // b0 = P_Har b and the shift v
  Index span_dim = 0;             // dim span(b0(G))
  /// ||b0 - orthogonal projection of b onto Har||.
  double projection_agreement = 0.0;
  Index ambient_dim = 0;
  int sampler_trials = 0;
  /// Sampled v with span((b + d_v)(G)) not full. Nonzero on an accepted action means a bug.
  int sampler_failures = 0;
};

/**
 * alpha_{pi,b} is irreducible iff span(P_Har b (G)) = H (B^1 is closed in
 * finite dimension). `trials` random translations are used only to try to
 * falsify a positive verdict.
 */
IrreducibilityVerdict is_irreducible(const CocycleSpace& space, const Cocycle& b, Rng& rng, int trials = 50);

/// T -> T b is injective on the algebra.
bool is_separating(const VNAlgebra& m, const Cocycle& b, const Tolerances& tol = {});

/// The algebra restricted to Har (matrices in the orthonormal embedded Har basis).
std::vector<CMatrix> restrict_to_har(const CocycleSpace& space, const VNAlgebra& m);

struct BlockVerdict {
  Index factor_size = 0;   // n, block of type I_n
  Index multiplicity = 0;  // j
  Index dim_har = 0;       // dim of P Har
  Rational dim_vn;         // dim_har / n^2
  bool passes = false;     // dim_vn >= 1
};

struct ExistenceReport {
  bool exists = false;
  bool is_factor = false;
  Index dim_har = 0;
  std::vector<BlockVerdict> blocks;
  std::optional<Rational> dim_vn;            // factor case: dim_M Har
  std::optional<Rational> dim_vn_commutant;  // factor case with Har != 0: dim_N Har
  std::optional<Cocycle> witness;            // verified separating and irreducible
  int witness_attempts = 0;
  std::string diagnosis;
};

/**
 * Existence of b with alpha_{pi,b} irreducible. For a factor pi(G)' of type
 * I_n this holds iff dim_M Har >= 1; otherwise every central block must pass
 * on its own. Witnesses are Gaussian in Har coordinates, up to 16 attempts.
 */
ExistenceReport exists_irreducible_affine(const CocycleSpace& space, Rng& rng);

}  // namespace harmcoc
