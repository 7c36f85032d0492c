#pragma once

// Gamma = G x| Z^(G) for a finite group G: G shifts the Z-valued base indexed
// by G. Elements are stored as pairs (g, f) read as the product g * n_f, where
// n_f is the finitely supported base element; the lamp generator t is the unit
// of the copy of Z at e.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "harmcoc/affine.hpp"
#include "harmcoc/cocycles.hpp"
#include "harmcoc/groups.hpp"
#include "harmcoc/reps.hpp"

namespace harmcoc {

struct WreathElement {
  std::uint32_t top = 0;                     // element index in G
  std::map<std::uint32_t, std::int64_t> base;  // f, zero entries omitted

  friend bool operator==(const WreathElement&, const WreathElement&) = default;
};

/// (g, f)(h, f') = (gh, h^-1 . f + f') with (k . f)(x) = f(k^-1 x).
WreathElement wr_mul(const CayleyTable& g, const WreathElement& x, const WreathElement& y);
WreathElement wr_inv(const CayleyTable& g, const WreathElement& x);

class WreathGroup {
 public:
  /// `base` must be finite. The lamp generator is named "t" unless G already uses it ("z" then).
  explicit WreathGroup(GroupModel base);

  const GroupModel& base() const { return base_; }
  /// Gamma as a GroupModel: generators of G then the lamp, relators of G plus
  /// [t, w(g) t w(g)^-1] for g != e.
  const GroupModel& model() const { return model_; }
  const CayleyTable& table() const { return *base_.table(); }
  Letter lamp() const { return static_cast<Letter>(base_.rank() + 1); }

  WreathElement identity() const { return {}; }
  WreathElement evaluate(const Word& w) const;
  /// w(g) * prod_x w(x) t^f(x) w(x)^-1.
  Word to_word(const WreathElement& x) const;

 private:
  GroupModel base_;
  GroupModel model_;
};

/// pi viewed on Gamma: trivial on the base Z^(G).
UnitaryRep extend_to_wreath(const UnitaryRep& rep);

/// mu = (1 - w) mu1 + w * (delta_t + delta_t^-1) / 2.
FinMeasure wreath_measure(const WreathGroup& gamma, const FinMeasure& mu1, double lamp_weight = 0.5);

/**
 * The cocycle on Gamma with restriction b1 to G and value v on t:
 * b(g n_f) = b1(g) + pi(g) sum_x f(x) pi(x) v.
 */
struct LiftedCocycle {
  Cocycle b1;  // on G
  CVector v;

  /// Generator values on Gamma (G's generators then t).
  Cocycle on_gamma() const;
};

LiftedCocycle lift_cocycle(const Cocycle& b1, const CVector& v);
/// Closed-form evaluation on an element of Gamma.
CVector evaluate_wr(const WreathGroup& gamma, const UnitaryRep& rep, const LiftedCocycle& b,
                    const WreathElement& x);

/// max ||b(xy) - b(x) - pi(x) b(y)|| over `pairs` random pairs; throws CocycleIdentityViolated above tol.
double lifted_cocycle_identity_residual(const WreathGroup& gamma, const UnitaryRep& rep,
                                        const LiftedCocycle& b, Rng& rng, int pairs,
                                        const Tolerances& tol = {});

struct WreathDecomposition {
  Index dim_har_base = 0;   // Har_{mu1}(G, pi); 0 for finite G
  Index dim_z1_base = 0;
  Index dim_b1_base = 0;
  Index dim_har_gamma = 0;  // computed on Gamma from its presentation
  Index dim_z1_gamma = 0;
  Index dim_b1_gamma = 0;
  /// Largest principal angle between {lift(0, v)} and Har_mu(Gamma, pi).
  double lift_angle = 0.0;
  /// max ||M_mu(lift(0, e_i))||.
  double lift_mean_residual = 0.0;
  std::shared_ptr<const CocycleSpace> gamma_space;
};

WreathDecomposition wreath_har_decomposition(const WreathGroup& gamma, const UnitaryRep& rep,
                                             const FinMeasure& mu1, double lamp_weight = 0.5,
                                             const Tolerances& tol = {});

struct CyclicityVerdict {
  bool exists = false;               // pi has a cyclic vector
  std::vector<FactorBlock> blocks;   // isotypic blocks; cyclic iff factor_size <= multiplicity everywhere
  std::optional<CVector> witness;    // a cyclic vector
  Index witness_span_dim = 0;
  /// Cross-check on Gamma: alpha_{pi, lift(0, witness)} irreducible.
  std::optional<bool> gamma_irreducible;
  std::optional<bool> gamma_separating;
};

/**
 * An irreducible affine action of Gamma with linear part pi exists iff pi is
 * cyclic. Decided from the block structure of pi(G)'; the witness is then
 * checked on Gamma when `decomposition` is given.
 */
CyclicityVerdict wreath_exists_irreducible(const WreathGroup& gamma, const UnitaryRep& rep, Rng& rng,
                                             const WreathDecomposition* decomposition = nullptr,
                                             const Tolerances& tol = {});

}  // namespace harmcoc
