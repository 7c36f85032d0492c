#pragma once

// Named groups with known irreducible representations, and random unitary
// representations used by the self-test and the test suites.

#include <string>
#include <string_view>
#include <vector>

#include "harmcoc/groups.hpp"
#include "harmcoc/linalg.hpp"
#include "harmcoc/reps.hpp"

namespace harmcoc {

struct CatalogueGroup {
  std::string name;
  GroupModel group;
  std::vector<UnitaryRep> irreps;  // empty for infinite groups
};

/// "C<n>", "D<n>", "S3", "Q8", "F<k>", "Z", "Z<k>" (free abelian of rank k).
CatalogueGroup catalogue_group(std::string_view name);

/// C2, ..., C6, S3, D4, Q8.
std::vector<CatalogueGroup> finite_catalogue();

/// Direct sum of random irreducibles of total dimension dim, conjugated by a Haar unitary.
UnitaryRep random_finite_rep(const CatalogueGroup& g, Index dim, Rng& rng);
/// Independent Haar unitaries.
UnitaryRep random_free_rep(std::size_t rank, Index dim, Rng& rng);
/// Commuting unitaries with a shared random eigenbasis.
UnitaryRep random_abelian_rep(std::size_t rank, Index dim, Rng& rng);
/// Random rep of any catalogue group: finite, free or free abelian.
UnitaryRep random_rep(const CatalogueGroup& g, Index dim, Rng& rng);

/// sigma^{+m} conjugated by a Haar unitary.
UnitaryRep random_multiple(const UnitaryRep& sigma, int m, Rng& rng);

/// One character t -> e^{i theta} of Z.
UnitaryRep character(double theta);

struct Instance {
  std::string label;
  GroupModel group;
  UnitaryRep rep;
  FinMeasure mu;  // uniform on S u S^-1
};

/// `per_group` random reps of dimension 1..max_dim for each of F2, Z, Z2 and the finite catalogue.
std::vector<Instance> random_instances(Rng& rng, int per_group, Index max_dim);

}  // namespace harmcoc
