#include <set>

#include "harmcoc/affine.hpp"
#include "harmcoc/catalogue.hpp"
#include "support.hpp"

using namespace harmcoc;
using namespace harmcoc::testing;

namespace {

CocycleSpace space_of(const GroupModel& g, const UnitaryRep& r) { return CocycleSpace::build(g, r, uniform_measure(g)); }

UnitaryRep irreducible_free_rep(Index k, Rng& rng) {
  for (;;) {
    UnitaryRep r = random_free_rep(2, k, rng);
    if (commutant(r).dim() == 1) return r;
  }
}

UnitaryRep copies(const UnitaryRep& sigma, int m) {
  std::vector<UnitaryRep> parts(static_cast<std::size_t>(m), sigma);
  return direct_sum(std::span<const UnitaryRep>(parts));
}

}  // namespace

TEST_CASE("affine action evaluation") {
  Rng rng(1);
  GroupModel f2 = free_group(2);
  UnitaryRep r = random_free_rep(2, 2, rng);
  CocycleSpace s = space_of(f2, r);
  AffineAction alpha{r, s.random_z1(rng)};
  CVector v = random_gaussian_vector(2, rng);
  CHECK((apply(alpha, {}, v) - v).norm() == 0.0);

  CVector w = random_gaussian_vector(2, rng);
  AffineAction cob{r, coboundary(r, w)};
  for (int i = 0; i < 20; ++i) CHECK((apply(cob, random_word(2, 6, rng), -w) + w).norm() < 1e-12);

  UnitaryRep triv = trivial_rep(1, 1);
  AffineAction shift{triv, Cocycle{mat({{cplx(0.5, 2.0)}})}};
  CVector z = vecof({cplx(1.0, 1.0)});
  for (int n = -3; n <= 3; ++n)
    CHECK(std::abs(apply(shift, power({1}, n), z)(0) - (z(0) + static_cast<double>(n) * cplx(0.5, 2.0))) < 1e-14);

  // alpha(gh) = alpha(g) alpha(h).
  for (int i = 0; i < 50; ++i) {
    Word g = random_word(2, 4, rng), h = random_word(2, 4, rng);
    CHECK((apply(alpha, concat(g, h), v) - apply(alpha, g, apply(alpha, h, v))).norm() < 1e-12);
  }
}

TEST_CASE("invariant span") {
  Rng rng(2);
  UnitaryRep sigma = irreducible_free_rep(2, rng);
  CHECK(invariant_span(sigma, CMatrix::Zero(2, 1)).is_zero());
  CHECK(invariant_span(sigma, random_gaussian_vector(2, rng)).is_full());

  UnitaryRep twice = copies(sigma, 2);
  CVector v = CVector::Zero(4);
  v.head(2) = random_gaussian_vector(2, rng);
  Subspace s = invariant_span(twice, v);
  CHECK(s.dim() == 2);
  CMatrix first = CMatrix::Zero(4, 2);
  first.topRows(2) = CMatrix::Identity(2, 2);
  CHECK(max_principal_angle(s, Subspace::from_orthonormal(first)) < 1e-10);
}

TEST_CASE("cocycle span") {
  Rng rng(3);
  UnitaryRep triv = trivial_rep(1, 1);
  CHECK(cocycle_span(triv, Cocycle::zero(1, 1)).is_zero());
  CHECK(cocycle_span(triv, Cocycle{mat({{1.0}})}).is_full());

  // Oracle: span of b over ball(6).
  for (const auto& inst : random_instances(rng, 2, 3)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    Cocycle b = s.dim_har() > 0 && inst.rep.dim > 1 ? s.har_element(CVector::Unit(s.dim_har(), 0)) : s.random_z1(rng);
    std::vector<BallEntry> ball = inst.group.ball(inst.group.is_finite() ? 10 : 6);
    CMatrix values(inst.rep.dim, static_cast<Index>(ball.size()));
    for (std::size_t i = 0; i < ball.size(); ++i) values.col(static_cast<Index>(i)) = evaluate(inst.rep, b, ball[i].word);
    Subspace brute = Subspace::span(values, 1e-9, 1.0);
    Subspace got = cocycle_span(inst.rep, b, {}, 1.0);
    CHECK(got.dim() == brute.dim());
    CHECK(max_principal_angle(got, brute) < 1e-8);
  }
}

TEST_CASE("irreducibility examples") {
  Rng rng(4);
  GroupModel z = free_group(1);
  CocycleSpace chr = space_of(z, character(1.1));
  CHECK(!is_irreducible(chr, Cocycle{mat({{cplx(0.3, 0.4)}})}, rng).irreducible);

  CocycleSpace triv = space_of(z, trivial_rep(1, 1));
  IrreducibilityVerdict v = is_irreducible(triv, Cocycle{mat({{2.0}})}, rng);
  CHECK(v.irreducible);
  CHECK(v.sampler_failures == 0);

  UnitaryRep sigma = irreducible_free_rep(2, rng);
  CocycleSpace f = space_of(free_group(2), sigma);
  Cocycle h = f.random_har(rng);
  REQUIRE(numerical_rank(h.values, 1e-9) == 2);
  IrreducibilityVerdict w = is_irreducible(f, h, rng);
  CHECK(w.irreducible);
  CHECK(w.span_dim == 2);
  CHECK(w.sampler_trials == 50);
  CHECK(w.sampler_failures == 0);

  // A coboundary is never irreducible: it has a fixed point.
  CHECK(!is_irreducible(f, f.coboundary(random_gaussian_vector(2, rng)), rng).irreducible);
}

TEST_CASE("separating vectors") {
  Rng rng(5);
  UnitaryRep sigma = irreducible_free_rep(2, rng);
  CocycleSpace f = space_of(free_group(2), sigma);
  CHECK(is_separating(commutant(sigma), f.random_har(rng)));

  UnitaryRep twice = copies(sigma, 2);
  CocycleSpace s = space_of(free_group(2), twice);
  Cocycle h = f.random_har(rng);
  Cocycle b = Cocycle::zero(4, 2);
  b.values.topRows(2) = h.values;
  b.values.bottomRows(2) = 2.0 * h.values;
  CHECK(s.m_mu(b).norm() < 1e-10);
  VNAlgebra m = commutant(twice);
  CHECK(!is_separating(m, b));
  // The kernel element T = [[2, -1], [0, 0]] (x) I kills b.
  CMatrix t = CMatrix::Zero(4, 4);
  t.block(0, 0, 2, 2) = 2.0 * CMatrix::Identity(2, 2);
  t.block(0, 2, 2, 2) = -CMatrix::Identity(2, 2);
  CHECK(m.membership_residual(t) < 1e-10);
  CHECK(b.acted_on_by(t).values.norm() < 1e-10);
}

TEST_CASE("separating equals irreducible for harmonic cocycles in factor cases") {
  Rng rng(6);
  for (Index k : {1, 2, 3})
    for (int mult : {1, 2, 3}) {
      UnitaryRep rep = random_multiple(irreducible_free_rep(k, rng), mult, rng);
      CocycleSpace s = space_of(free_group(2), rep);
      VNAlgebra m = commutant(rep);
      for (int i = 0; i < 5; ++i) {
        Cocycle h = s.random_har(rng);
        CHECK(is_separating(m, h) == is_irreducible(s, h, rng, 0).irreducible);
      }
      // A harmonic cocycle living in one copy.
      Cocycle one = s.har_element(CVector::Unit(s.dim_har(), 0));
      CHECK(is_separating(m, one) == is_irreducible(s, one, rng, 0).irreducible);
    }
}

TEST_CASE("existence examples") {
  Rng rng(7);
  for (Index k : {1, 2, 3}) {
    CocycleSpace s = space_of(free_group(2), irreducible_free_rep(k, rng));
    ExistenceReport r = exists_irreducible_affine(s, rng);
    CHECK(r.exists);
    CHECK(r.is_factor);
    REQUIRE(r.dim_vn);
    CHECK(*r.dim_vn == Rational::make(k, 1));
    REQUIRE(r.witness);
    CHECK(is_irreducible(s, *r.witness, rng).irreducible);
  }

  UnitaryRep three = random_multiple(irreducible_free_rep(2, rng), 3, rng);
  ExistenceReport no = exists_irreducible_affine(space_of(free_group(2), three), rng);
  CHECK(!no.exists);
  CHECK(no.dim_har == 6);
  REQUIRE(no.dim_vn);
  CHECK(*no.dim_vn == Rational::make(2, 3));
  CHECK(!no.witness);

  ExistenceReport chr = exists_irreducible_affine(space_of(free_group(1), character(0.4)), rng);
  CHECK(!chr.exists);
  CHECK(chr.dim_har == 0);
  CHECK(chr.diagnosis == "Har = 0");
}

TEST_CASE("existence is decided blockwise for non-factors") {
  Rng rng(8);
  UnitaryRep a = irreducible_free_rep(1, rng), b = irreducible_free_rep(2, rng);
  std::vector<UnitaryRep> ok_parts = {a, b};
  ExistenceReport ok = exists_irreducible_affine(
      space_of(free_group(2), conjugate(direct_sum(std::span<const UnitaryRep>(ok_parts)), random_unitary(3, rng))), rng);
  CHECK(!ok.is_factor);
  CHECK(ok.exists);
  CHECK(ok.blocks.size() == 2);
  REQUIRE(ok.witness);

  // a + a + a + b: the block of a has dim_M = 1/3.
  std::vector<UnitaryRep> bad_parts = {a, a, a, b};
  ExistenceReport bad = exists_irreducible_affine(
      space_of(free_group(2), conjugate(direct_sum(std::span<const UnitaryRep>(bad_parts)), random_unitary(5, rng))),
      rng);
  CHECK(!bad.is_factor);
  CHECK(!bad.exists);
  int failing = 0;
  for (const auto& blk : bad.blocks)
    if (!blk.passes) {
      ++failing;
      CHECK(blk.factor_size == 3);
      CHECK(blk.dim_vn == Rational::make(1, 3));
    }
  CHECK(failing == 1);
}

TEST_CASE("span minimality under translation") {
  Rng rng(9);
  for (const auto& inst : random_instances(rng, 2, 4)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    if (s.dim_har() == 0) continue;
    for (int i = 0; i < 20; ++i) {
      Cocycle h = s.random_har(rng);
      Cocycle moved = h + s.coboundary(random_gaussian_vector(inst.rep.dim, rng));
      CHECK(containment_residual(cocycle_span(inst.rep, h), cocycle_span(inst.rep, moved)) < 1e-8);
    }
  }
}

TEST_CASE("translation conjugation") {
  Rng rng(10);
  for (const auto& inst : random_instances(rng, 1, 3)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    Cocycle b = s.random_z1(rng);
    CVector v = random_gaussian_vector(inst.rep.dim, rng);
    AffineAction alpha{inst.rep, b};
    AffineAction moved{inst.rep, b + s.coboundary(v)};
    for (int i = 0; i < 20; ++i) {
      Word g = random_word(inst.group.rank(), 5, rng);
      CVector w = random_gaussian_vector(inst.rep.dim, rng);
      CHECK((apply(moved, g, w) - (apply(alpha, g, w + v) - v)).norm() < 1e-10);
    }
  }
}

TEST_CASE("irreducibility verdict is invariant under adding coboundaries") {
  Rng rng(11);
  for (const auto& inst : random_instances(rng, 2, 3)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    for (int i = 0; i < 5; ++i) {
      Cocycle b = s.random_z1(rng);
      bool verdict = is_irreducible(s, b, rng, 0).irreducible;
      Cocycle moved = b + s.coboundary(random_gaussian_vector(inst.rep.dim, rng));
      CHECK(is_irreducible(s, moved, rng, 0).irreducible == verdict);
    }
  }
}

TEST_CASE("coupling reciprocity") {
  Rng rng(12);
  for (Index k : {1, 2, 3})
    for (int m : {1, 2, 3, 4}) {
      UnitaryRep rep = random_multiple(irreducible_free_rep(k, rng), m, rng);
      ExistenceReport r = exists_irreducible_affine(space_of(free_group(2), rep), rng);
      REQUIRE(r.dim_vn);
      REQUIRE(r.dim_vn_commutant);
      CHECK(std::abs((*r.dim_vn * *r.dim_vn_commutant).value() - 1.0) < 1e-9);
    }
}
