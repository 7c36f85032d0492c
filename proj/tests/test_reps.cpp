#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "harmcoc/catalogue.hpp"
#include "harmcoc/reps.hpp"
#include "support.hpp"

using namespace harmcoc;
using namespace harmcoc::testing;

namespace {

CMatrix rotation(double a) { return mat({{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}}); }

const UnitaryRep& s3_standard() {
  static const UnitaryRep r = catalogue_group("S3").irreps.back();
  return r;
}

UnitaryRep sum_of(std::vector<UnitaryRep> parts) { return direct_sum(std::span<const UnitaryRep>(parts)); }

}  // namespace

TEST_CASE("validate_rep") {
  CHECK(validate_rep(trivial_rep(2, 3), free_group(2)).max_relator == 0.0);
  CHECK(validate_rep(trivial_rep(2, 2), symmetric(3)).max_relator == 0.0);
  CHECK(validate_rep(character(0.7), free_group(1)).relator_residuals.empty());

  UnitaryRep bad{2, {rotation(2 * std::numbers::pi / 5)}};
  CHECK(error_code([&] { validate_rep(bad, cyclic(3)); }) == "RelatorViolated");
  UnitaryRep good{2, {rotation(2 * std::numbers::pi / 3)}};
  CHECK(validate_rep(good, cyclic(3)).max_relator < 1e-12);

  UnitaryRep skew{1, {mat({{1.1}})}};
  CHECK(error_code([&] { validate_rep(skew, free_group(1)); }) == "NotUnitary");
  CHECK(error_code([&] { validate_rep(trivial_rep(1, 2), free_group(2)); }) == "DimensionMismatch");
}

TEST_CASE("every catalogue irrep is a valid representation") {
  for (const auto& g : finite_catalogue())
    for (const auto& r : g.irreps) CHECK(validate_rep(r, g.group).max_relator < 1e-12);
}

TEST_CASE("fixed and reduced subspaces") {
  FixedSplit t = fixed_and_reduced(trivial_rep(1, 3));
  CHECK(t.invariant.dim() == 3);
  CHECK(t.reduced.dim() == 0);
  CHECK(fixed_and_reduced(character(0.3)).invariant.dim() == 0);

  CMatrix shift = CMatrix::Zero(3, 3);
  shift(1, 0) = shift(2, 1) = shift(0, 2) = 1.0;
  FixedSplit reg = fixed_and_reduced(UnitaryRep{3, {shift}});
  REQUIRE(reg.invariant.dim() == 1);
  CVector constants = CVector::Ones(3) / std::sqrt(3.0);
  CHECK(reg.invariant.distance_to(constants) < 1e-12);
  CHECK(reg.reduced.dim() == 2);
  CHECK((reg.invariant.basis().adjoint() * reg.reduced.basis()).norm() < 1e-12);
}

TEST_CASE("markov operator and gap certificate") {
  GroupModel z = free_group(1);
  FinMeasure mu = uniform_measure(z);
  CHECK((markov_operator(trivial_rep(1, 2), mu) - CMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(std::abs(markov_operator(character(std::numbers::pi / 2), mu)(0, 0)) < 1e-15);

  GapCertificate vacuous = b1_closed_certificate(trivial_rep(1, 2), mu);
  CHECK(vacuous.vacuous);
  CHECK(std::isinf(vacuous.gap));
  CHECK(b1_closed_certificate(character(std::numbers::pi / 2), mu).gap == doctest::Approx(1.0));

  GroupModel c2 = cyclic(2);
  FinMeasure delta = make_measure(c2, {{{1}, 1.0}});
  UnitaryRep sign{1, {mat({{-1.0}})}};
  CHECK(markov_operator(sign, delta)(0, 0).real() == doctest::Approx(-1.0));
  CHECK(b1_closed_certificate(sign, delta).gap == doctest::Approx(2.0));
}

TEST_CASE("commutant dimensions and blocks") {
  Rng rng(1);
  const UnitaryRep& sigma = s3_standard();
  VNAlgebra irr = commutant(sigma);
  CHECK(irr.dim() == 1);
  BlockDecomposition one = center_blocks(irr);
  CHECK(one.is_factor());
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0].factor_size == 1);

  UnitaryRep twice = conjugate(sum_of({sigma, sigma}), random_unitary(4, rng));
  VNAlgebra m2 = commutant(twice);
  CHECK(m2.dim() == 4);
  BlockDecomposition b2 = center_blocks(m2);
  CHECK(b2.is_factor());
  REQUIRE(b2.blocks.size() == 1);
  CHECK(b2.blocks[0].factor_size == 2);
  CHECK(b2.blocks[0].multiplicity == 2);

  UnitaryRep sign = catalogue_group("S3").irreps[1];
  UnitaryRep mixed = conjugate(sum_of({sigma, sign}), random_unitary(3, rng));
  VNAlgebra m3 = commutant(mixed);
  CHECK(m3.dim() == 2);
  BlockDecomposition b3 = center_blocks(m3);
  CHECK(!b3.is_factor());
  REQUIRE(b3.blocks.size() == 2);
  for (const auto& b : b3.blocks) CHECK(b.factor_size == 1);
  CMatrix total = CMatrix::Zero(3, 3);
  for (const auto& b : b3.blocks) total += b.projection;
  CHECK((total - CMatrix::Identity(3, 3)).norm() < 1e-8);
  CHECK((b3.blocks[0].projection * b3.blocks[1].projection).norm() < 1e-8);
}

TEST_CASE("von Neumann dimension") {
  Rng rng(4);
  CHECK(vn_dimension(commutant(s3_standard()), Subspace::full(2)) == Rational::make(2, 1));

  // M_2 on its standard form C^2 (x) C^2.
  std::vector<CMatrix> units;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      CMatrix e = CMatrix::Zero(2, 2);
      e(i, j) = 1.0;
      units.push_back(Eigen::kroneckerProduct(e, CMatrix::Identity(2, 2)).eval());
    }
  VNAlgebra standard = generated_algebra(units, 4);
  CHECK(standard.dim() == 4);
  CHECK(vn_dimension(standard, Subspace::full(4)) == Rational::make(1, 1));

  // M_m on C^k (x) C^m, realised as the commutant of sigma^{+m}; oracle dim K / dim M.
  for (int k : {1, 2}) {
    for (int m : {1, 2, 3}) {
      UnitaryRep sigma = k == 1 ? catalogue_group("S3").irreps[1] : s3_standard();
      UnitaryRep rep = random_multiple(sigma, m, rng);
      VNAlgebra comm = commutant(rep);
      Rational got = vn_dimension(comm, Subspace::full(rep.dim));
      CHECK(got == Rational::make(k, m));
      CHECK(got.value() == doctest::Approx(static_cast<double>(rep.dim) / static_cast<double>(comm.dim())));
    }
  }

  CHECK(error_code([&] { vn_dimension(commutant(sum_of({s3_standard(), catalogue_group("S3").irreps[1]})),
                                      Subspace::full(3)); }) == "NotFactor");
  UnitaryRep twice = sum_of({s3_standard(), s3_standard()});
  CHECK(error_code([&] { vn_dimension(commutant(twice), Subspace::span(CVector::Unit(4, 0), 1e-9)); }) ==
        "NotInvariant");
}

TEST_CASE("Rational arithmetic") {
  CHECK(Rational::make(6, 9) == Rational::make(2, 3));
  CHECK(Rational::make(2, -4) == Rational::make(-1, 2));
  CHECK(Rational::make(2, 3) * Rational::make(3, 2) == Rational::make(1, 1));
  CHECK(Rational::make(2, 3) < Rational::make(1, 1));
}

TEST_CASE("markov operator is a self-adjoint contraction with eigenvalue 1 exactly on fixed vectors") {
  Rng rng(8);
  for (const auto& inst : random_instances(rng, 4, 4)) {
    CMatrix p = markov_operator(inst.rep, inst.mu);
    CHECK((p - p.adjoint()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
    CHECK(es.eigenvalues().minCoeff() >= -1.0 - 1e-10);
    Index ones = (es.eigenvalues().array() > 1.0 - 1e-9).count();
    CHECK(ones == fixed_and_reduced(inst.rep).invariant.dim());
  }
  // A rep with a fixed vector: trivial + something.
  UnitaryRep r = conjugate(sum_of({trivial_rep(2, 1), random_free_rep(2, 2, rng)}), random_unitary(3, rng));
  CMatrix p = markov_operator(r, uniform_measure(free_group(2)));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  CHECK((es.eigenvalues().array() > 1.0 - 1e-9).count() == 1);
  CHECK(fixed_and_reduced(r).invariant.dim() == 1);
}

TEST_CASE("double commutant equals the generated algebra") {
  Rng rng(12);
  for (const auto& inst : random_instances(rng, 2, 4)) {
    VNAlgebra m = commutant(inst.rep);
    VNAlgebra mm = commutant_of(m.basis(), inst.rep.dim);
    VNAlgebra gen = generated_algebra(inst.rep.images, inst.rep.dim);
    REQUIRE(mm.dim() == gen.dim());
    for (const auto& t : mm.basis()) CHECK(gen.membership_residual(t) < 1e-8);
    for (const auto& t : gen.basis()) CHECK(mm.membership_residual(t) < 1e-8);
  }
}

TEST_CASE("commutant elements commute with images of random words") {
  Rng rng(13);
  for (const auto& inst : random_instances(rng, 2, 4)) {
    VNAlgebra m = commutant(inst.rep);
    CHECK(m.closure_residual() < 1e-8);
    for (int i = 0; i < 100; ++i) {
      CMatrix u = inst.rep.image(random_word(inst.group.rank(), 6, rng));
      for (const auto& t : m.basis()) CHECK((t * u - u * t).norm() < 1e-8);
    }
  }
}

TEST_CASE("block sizes times multiplicities add up to the dimension") {
  Rng rng(14);
  for (const auto& inst : random_instances(rng, 4, 4)) {
    BlockDecomposition dec = center_blocks(commutant(inst.rep), {}, rng());
    Index total = 0;
    for (const auto& b : dec.blocks) {
      total += b.factor_size * b.multiplicity;
      CHECK(b.rank == b.factor_size * b.multiplicity);
      CHECK(b.trace(b.projection).real() == doctest::Approx(1.0));
    }
    CHECK(total == inst.rep.dim);
  }
}
