#include <cmath>
#include <numbers>

#include "harmcoc/catalogue.hpp"
#include "harmcoc/cocycles.hpp"
#include "support.hpp"

using namespace harmcoc;
using namespace harmcoc::testing;

namespace {

const double kPi = std::numbers::pi;

CocycleSpace space_of(const GroupModel& g, const UnitaryRep& r) { return CocycleSpace::build(g, r, uniform_measure(g)); }

/// Orthogonal projection onto Har solved from the Gram matrix of <.,.>_mu sums.
Cocycle gram_oracle(const CocycleSpace& s, const Cocycle& b) {
  const Index h = s.dim_har();
  std::vector<Cocycle> basis;
  for (Index i = 0; i < h; ++i)
    basis.push_back(Cocycle::from_coords(s.har_basis().col(i), s.rep().dim, s.group().rank()));
  CMatrix gram(h, h);
  CVector rhs(h);
  for (Index i = 0; i < h; ++i) {
    rhs(i) = inner_mu(s.rep(), s.measure(), basis[i], b);
    for (Index j = 0; j < h; ++j) gram(i, j) = inner_mu(s.rep(), s.measure(), basis[i], basis[j]);
  }
  CVector c = gram.fullPivLu().solve(rhs);
  Cocycle out = Cocycle::zero(s.rep().dim, s.group().rank());
  for (Index i = 0; i < h; ++i) out.values += c(i) * basis[i].values;
  return out;
}

}  // namespace

TEST_CASE("Z1 dimensions") {
  Rng rng(1);
  for (Index d : {1, 2, 3}) CHECK(space_of(free_group(2), random_free_rep(2, d, rng)).dim_z1() == 2 * d);

  GroupModel c3 = cyclic(3);
  UnitaryRep omega = catalogue_group("C3").irreps[1];
  CHECK(z1_relators(c3, omega).dim() == 1);
  CHECK(z1_relators(c3, trivial_rep(1, 1)).dim() == 0);
  CHECK(z1_all_pairs(c3, omega).dim() == 1);
  CHECK(z1_all_pairs(c3, trivial_rep(1, 1)).dim() == 0);
  CHECK(error_code([] { z1_all_pairs(free_group(2), trivial_rep(2, 1)); }) == "UnsupportedGroupKind");
}

TEST_CASE("relator solver agrees with the all-pairs solver on finite groups") {
  Rng rng(2);
  for (const auto& g : finite_catalogue())
    for (int i = 0; i < 5; ++i) {
      UnitaryRep r = random_finite_rep(g, 1 + i % 4, rng);
      Z1Solution a = z1_relators(g.group, r);
      Z1Solution b = z1_all_pairs(g.group, r);
      CHECK(a.dim() == b.dim());
      CHECK(a.max_residual < 1e-8);
      // Same subspace of generator coordinates.
      CHECK(max_principal_angle(Subspace::from_orthonormal(a.basis), Subspace::span(b.basis, 1e-9)) < 1e-8);
    }
}

TEST_CASE("relator-presented groups give the same Z1 as the normal-form kind") {
  GroupModel fp = finitely_presented({"a", "b"}, {"a b a^-1 b^-1"});
  CHECK(z1_relators(fp, trivial_rep(2, 1)).dim() == 2);
  Rng rng(3);
  UnitaryRep r = random_abelian_rep(2, 3, rng);
  CHECK(z1_relators(fp, r).dim() == z1_relators(free_abelian(2), r).dim());
  CocycleSpace s = CocycleSpace::build(fp, r, uniform_measure(fp));
  CHECK(s.dim_har() == space_of(free_abelian(2), r).dim_har());
  CHECK(!s.measure().second_moment_exact);
}

TEST_CASE("evaluation") {
  Rng rng(4);
  GroupModel f2 = free_group(2);
  UnitaryRep r = random_free_rep(2, 2, rng);
  CocycleSpace s = space_of(f2, r);
  Cocycle b = s.random_z1(rng);
  CHECK(evaluate(r, b, {}).norm() == 0.0);
  for (Letter l : {1, 2}) {
    CVector expect = -(r.images[static_cast<std::size_t>(l - 1)].adjoint() * b.values.col(l - 1));
    CHECK((evaluate(r, b, {-l}) - expect).norm() < 1e-14);
  }
  // Cocycle identity on sampled pairs.
  for (int i = 0; i < 200; ++i) {
    Word g = random_word(2, 5, rng), h = random_word(2, 5, rng);
    CVector lhs = evaluate(r, b, concat(g, h));
    CVector rhs = evaluate(r, b, g) + r.apply(g, evaluate(r, b, h));
    CHECK((lhs - rhs).norm() < 1e-12);
  }
  // evaluation_map agrees with evaluate.
  Word w = random_word(2, 7, rng);
  CHECK((evaluation_map(r, w) * b.coords() - evaluate(r, b, w)).norm() < 1e-12);
}

TEST_CASE("equal normal forms give equal values") {
  Rng rng(5);
  GroupModel s3 = symmetric(3);
  UnitaryRep r = random_finite_rep(catalogue_group("S3"), 3, rng);
  CocycleSpace s = space_of(s3, r);
  Cocycle b = s.random_z1(rng);
  int compared = 0;
  for (int i = 0; i < 2000 && compared < 300; ++i) {
    Word w1 = random_word(2, 6, rng), w2 = random_word(2, 6, rng);
    if (s3.normal_form(w1) != s3.normal_form(w2)) continue;
    ++compared;
    CHECK((evaluate(r, b, w1) - evaluate(r, b, w2)).norm() < 1e-8);
  }
  CHECK(compared > 100);
}

TEST_CASE("coboundaries") {
  Rng rng(6);
  UnitaryRep fixed = direct_sum(std::vector<UnitaryRep>{trivial_rep(1, 1), character(1.0)});
  CVector v = vecof({2.0, 0.0});
  CHECK(coboundary(fixed, v).values.norm() == 0.0);

  double theta = 0.8;
  CVector w = vecof({cplx(1.5, -0.5)});
  Cocycle d = coboundary(character(theta), w);
  CHECK(std::abs(d.values(0, 0) - (std::polar(1.0, theta) - 1.0) * w(0)) < 1e-15);

  GroupModel f2 = free_group(2);
  FinMeasure mu = uniform_measure(f2);
  UnitaryRep r = random_free_rep(2, 3, rng);
  CVector u = random_gaussian_vector(3, rng);
  CVector lhs = m_mu(r, mu, coboundary(r, u));
  CVector rhs = (markov_operator(r, mu) - CMatrix::Identity(3, 3)) * u;
  CHECK((lhs - rhs).norm() < 1e-12);
  CHECK(relator_residual(cyclic(4), catalogue_group("C4").irreps[1], coboundary(catalogue_group("C4").irreps[1], vecof({1.0}))) < 1e-14);
}

TEST_CASE("mean map") {
  Rng rng(7);
  // Homomorphisms into a trivially acted space have mean zero under a symmetric measure.
  GroupModel z2 = free_abelian(2);
  CocycleSpace t = space_of(z2, trivial_rep(2, 2));
  for (int i = 0; i < 10; ++i) CHECK(t.m_mu(t.random_z1(rng)).norm() < 1e-14);

  // M_mu(b) is orthogonal to the fixed vectors.
  UnitaryRep r = conjugate(direct_sum(std::vector<UnitaryRep>{trivial_rep(2, 1), random_free_rep(2, 2, rng)}),
                           random_unitary(3, rng));
  CocycleSpace s = space_of(free_group(2), r);
  Subspace fixed = fixed_and_reduced(r).invariant;
  REQUIRE(fixed.dim() == 1);
  for (int i = 0; i < 20; ++i) {
    Cocycle b = s.random_z1(rng);
    CHECK((fixed.basis().adjoint() * s.m_mu(b)).norm() < 1e-8);
    CHECK(s.m_mu(s.random_har(rng)).norm() < 1e-8);
  }
}

TEST_CASE("mu inner product") {
  Rng rng(8);
  GroupModel f2 = free_group(2);
  UnitaryRep r = random_free_rep(2, 2, rng);
  CocycleSpace s = space_of(f2, r);
  for (int i = 0; i < 20; ++i) {
    Cocycle b = s.random_z1(rng);
    cplx n2 = s.inner_mu(b, b);
    CHECK(n2.real() >= 0.0);
    CHECK(std::abs(n2.imag()) < 1e-14);
    double q = norm_q(r, b);
    CHECK(n2.real() <= s.measure().second_moment * q * q + 1e-12);
  }
  CHECK(std::abs(s.inner_mu(Cocycle::zero(2, 2), s.random_z1(rng))) == 0.0);

  // Disjoint coordinates: trivial rep, b lives in the first coordinate, c in the second.
  CocycleSpace t = space_of(f2, trivial_rep(2, 2));
  Cocycle b{mat({{1.0, 2.0}, {0.0, 0.0}})};
  Cocycle c{mat({{0.0, 0.0}, {3.0, -1.0}})};
  CHECK(std::abs(t.inner_mu(b, c)) == 0.0);

  // mu-norm over a richer support matches a direct sum over the support points.
  FinMeasure far = make_measure(f2, {{f2.parse_word("a b"), 0.25}, {f2.parse_word("b^-1 a^-1"), 0.25},
                                     {f2.parse_word("a"), 0.125}, {f2.parse_word("a^-1"), 0.125},
                                     {f2.parse_word("b"), 0.125}, {f2.parse_word("b^-1"), 0.125}});
  Cocycle x = s.random_z1(rng);
  double direct = 0.0;
  for (const auto& p : far.support) direct += p.weight * evaluate(r, x, p.word).squaredNorm();
  CHECK(inner_mu(r, far, x, x).real() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("harmonic subspace examples") {
  Rng rng(9);
  for (const auto& g : finite_catalogue()) {
    CocycleSpace s = space_of(g.group, random_finite_rep(g, 3, rng));
    CHECK(s.dim_har() == 0);
    CHECK(s.dim_z1() == s.dim_b1());
  }
  for (const auto& sigma : catalogue_group("S3").irreps) {
    if (sigma.dim == 1 && sigma.images[0](0, 0) == 1.0 && sigma.images[1](0, 0) == 1.0) continue;
    // An irreducible rep of F2 through S3 with no fixed vector: dim Har = 2k - k.
    CocycleSpace s = space_of(free_group(2), sigma);
    CHECK(s.dim_har() == sigma.dim);
    CHECK(s.dim_b1() == sigma.dim);
  }
  for (Index k : {1, 2, 3}) CHECK(space_of(free_group(2), random_free_rep(2, k, rng)).dim_har() == k);
  CocycleSpace t = space_of(free_abelian(2), trivial_rep(2, 1));
  CHECK(t.dim_har() == 2);
  CHECK(t.dim_z1() == 2);
  CHECK(t.dim_b1() == 0);
}

TEST_CASE("harmonic projection examples") {
  Rng rng(10);
  GroupModel f2 = free_group(2);
  UnitaryRep r = random_free_rep(2, 2, rng);
  CocycleSpace s = space_of(f2, r);

  Cocycle h = s.random_har(rng);
  HarmonicProjection p = s.project_harmonic(h);
  CHECK(p.shift.norm() < 1e-10);
  CHECK((p.harmonic.values - h.values).norm() < 1e-10);

  CVector w = random_gaussian_vector(2, rng);  // H^G = 0, so w lies in H^0
  HarmonicProjection q = s.project_harmonic(s.coboundary(w));
  CHECK((q.shift - w).norm() < 1e-10);
  CHECK(q.harmonic.values.norm() < 1e-10);

  for (int i = 0; i < 20; ++i) {
    Cocycle b = s.random_z1(rng);
    Cocycle b0 = s.project_harmonic(b).harmonic;
    CHECK((b0.values - gram_oracle(s, b).values).norm() < 1e-8);
    CHECK((b0.values - s.gram_projection(b).values).norm() < 1e-8);
    CHECK(s.m_mu(b0).norm() < 1e-8);
  }
}

TEST_CASE("projection refuses to invert a tiny gap") {
  GroupModel z = free_group(1);
  CocycleSpace s = space_of(z, character(1e-5));
  CHECK(s.gap().gap < 1e-8);
  CHECK(error_code([&] { s.project_harmonic(Cocycle{mat({{1.0}})}); }) == "GapTooSmall");
}

TEST_CASE("dimension bookkeeping") {
  Rng rng(11);
  for (const auto& inst : random_instances(rng, 3, 4)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    CHECK(s.dim_z1() == s.dim_b1() + s.dim_har());
    CHECK(s.dim_b1() == inst.rep.dim - fixed_and_reduced(inst.rep).invariant.dim());
    CHECK(containment_residual(s.b1_embedded(), s.z1_embedded()) < 1e-8);
    CHECK(containment_residual(s.har_embedded(), s.z1_embedded()) < 1e-8);
    if (s.dim_har() > 0 && s.dim_b1() > 0)
      CHECK((s.har_embedded().basis().adjoint() * s.b1_embedded().basis()).norm() < 1e-8);
  }
}

TEST_CASE("kernel of the mean equals the orthogonal complement of coboundaries") {
  Rng rng(12);
  for (const auto& inst : random_instances(rng, 3, 4)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    CHECK(s.orthogonality_angle() < 1e-8);
  }
}

TEST_CASE("adjoint of the coboundary map is a fixed multiple of the mean") {
  Rng rng(13);
  for (const auto& inst : random_instances(rng, 2, 3)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    std::vector<cplx> ratios;
    for (int i = 0; i < 100; ++i) {
      Cocycle b = s.random_z1(rng);
      CVector v = random_gaussian_vector(inst.rep.dim, rng);
      cplx denom = v.dot(s.m_mu(b));
      if (std::abs(denom) < 1e-6) continue;
      ratios.push_back(s.inner_mu(s.coboundary(v), b) / denom);
    }
    for (cplx c : ratios) CHECK(std::abs(c - ratios.front()) < 1e-8);
    // The measured value with this inner-product convention.
    if (!ratios.empty()) CHECK(std::abs(ratios.front() - cplx(-2.0, 0.0)) < 1e-8);
  }
}

TEST_CASE("projection is idempotent and equivariant under the commutant") {
  Rng rng(14);
  for (const auto& inst : random_instances(rng, 2, 4)) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu);
    VNAlgebra m = commutant(inst.rep);
    for (int i = 0; i < 10; ++i) {
      Cocycle b = s.random_z1(rng);
      HarmonicProjection p = s.project_harmonic(b);
      HarmonicProjection again = s.project_harmonic(p.harmonic);
      CHECK((again.harmonic.values - p.harmonic.values).norm() < 1e-8);
      CHECK(again.shift.norm() < 1e-8);
      for (const auto& t : m.basis()) {
        Cocycle lhs = s.project_harmonic(b.acted_on_by(t)).harmonic;
        CHECK((lhs.values - t * p.harmonic.values).norm() < 1e-8);
      }
    }
  }
}
