#include <cmath>

#include "harmcoc/linalg.hpp"
#include "support.hpp"

using namespace harmcoc;
using namespace harmcoc::testing;

TEST_CASE("numerical rank uses the larger of sigma_max and the scale floor") {
  CMatrix m = mat({{1.0, 0.0}, {0.0, 1e-12}});
  CHECK(numerical_rank(m, 1e-9) == 1);
  CMatrix tiny = mat({{1e-16}});
  CHECK(numerical_rank(tiny, 1e-9) == 1);
  CHECK(numerical_rank(tiny, 1e-9, 1.0) == 0);
}

TEST_CASE("null space is orthonormal and annihilated") {
  CMatrix m = mat({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}});
  CMatrix n = null_space(m, 1e-9);
  REQUIRE(n.cols() == 2);
  CHECK((m * n).norm() < 1e-12);
  CHECK((n.adjoint() * n - CMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("principal angle between two lines resolves small angles") {
  for (double a : {0.5, 1e-4, 1e-8}) {
    Subspace x = Subspace::span(vecof({1.0, 0.0, 0.0}), 1e-12);
    Subspace y = Subspace::span(vecof({std::cos(a), std::sin(a), 0.0}), 1e-12);
    CHECK(max_principal_angle(x, y) == doctest::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("principal angles are pi/2 when dimensions differ") {
  Subspace x = Subspace::span(vecof({1.0, 0.0}), 1e-12);
  CHECK(max_principal_angle(x, Subspace::full(2)) == doctest::Approx(M_PI / 2));
  CHECK(containment_residual(x, Subspace::full(2)) < 1e-12);
  CHECK(containment_residual(Subspace::full(2), x) > 0.5);
}

TEST_CASE("orthogonal complement and intersection") {
  Rng rng(3);
  CMatrix a = random_gaussian(5, 2, rng);
  Subspace s = Subspace::span(a, 1e-9);
  Subspace c = s.orthogonal_complement();
  CHECK(c.dim() == 3);
  CHECK((s.basis().adjoint() * c.basis()).norm() < 1e-12);
  CMatrix b(5, 2);
  b.col(0) = a.col(0);
  b.col(1) = random_gaussian_vector(5, rng);
  CHECK(intersect(s, Subspace::span(b, 1e-9), 1e-9).dim() == 1);
}

TEST_CASE("random unitary is unitary") {
  Rng rng(11);
  for (Index n : {1, 2, 5}) {
    CMatrix u = random_unitary(n, rng);
    CHECK((u.adjoint() * u - CMatrix::Identity(n, n)).norm() < 1e-12);
  }
}

TEST_CASE("projector of a span is idempotent and self-adjoint") {
  Rng rng(5);
  Subspace s = Subspace::span(random_gaussian(6, 3, rng), 1e-9);
  CMatrix p = s.projector();
  CHECK((p * p - p).norm() < 1e-10);
  CHECK((p - p.adjoint()).norm() < 1e-10);
}

TEST_CASE("vec and unvec are inverse") {
  Rng rng(2);
  CMatrix m = random_gaussian(3, 4, rng);
  CHECK((unvec(vec(m), 3, 4) - m).norm() == 0.0);
}
