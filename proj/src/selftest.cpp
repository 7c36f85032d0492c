#include <algorithm>
#include <cmath>
#include <functional>

#include "harmcoc/affine.hpp"
#include "harmcoc/catalogue.hpp"
#include "harmcoc/problem.hpp"

namespace harmcoc {

namespace {

struct Check {
  std::string name;
  double threshold;
  double worst = 0.0;
  int instances = 0;
  int violations = 0;

  void record(double residual) {
    worst = std::max(worst, residual);
    if (!(residual < threshold)) ++violations;
  }
  void require(bool ok) { record(ok ? 0.0 : threshold); }
  Json to_json() const {
    return {{"name", name}, {"threshold", threshold}, {"worst", worst},
            {"instances", instances}, {"violations", violations}, {"passed", violations == 0}};
  }
};

/// w with r inserted at a random position, r a conjugate of a relator or s s^-1.
Word equal_in_group(const GroupModel& g, const Word& w, Rng& rng) {
  Word r;
  std::uniform_int_distribution<int> coin(0, 1);
  if (!g.relators().empty() && coin(rng)) {
    std::uniform_int_distribution<std::size_t> pick(0, g.relators().size() - 1);
    Word u = random_word(g.rank(), 3, rng);
    r = concat(concat(u, g.relators()[pick(rng)]), inverse(u));
  } else {
    Word s = random_word(g.rank(), 1, rng);
    r = concat(s, inverse(s));
  }
  std::uniform_int_distribution<std::size_t> pos(0, w.size());
  auto at = static_cast<std::ptrdiff_t>(pos(rng));
  Word out(w.begin(), w.begin() + at);
  out.insert(out.end(), r.begin(), r.end());
  out.insert(out.end(), w.begin() + at, w.end());
  return out;
}

}  // namespace

Json run_selftest(std::uint64_t seed, int trials, const Tolerances& tol) {
  Rng rng(seed);
  const int samples = std::max(1, trials);
  std::vector<Instance> instances = random_instances(rng, 3, 3);

  Check vanishing{"finite_vanishing", 0.5};
  Check relator_vs_pairs{"relator_solver_matches_all_pairs", 0.5};
  Check orthogonality{"orthogonality_angle", 1e-8};
  Check projection{"projection_matches_gram", 1e-8};
  Check idempotence{"projection_idempotent", 1e-8};
  Check equivariance{"projection_equivariant", 1e-8};
  Check minimality{"span_minimality", 1e-8};
  Check defined{"well_defined_on_words", 1e-8};
  Check adjoint{"adjoint_constant_spread", 1e-8};
  Check blocks{"block_dimensions_sum", 0.5};
  Check fixed{"fixed_space_dimension", 0.5};

  for (const auto& inst : instances) {
    CocycleSpace s = CocycleSpace::build(inst.group, inst.rep, inst.mu, tol);
    const Index d = inst.rep.dim;

    if (inst.group.is_finite()) {
      ++vanishing.instances;
      vanishing.require(s.dim_har() == 0 && s.dim_z1() == s.dim_b1());
      ++relator_vs_pairs.instances;
      relator_vs_pairs.require(z1_all_pairs(inst.group, inst.rep, tol).dim() == s.dim_z1());
    }

    ++orthogonality.instances;
    orthogonality.record(s.orthogonality_angle());

    VNAlgebra m = commutant(inst.rep, tol);
    BlockDecomposition dec = center_blocks(m, tol, rng());
    Index total = 0;
    for (const auto& b : dec.blocks) total += b.factor_size * b.multiplicity;
    ++blocks.instances;
    blocks.require(total == d);

    ++fixed.instances;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(markov_operator(inst.rep, inst.mu));
    Index ones = (es.eigenvalues().array() > 1.0 - 1e-9).count();
    fixed.require(ones == fixed_and_reduced(inst.rep, tol).invariant.dim());

    ++projection.instances;
    ++idempotence.instances;
    ++equivariance.instances;
    ++minimality.instances;
    ++defined.instances;
    std::vector<cplx> ratios;
    for (int i = 0; i < samples; ++i) {
      Cocycle b = s.random_z1(rng);
      const double scale = std::max(1.0, norm_q(inst.rep, b));
      Cocycle b0 = s.project_harmonic(b).harmonic;
      projection.record((b0.values - s.gram_projection(b).values).norm() / scale);
      idempotence.record((s.project_harmonic(b0).harmonic.values - b0.values).norm() / scale);
      if (m.dim() > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, m.basis().size() - 1);
        const CMatrix& t = m.basis()[pick(rng)];
        Cocycle lhs = s.project_harmonic(b.acted_on_by(t)).harmonic;
        equivariance.record((lhs.values - t * b0.values).norm() / scale);
      }

      if (s.dim_har() > 0) {
        Cocycle h = s.random_har(rng);
        CVector v = random_gaussian_vector(d, rng);
        Subspace inner = cocycle_span(inst.rep, h, tol);
        Subspace outer = cocycle_span(inst.rep, h + s.coboundary(v), tol);
        minimality.record(containment_residual(inner, outer));
      }

      Word w1 = random_word(inst.group.rank(), 8, rng);
      Word w2 = equal_in_group(inst.group, w1, rng);
      if (inst.group.normal_form(w1) != inst.group.normal_form(w2)) {
        defined.record(1.0);
      } else {
        defined.record((evaluate(inst.rep, b, w1) - evaluate(inst.rep, b, w2)).norm() / scale);
      }

      CVector v = random_gaussian_vector(d, rng);
      cplx denom = v.dot(s.m_mu(b));
      if (std::abs(denom) > 1e-6 * v.norm() * std::max(1.0, s.m_mu(b).norm()))
        ratios.push_back(s.inner_mu(s.coboundary(v), b) / denom);
    }
    if (!ratios.empty()) {
      ++adjoint.instances;
      for (cplx r : ratios) adjoint.record(std::abs(r - ratios.front()));
    }
  }

  Json checks = Json::array();
  bool passed = true;
  for (const Check* c : {&vanishing, &relator_vs_pairs, &orthogonality, &projection, &idempotence, &equivariance,
                         &minimality, &defined, &adjoint, &blocks, &fixed}) {
    checks.push_back(c->to_json());
    passed = passed && c->violations == 0;
  }
  return {{"checks", checks}, {"instances", instances.size()}, {"passed", passed}};
}

}  // namespace harmcoc
