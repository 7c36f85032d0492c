#include "harmcoc/affine.hpp"

#include <algorithm>

#include "harmcoc/errors.hpp"

namespace harmcoc {

CVector apply(const AffineAction& alpha, const Word& g, const CVector& v) {
  return alpha.rep.apply(g, v) + evaluate(alpha.rep, alpha.b, g);
}

Subspace invariant_span(const UnitaryRep& rep, const CMatrix& vectors, const Tolerances& tol, double scale) {
  const double ref = std::max(scale, vectors.size() > 0 ? vectors.colwise().norm().maxCoeff() : 0.0);
  Subspace current = Subspace::span(vectors, tol.rank, ref);
  for (Index iter = 0; iter < rep.dim && !current.is_zero() && !current.is_full(); ++iter) {
    const CMatrix& q = current.basis();
    CMatrix grown(rep.dim, q.cols() * (1 + 2 * static_cast<Index>(rep.images.size())));
    grown.leftCols(q.cols()) = q;
    Index off = q.cols();
    for (const auto& u : rep.images) {
      grown.middleCols(off, q.cols()) = u * q;
      off += q.cols();
      grown.middleCols(off, q.cols()) = u.adjoint() * q;
      off += q.cols();
    }
    Subspace next = Subspace::span(grown, tol.rank, 1.0);
    if (next.dim() == current.dim()) break;
    current = std::move(next);
  }
  return current;
}

Subspace cocycle_span(const UnitaryRep& rep, const Cocycle& b, const Tolerances& tol, double scale) {
  return invariant_span(rep, b.values, tol, scale);
}

IrreducibilityVerdict is_irreducible(const CocycleSpace& space, const Cocycle& b, Rng& rng, int trials) {
  const auto& rep = space.rep();
  const auto& tol = space.tolerances();
  IrreducibilityVerdict out;
  out.ambient_dim = rep.dim;
  out.projection = space.project_harmonic(b);
  // The span is read from the projection onto the computed Har basis, which
  // is exactly zero when Har is; ranks are relative to the size of b.
  const Cocycle b0 = space.gram_projection(b);
  out.projection_agreement = (b0.values - out.projection.harmonic.values).norm();
  const double scale = norm_q(rep, b);
  out.span_dim = cocycle_span(rep, b0, tol, scale).dim();
  out.irreducible = out.span_dim == rep.dim;
  if (out.irreducible) {
    for (int i = 0; i < trials; ++i) {
      CVector v = random_gaussian_vector(rep.dim, rng);
      Cocycle shifted = b + space.coboundary(v);
      ++out.sampler_trials;
      if (!cocycle_span(rep, shifted, tol, std::max(scale, norm_q(rep, shifted))).is_full())
        ++out.sampler_failures;
    }
  }
  return out;
}

bool is_separating(const VNAlgebra& m, const Cocycle& b, const Tolerances& tol) {
  if (m.dim() == 0) return true;
  CMatrix images(b.values.size(), m.dim());
  for (Index i = 0; i < m.dim(); ++i)
    images.col(i) = vec(m.basis()[static_cast<std::size_t>(i)] * b.values);
  return numerical_rank(images, tol.rank) == m.dim();
}

std::vector<CMatrix> restrict_to_har(const CocycleSpace& space, const VNAlgebra& m) {
  const Index d = space.rep().dim;
  const CMatrix q = space.har_embedded().basis();
  const Index points = q.rows() / std::max<Index>(d, 1);
  std::vector<CMatrix> out;
  for (const auto& t : m.basis()) {
    CMatrix tq(q.rows(), q.cols());
    for (Index p = 0; p < points; ++p) tq.middleRows(p * d, d) = t * q.middleRows(p * d, d);
    out.push_back(q.adjoint() * tq);
  }
  return out;
}

ExistenceReport exists_irreducible_affine(const CocycleSpace& space, Rng& rng) {
  const auto& tol = space.tolerances();
  const auto& rep = space.rep();
  ExistenceReport out;
  out.dim_har = space.dim_har();

  VNAlgebra m = commutant(rep, tol);
  BlockDecomposition dec = center_blocks(m, tol, rng());
  out.is_factor = dec.is_factor();

  for (const auto& blk : dec.blocks) {
    BlockVerdict bv;
    bv.factor_size = blk.factor_size;
    bv.multiplicity = blk.multiplicity;
    CMatrix restricted(space.har_basis().rows(), space.dim_har());
    for (Index i = 0; i < space.dim_har(); ++i)
      restricted.col(i) =
          vec(blk.projection * Cocycle::from_coords(space.har_basis().col(i), rep.dim, space.group().rank()).values);
    bv.dim_har = numerical_rank(space.embedding() * restricted, tol.rank, 1.0);
    bv.dim_vn = Rational::make(static_cast<std::int64_t>(bv.dim_har),
                               static_cast<std::int64_t>(blk.factor_size * blk.factor_size));
    bv.passes = bv.dim_har >= blk.factor_size * blk.factor_size;
    out.blocks.push_back(bv);
  }
  out.exists = std::all_of(out.blocks.begin(), out.blocks.end(), [](const auto& b) { return b.passes; });

  if (out.is_factor) {
    out.dim_vn = out.blocks.front().dim_vn;
    if (out.dim_har > 0) {
      auto restricted = restrict_to_har(space, m);
      VNAlgebra n = commutant_of(restricted, out.dim_har, tol);
      BlockDecomposition ndec = center_blocks(n, tol, rng());
      if (ndec.is_factor()) {
        auto nsize = static_cast<std::int64_t>(ndec.blocks.front().factor_size);
        out.dim_vn_commutant = Rational::make(static_cast<std::int64_t>(out.dim_har), nsize * nsize);
      }
    }
  }

  if (out.dim_har == 0) {
    out.diagnosis = "Har = 0";
  } else if (out.is_factor) {
    out.diagnosis = "type I_" + std::to_string(dec.blocks.front().factor_size) +
                    " factor (types II and III cannot occur in finite dimension); dim_M Har = " +
                    std::to_string(out.dim_vn->num) + "/" + std::to_string(out.dim_vn->den) +
                    (out.exists ? " >= 1" : " < 1");
  } else {
    out.diagnosis = "not a factor: decided blockwise over " + std::to_string(dec.blocks.size()) +
                    " central blocks (finite-sum reading of the central decomposition)";
  }

  if (out.exists) {
    for (int attempt = 1; attempt <= 16; ++attempt) {
      out.witness_attempts = attempt;
      Cocycle b = space.random_har(rng);
      if (!is_separating(m, b, tol)) continue;
      if (!is_irreducible(space, b, rng, 0).irreducible) continue;
      out.witness = std::move(b);
      break;
    }
    if (!out.witness)
      throw Error(ErrorKind::Numerical, "affine/exists_irreducible_affine", "WitnessNotFound",
                  "criterion holds but no generic harmonic cocycle was separating");
  }
  return out;
}

}  // namespace harmcoc
