#include "harmcoc/cocycles.hpp"

#include <algorithm>
#include <cmath>

#include "harmcoc/errors.hpp"

namespace harmcoc {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& op, const std::string& code,
                       const std::string& detail = {}) {
  throw Error(kind, "cocycles/" + op, code, detail);
}

// Rescales the columns of x (generator coordinates) so that they become
// orthonormal for the inner product given by embed.
CMatrix mu_orthonormalize(const CMatrix& x, const CMatrix& embed, double tol) {
  if (x.cols() == 0) return x;
  CMatrix y = embed * x;
  Eigen::JacobiSVD<CMatrix> svd(y, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  const double thresh = tol * std::max(sv(0), 1.0);
  while (r < sv.size() && sv(r) > thresh) ++r;
  CMatrix v = svd.matrixV().leftCols(r);
  return x * v * sv.head(r).cwiseInverse().asDiagonal();
}

}  // namespace

Cocycle Cocycle::from_coords(const CVector& c, Index dim, std::size_t rank) {
  return {unvec(c, dim, static_cast<Index>(rank))};
}

CMatrix evaluation_map(const UnitaryRep& rep, const Word& w) {
  const Index d = rep.dim;
  CMatrix e = CMatrix::Zero(d, d * static_cast<Index>(rep.images.size()));
  CMatrix p = CMatrix::Identity(d, d);
  for (Letter l : w) {
    const auto s = static_cast<Index>(std::abs(l)) - 1;
    const CMatrix& u = rep.images[static_cast<std::size_t>(s)];
    if (l > 0) {
      e.middleCols(s * d, d) += p;
      p = p * u;
    } else {
      CMatrix ui = u.adjoint();
      e.middleCols(s * d, d) -= p * ui;
      p = p * ui;
    }
  }
  return e;
}

CVector evaluate(const UnitaryRep& rep, const Cocycle& b, const Word& w) {
  const Index d = rep.dim;
  CVector acc = CVector::Zero(d);
  CMatrix p = CMatrix::Identity(d, d);
  for (Letter l : w) {
    const auto s = static_cast<Index>(std::abs(l)) - 1;
    const CMatrix& u = rep.images[static_cast<std::size_t>(s)];
    if (l > 0) {
      acc += p * b.values.col(s);
      p = p * u;
    } else {
      CMatrix ui = u.adjoint();
      acc -= p * (ui * b.values.col(s));
      p = p * ui;
    }
  }
  return acc;
}

CMatrix coboundary_map(const UnitaryRep& rep) {
  const Index d = rep.dim;
  CMatrix out(d * static_cast<Index>(rep.images.size()), d);
  for (std::size_t s = 0; s < rep.images.size(); ++s)
    out.middleRows(static_cast<Index>(s) * d, d) = rep.images[s] - CMatrix::Identity(d, d);
  return out;
}

Cocycle coboundary(const UnitaryRep& rep, const CVector& v) {
  Cocycle b = Cocycle::zero(rep.dim, rep.images.size());
  for (std::size_t s = 0; s < rep.images.size(); ++s)
    b.values.col(static_cast<Index>(s)) = rep.images[s] * v - v;
  return b;
}

double relator_residual(const GroupModel& group, const UnitaryRep& rep, const Cocycle& b) {
  double worst = 0.0;
  for (const auto& r : group.relators()) worst = std::max(worst, evaluate(rep, b, r).norm());
  return worst;
}

CVector m_mu(const UnitaryRep& rep, const FinMeasure& mu, const Cocycle& b) {
  CVector acc = CVector::Zero(rep.dim);
  for (const auto& p : mu.support) acc += p.weight * evaluate(rep, b, p.word);
  return acc;
}

cplx inner_mu(const UnitaryRep& rep, const FinMeasure& mu, const Cocycle& b, const Cocycle& c) {
  cplx acc = 0.0;
  for (const auto& p : mu.support) acc += p.weight * evaluate(rep, b, p.word).dot(evaluate(rep, c, p.word));
  return acc;
}

double norm_q(const UnitaryRep& rep, const Cocycle& b) {
  double worst = 0.0;
  for (std::size_t s = 0; s < rep.images.size(); ++s) {
    auto col = b.values.col(static_cast<Index>(s));
    worst = std::max(worst, col.norm());
    worst = std::max(worst, (rep.images[s].adjoint() * col).norm());  // ||b(s^-1)||
  }
  return worst;
}

Z1Solution z1_relators(const GroupModel& group, const UnitaryRep& rep, const Tolerances& tol) {
  const Index d = rep.dim;
  const Index unknowns = d * static_cast<Index>(group.rank());
  CMatrix system(d * static_cast<Index>(group.relators().size()), unknowns);
  for (std::size_t i = 0; i < group.relators().size(); ++i)
    system.middleRows(static_cast<Index>(i) * d, d) = evaluation_map(rep, group.relators()[i]);
  Z1Solution sol;
  sol.basis = null_space(system, tol.rank, 1.0);
  if (system.rows() > 0 && sol.basis.cols() > 0)
    sol.max_residual = (system * sol.basis).cwiseAbs().maxCoeff();
  return sol;
}

Z1Solution z1_all_pairs(const GroupModel& group, const UnitaryRep& rep, const Tolerances& tol) {
  const CayleyTable* t = group.table();
  if (!t) fail(ErrorKind::Unsupported, "z1_all_pairs", "UnsupportedGroupKind", "needs a finite group");
  const Index d = rep.dim;
  const auto n = static_cast<Index>(t->order);
  std::vector<CMatrix> images;
  for (std::size_t g = 0; g < t->order; ++g) images.push_back(rep.image(t->words[g]));

  // Row block (g, h): b(gh) - b(g) - pi(g) b(h) = 0.
  CMatrix system = CMatrix::Zero(n * n * d, n * d);
  const CMatrix id = CMatrix::Identity(d, d);
  for (Index g = 0; g < n; ++g)
    for (Index h = 0; h < n; ++h) {
      const Index row = (g * n + h) * d;
      const Index gh = (*t)(static_cast<std::uint32_t>(g), static_cast<std::uint32_t>(h));
      system.block(row, gh * d, d, d) += id;
      system.block(row, g * d, d, d) -= id;
      system.block(row, h * d, d, d) -= images[static_cast<std::size_t>(g)];
    }
  CMatrix ker = null_space(system, tol.rank, 1.0);
  Z1Solution sol;
  if (ker.cols() > 0) sol.max_residual = (system * ker).cwiseAbs().maxCoeff();
  CMatrix restricted(d * static_cast<Index>(group.rank()), ker.cols());
  for (std::size_t s = 0; s < group.rank(); ++s)
    restricted.middleRows(static_cast<Index>(s) * d, d) =
        ker.middleRows(static_cast<Index>(t->generator_elements[s]) * d, d);
  // Restriction to generators is injective on Z^1; re-orthonormalise.
  sol.basis = range_basis(restricted, tol.rank, 1.0);
  return sol;
}

CocycleSpace CocycleSpace::build(GroupModel group, UnitaryRep rep, FinMeasure mu, Tolerances tol) {
  validate_rep(rep, group, tol);
  CocycleSpace cs(std::move(group), std::move(rep), std::move(mu), tol);
  const Index d = cs.rep_.dim;
  const Index coords = d * static_cast<Index>(cs.group_.rank());

  const auto& support = cs.mu_.support;
  cs.embed_ = CMatrix(d * static_cast<Index>(support.size()), coords);
  cs.mean_ = CMatrix::Zero(d, coords);
  for (std::size_t i = 0; i < support.size(); ++i) {
    CMatrix e = evaluation_map(cs.rep_, support[i].word);
    cs.embed_.middleRows(static_cast<Index>(i) * d, d) = std::sqrt(support[i].weight) * e;
    cs.mean_ += support[i].weight * e;
  }

  Z1Solution z1 = z1_relators(cs.group_, cs.rep_, tol);
  cs.z1_ = mu_orthonormalize(z1.basis, cs.embed_, tol.rank);
  if (cs.z1_.cols() != z1.basis.cols())
    fail(ErrorKind::Numerical, "build", "EmbeddingNotInjective",
         "mu-norm degenerates on Z1; is the measure adapted?");

  cs.gap_ = b1_closed_certificate(cs.rep_, cs.mu_, tol);
  cs.b1_ = mu_orthonormalize(coboundary_map(cs.rep_) * cs.gap_.reduced.basis(), cs.embed_, tol.rank);

  CMatrix ker = null_space(cs.mean_ * cs.z1_, tol.rank, 1.0);
  cs.har_ = cs.z1_ * ker;
  return cs;
}

Subspace CocycleSpace::b1_complement_in_z1() const {
  CMatrix qz = embed_ * z1_;
  CMatrix qb = embed_ * b1_;
  CMatrix rest = qz - qb * (qb.adjoint() * qz);
  return Subspace::span(rest, tol_.rank, 1.0);
}

Cocycle CocycleSpace::z1_element(const CVector& coeffs) const {
  return Cocycle::from_coords(z1_ * coeffs, rep_.dim, group_.rank());
}

Cocycle CocycleSpace::har_element(const CVector& coeffs) const {
  return Cocycle::from_coords(har_ * coeffs, rep_.dim, group_.rank());
}

Cocycle CocycleSpace::random_z1(Rng& rng) const { return z1_element(random_gaussian_vector(dim_z1(), rng)); }

Cocycle CocycleSpace::random_har(Rng& rng) const {
  return har_element(random_gaussian_vector(dim_har(), rng));
}

HarmonicProjection CocycleSpace::project_harmonic(const Cocycle& b) const {
  HarmonicProjection out{b, CVector::Zero(rep_.dim)};
  if (gap_.vacuous) return out;
  if (!(gap_.gap > tol_.gap))
    fail(ErrorKind::GapTooSmall, "project_harmonic", "GapTooSmall", "gap " + format_residual(gap_.gap));
  const CMatrix& u0 = gap_.reduced.basis();
  CMatrix reduced_markov = u0.adjoint() * markov_operator(rep_, mu_) * u0;
  CMatrix herm = (reduced_markov + reduced_markov.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  Eigen::VectorXd inv = (es.eigenvalues().array() - 1.0).inverse();
  const CMatrix& v = es.eigenvectors();
  CVector mean = m_mu(b);
  out.shift = u0 * (v * (inv.cast<cplx>().asDiagonal() * (v.adjoint() * (u0.adjoint() * mean))));
  out.harmonic = b - coboundary(out.shift);
  return out;
}

Cocycle CocycleSpace::gram_projection(const Cocycle& b) const {
  const Index h = dim_har();
  if (h == 0) return Cocycle::zero(rep_.dim, group_.rank());
  std::vector<Cocycle> basis;
  for (Index i = 0; i < h; ++i) basis.push_back(Cocycle::from_coords(har_.col(i), rep_.dim, group_.rank()));
  CMatrix gram(h, h);
  CVector rhs(h);
  for (Index i = 0; i < h; ++i) {
    rhs(i) = inner_mu(basis[static_cast<std::size_t>(i)], b);
    for (Index j = 0; j < h; ++j)
      gram(i, j) = inner_mu(basis[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(j)]);
  }
  CVector c = gram.ldlt().solve(rhs);
  Cocycle out = Cocycle::zero(rep_.dim, group_.rank());
  for (Index i = 0; i < h; ++i) out.values += c(i) * basis[static_cast<std::size_t>(i)].values;
  return out;
}

double CocycleSpace::orthogonality_angle() const {
  return max_principal_angle(har_embedded(), b1_complement_in_z1());
}

}  // namespace harmcoc
