#include "harmcoc/reps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "harmcoc/errors.hpp"

namespace harmcoc {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& op, const std::string& code,
                       const std::string& detail = {}) {
  throw Error(kind, "reps/" + op, code, detail);
}

// Matrix of T -> T A - A T acting on vec(T) (column-major).
CMatrix commutator_map(const CMatrix& a) {
  const Index d = a.rows();
  CMatrix id = CMatrix::Identity(d, d);
  CMatrix out = CMatrix::Zero(d * d, d * d);
  // vec(T A) = (A^T kron I) vec(T); vec(A T) = (I kron A) vec(T)
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      out.block(i * d, j * d, d, d) += a(j, i) * id;
      if (i == j) out.block(i * d, j * d, d, d) -= a;
    }
  return out;
}

std::vector<CMatrix> basis_from_columns(const CMatrix& cols, Index d) {
  std::vector<CMatrix> out;
  for (Index k = 0; k < cols.cols(); ++k) out.push_back(unvec(cols.col(k), d, d));
  return out;
}

CMatrix stack_vecs(const std::vector<CMatrix>& ms, Index d) {
  CMatrix out(d * d, static_cast<Index>(ms.size()));
  for (std::size_t k = 0; k < ms.size(); ++k) out.col(static_cast<Index>(k)) = vec(ms[k]);
  return out;
}

}  // namespace

CMatrix UnitaryRep::image(const Word& w) const {
  CMatrix p = CMatrix::Identity(dim, dim);
  for (Letter l : w) {
    const CMatrix& u = images[static_cast<std::size_t>(std::abs(l)) - 1];
    p = l > 0 ? CMatrix(p * u) : CMatrix(p * u.adjoint());
  }
  return p;
}

CVector UnitaryRep::apply(const Word& w, const CVector& v) const {
  CVector x = v;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const CMatrix& u = images[static_cast<std::size_t>(std::abs(*it)) - 1];
    x = *it > 0 ? CVector(u * x) : CVector(u.adjoint() * x);
  }
  return x;
}

UnitaryRep trivial_rep(std::size_t rank, Index dim) {
  return UnitaryRep{dim, std::vector<CMatrix>(rank, CMatrix::Identity(dim, dim))};
}

UnitaryRep direct_sum(std::span<const UnitaryRep> parts) {
  UnitaryRep out;
  if (parts.empty()) return out;
  const std::size_t rank = parts.front().images.size();
  for (const auto& p : parts) {
    if (p.images.size() != rank) fail(ErrorKind::Validation, "direct_sum", "RankMismatch");
    out.dim += p.dim;
  }
  for (std::size_t s = 0; s < rank; ++s) {
    std::vector<CMatrix> blocks;
    for (const auto& p : parts) blocks.push_back(p.images[s]);
    out.images.push_back(harmcoc::direct_sum(std::span<const CMatrix>(blocks)));
  }
  return out;
}

UnitaryRep conjugate(const UnitaryRep& rep, const CMatrix& w) {
  UnitaryRep out{rep.dim, {}};
  for (const auto& u : rep.images) out.images.push_back(w * u * w.adjoint());
  return out;
}

RepCertificate validate_rep(const UnitaryRep& rep, const GroupModel& group, const Tolerances& tol) {
  const std::string op = "validate_rep";
  if (rep.images.size() != group.rank())
    fail(ErrorKind::Validation, op, "DimensionMismatch",
         "expected " + std::to_string(group.rank()) + " generator images");
  RepCertificate cert;
  for (std::size_t s = 0; s < rep.images.size(); ++s) {
    const CMatrix& u = rep.images[s];
    if (u.rows() != rep.dim || u.cols() != rep.dim)
      fail(ErrorKind::Validation, op, "DimensionMismatch", group.generators()[s]);
    double r = operator_norm(u.adjoint() * u - CMatrix::Identity(rep.dim, rep.dim));
    cert.unitary_residuals.push_back(r);
    cert.max_unitary = std::max(cert.max_unitary, r);
    if (!(r <= tol.unitary))
      fail(ErrorKind::Validation, op, "NotUnitary",
           group.generators()[s] + ", residual " + format_residual(r));
  }
  for (const auto& rel : group.relators()) {
    double r = operator_norm(rep.image(rel) - CMatrix::Identity(rep.dim, rep.dim));
    cert.relator_residuals.push_back(r);
    cert.max_relator = std::max(cert.max_relator, r);
    if (!(r <= tol.relator))
      fail(ErrorKind::Validation, op, "RelatorViolated",
           group.format_word(rel) + ", residual " + format_residual(r));
  }
  return cert;
}

FixedSplit fixed_and_reduced(const UnitaryRep& rep, const Tolerances& tol) {
  const Index d = rep.dim;
  CMatrix stacked(d * static_cast<Index>(rep.images.size()), d);
  for (std::size_t s = 0; s < rep.images.size(); ++s)
    stacked.middleRows(static_cast<Index>(s) * d, d) = rep.images[s] - CMatrix::Identity(d, d);
  Subspace fixed = Subspace::from_orthonormal(null_space(stacked, tol.rank, 1.0));
  return {fixed, fixed.orthogonal_complement()};
}

CMatrix markov_operator(const UnitaryRep& rep, const FinMeasure& mu) {
  CMatrix m = CMatrix::Zero(rep.dim, rep.dim);
  for (const auto& p : mu.support) m += p.weight * rep.image(p.word);
  return m;
}

GapCertificate b1_closed_certificate(const UnitaryRep& rep, const FinMeasure& mu, const Tolerances& tol) {
  GapCertificate cert;
  cert.reduced = fixed_and_reduced(rep, tol).reduced;
  if (cert.reduced.is_zero()) return cert;
  const CMatrix& u0 = cert.reduced.basis();
  CMatrix reduced_markov = u0.adjoint() * markov_operator(rep, mu) * u0;
  CMatrix herm = (reduced_markov + reduced_markov.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  cert.eigenvalues = es.eigenvalues();
  cert.vacuous = false;
  cert.gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < cert.eigenvalues.size(); ++i)
    cert.gap = std::min(cert.gap, std::abs(1.0 - cert.eigenvalues(i)));
  return cert;
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::Numerical, "reps/rational", "ZeroDenominator", "");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::make(a.num * b.num, a.den * b.den);
}

bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }

cplx FactorBlock::trace(const CMatrix& t) const {
  return (projection * t * projection).trace() / static_cast<double>(rank);
}

double VNAlgebra::distance_from(const CMatrix& t) const {
  CVector v = vec(t);
  CVector r = v;
  for (const auto& b : basis_) {
    CVector bv = vec(b);
    r -= bv * bv.dot(v);
  }
  return r.norm();
}

double VNAlgebra::membership_residual(const CMatrix& t) const {
  double nt = t.norm();
  return nt == 0.0 ? 0.0 : distance_from(t) / nt;
}

double VNAlgebra::closure_residual() const {
  // Basis elements have unit Hilbert-Schmidt norm, so absolute distances are on scale 1.
  double worst = 0.0;
  for (const auto& a : basis_) {
    worst = std::max(worst, distance_from(a.adjoint()));
    for (const auto& b : basis_) worst = std::max(worst, distance_from(a * b));
  }
  return worst;
}

VNAlgebra commutant_of(std::span<const CMatrix> ops, Index ambient, const Tolerances& tol) {
  if (ambient == 0) return VNAlgebra(0, {});
  std::vector<CMatrix> maps;
  for (const auto& a : ops) {
    maps.push_back(commutator_map(a));
    maps.push_back(commutator_map(a.adjoint()));
  }
  const Index n = ambient * ambient;
  CMatrix stacked(n * static_cast<Index>(maps.size()), n);
  for (std::size_t k = 0; k < maps.size(); ++k) stacked.middleRows(static_cast<Index>(k) * n, n) = maps[k];
  return VNAlgebra(ambient, basis_from_columns(null_space(stacked, tol.rank, 1.0), ambient));
}

VNAlgebra commutant(const UnitaryRep& rep, const Tolerances& tol) {
  return commutant_of(rep.images, rep.dim, tol);
}

VNAlgebra generated_algebra(std::span<const CMatrix> ops, Index ambient, const Tolerances& tol) {
  std::vector<CMatrix> gens;
  for (const auto& a : ops) {
    gens.push_back(a);
    gens.push_back(a.adjoint());
  }
  std::vector<CMatrix> current{CMatrix::Identity(ambient, ambient)};
  CMatrix basis = range_basis(stack_vecs(current, ambient), tol.rank, 1.0);
  for (Index iter = 0; iter <= ambient * ambient; ++iter) {
    std::vector<CMatrix> next = basis_from_columns(basis, ambient);
    const std::size_t base_count = next.size();
    for (std::size_t k = 0; k < base_count; ++k)
      for (const auto& g : gens) next.push_back(g * next[k]);
    CMatrix grown = range_basis(stack_vecs(next, ambient), tol.rank, 1.0);
    if (grown.cols() == basis.cols()) break;
    basis = grown;
  }
  return VNAlgebra(ambient, basis_from_columns(basis, ambient));
}

BlockDecomposition center_blocks(const VNAlgebra& m, const Tolerances& tol, std::uint64_t seed) {
  const std::string op = "center_blocks";
  BlockDecomposition out;
  const Index d = m.ambient_dim();
  const Index k = m.dim();
  if (k == 0) fail(ErrorKind::Validation, op, "EmptyAlgebra");

  // Z(M): coefficients c with [sum_i c_i B_i, B_j] = 0 for all j.
  const Index n = d * d;
  CMatrix system(n * k, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i) {
      const auto& bi = m.basis()[static_cast<std::size_t>(i)];
      const auto& bj = m.basis()[static_cast<std::size_t>(j)];
      system.block(j * n, i, n, 1) = vec(bi * bj - bj * bi);
    }
  CMatrix coeffs = null_space(system, tol.rank, 1.0);
  for (Index c = 0; c < coeffs.cols(); ++c) {
    CMatrix z = CMatrix::Zero(d, d);
    for (Index i = 0; i < k; ++i) z += coeffs(i, c) * m.basis()[static_cast<std::size_t>(i)];
    out.center.push_back(z);
  }
  const auto zdim = static_cast<std::size_t>(coeffs.cols());

  // Minimal central projections: spectral projections of a generic
  // self-adjoint central element.
  Rng rng(seed);
  std::normal_distribution<double> nd;
  for (int attempt = 0; attempt < 8; ++attempt) {
    CMatrix h = CMatrix::Zero(d, d);
    for (const auto& z : out.center) {
      h += nd(rng) * (z + z.adjoint()) / 2.0;
      h += nd(rng) * (z - z.adjoint()) / cplx(0.0, 2.0);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const auto& ev = es.eigenvalues();
    const double spread = std::max(1.0, ev.cwiseAbs().maxCoeff());
    std::vector<std::pair<Index, Index>> clusters;  // [begin, end)
    Index begin = 0;
    for (Index i = 1; i <= d; ++i)
      if (i == d || ev(i) - ev(i - 1) > 1e-6 * spread) {
        clusters.emplace_back(begin, i);
        begin = i;
      }
    if (clusters.size() != zdim) continue;

    std::vector<FactorBlock> blocks;
    bool ok = true;
    for (auto [b, e] : clusters) {
      FactorBlock blk;
      CMatrix v = es.eigenvectors().middleCols(b, e - b);
      blk.projection = v * v.adjoint();
      blk.rank = e - b;
      std::vector<CMatrix> compressed;
      for (const auto& x : m.basis()) compressed.push_back(blk.projection * x * blk.projection);
      Index sq = numerical_rank(stack_vecs(compressed, d), tol.rank, 1.0);
      auto nsize = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(sq))));
      if (nsize * nsize != sq || nsize == 0 || blk.rank % nsize != 0) {
        ok = false;
        break;
      }
      blk.factor_size = nsize;
      blk.multiplicity = blk.rank / nsize;
      blocks.push_back(std::move(blk));
    }
    if (!ok) fail(ErrorKind::Numerical, op, "DegenerateBlock", "block is not a full matrix algebra");
    out.blocks = std::move(blocks);
    return out;
  }
  fail(ErrorKind::Numerical, op, "DegenerateBlock",
       "central spectrum did not resolve into " + std::to_string(zdim) + " blocks");
}

Rational vn_dimension(const VNAlgebra& factor, const Subspace& k, const Tolerances& tol) {
  const std::string op = "vn_dimension";
  if (k.ambient_dim() != factor.ambient_dim())
    fail(ErrorKind::Validation, op, "DimensionMismatch");
  auto blocks = center_blocks(factor, tol);
  if (!blocks.is_factor()) fail(ErrorKind::Validation, op, "NotFactor");
  for (const auto& t : factor.basis()) {
    CMatrix tk = t * k.basis();
    double resid = (tk - k.basis() * (k.basis().adjoint() * tk)).norm();
    if (resid > tol.residual)
      fail(ErrorKind::Validation, op, "NotInvariant", "residual " + format_residual(resid));
  }
  const auto n = static_cast<std::int64_t>(blocks.blocks.front().factor_size);
  return Rational::make(static_cast<std::int64_t>(k.dim()), n * n);
}

}  // namespace harmcoc
