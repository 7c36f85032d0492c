#include "harmcoc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace harmcoc {

namespace {

double threshold(const Eigen::VectorXd& sv, double tol, double scale) {
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  return tol * std::max(smax, scale);
}

Index count_above(const Eigen::VectorXd& sv, double thresh) {
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++r;
  return r;
}

}  // namespace

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

Index numerical_rank(const CMatrix& m, double tol, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  return count_above(sv, threshold(sv, tol, scale));
}

CMatrix null_space(const CMatrix& m, double tol, double scale) {
  const Index n = m.cols();
  if (m.rows() == 0) return CMatrix::Identity(n, n);
  if (n == 0) return CMatrix(0, 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index r = count_above(sv, threshold(sv, tol, scale));
  return svd.matrixV().rightCols(n - r);
}

CMatrix range_basis(const CMatrix& m, double tol, double scale) {
  if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Index r = count_above(sv, threshold(sv, tol, scale));
  return svd.matrixU().leftCols(r);
}

Subspace Subspace::zero(Index ambient) { return Subspace(ambient, CMatrix(ambient, 0)); }

Subspace Subspace::full(Index ambient) {
  return Subspace(ambient, CMatrix::Identity(ambient, ambient));
}

Subspace Subspace::span(const CMatrix& columns, double tol, double scale) {
  return Subspace(columns.rows(), range_basis(columns, tol, scale));
}

Subspace Subspace::from_orthonormal(CMatrix basis) {
  Index n = basis.rows();
  return Subspace(n, std::move(basis));
}

Subspace Subspace::orthogonal_complement() const {
  if (dim() == 0) return full(ambient_);
  if (dim() == ambient_) return zero(ambient_);
  Eigen::HouseholderQR<CMatrix> qr(basis_);
  CMatrix q = qr.householderQ() * CMatrix::Identity(ambient_, ambient_);
  return Subspace(ambient_, q.rightCols(ambient_ - dim()));
}

std::vector<double> principal_angles(const Subspace& a, const Subspace& b) {
  const Index k = std::min(a.dim(), b.dim());
  if (k == 0) return {};
  // Sines of the angles between b and a.
  const CMatrix& small = a.dim() <= b.dim() ? a.basis() : b.basis();
  const Subspace& big = a.dim() <= b.dim() ? b : a;
  CMatrix resid = small - big.basis() * (big.basis().adjoint() * small);
  Eigen::JacobiSVD<CMatrix> svd(resid);
  std::vector<double> out;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    out.push_back(std::asin(std::min(1.0, svd.singularValues()(i))));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return std::numbers::pi / 2;
  auto angles = principal_angles(a, b);
  return angles.empty() ? 0.0 : angles.front();
}

double containment_residual(const Subspace& inner, const Subspace& outer) {
  double worst = 0.0;
  for (Index i = 0; i < inner.dim(); ++i)
    worst = std::max(worst, outer.distance_to(inner.basis().col(i)));
  return worst;
}

Subspace intersect(const Subspace& a, const Subspace& b, double tol) {
  // x = A y lies in b iff (I - P_b) A y = 0.
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim());
  CMatrix resid = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
  CMatrix ker = null_space(resid, tol, 1.0);
  return Subspace::span(a.basis() * ker, tol, 1.0);
}

CMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      double re = nd(rng);
      double im = nd(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

CVector random_gaussian_vector(Index n, Rng& rng) { return random_gaussian(n, 1, rng).col(0); }

CMatrix random_unitary(Index n, Rng& rng) {
  CMatrix z = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    cplx d = r(i, i);
    double ad = std::abs(d);
    if (ad > 0) q.col(i) *= d / ad;
  }
  return q;
}

CMatrix direct_sum(std::span<const CMatrix> blocks) {
  Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  CMatrix out = CMatrix::Zero(n, n);
  Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Index rows, Index cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

}  // namespace harmcoc
