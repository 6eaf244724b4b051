#include "microcosm/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace microcosm {

namespace {

constexpr double kSylvesterRankTol = 1e-10;

struct SymBasis {
  std::vector<std::pair<Index, Index>> pairs;
};

SymBasis sym_basis(Index n) {
  SymBasis b;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) b.pairs.emplace_back(i, j);
  return b;
}

CVector sym_coords(const CMatrix& x, const SymBasis& b) {
  CVector v(static_cast<Index>(b.pairs.size()));
  for (std::size_t k = 0; k < b.pairs.size(); ++k) {
    auto [i, j] = b.pairs[k];
    v(k) = i == j ? x(i, i) : std::sqrt(2.0) * x(i, j);
  }
  return v;
}

CMatrix sym_from_coords(const CVector& v, Index n, const SymBasis& b) {
  CMatrix x = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < b.pairs.size(); ++k) {
    auto [i, j] = b.pairs[k];
    if (i == j) {
      x(i, i) = v(k);
    } else {
      x(i, j) = v(k) / std::sqrt(2.0);
      x(j, i) = x(i, j);
    }
  }
  return x;
}

}  // namespace

SubspaceMaps subspace_maps(const CMatrix& a, double tol) {
  if (!all_finite(a)) throw InvalidInput("subspace_maps: non-finite entry");
  if (tol < 0) throw InvalidInput("subspace_maps: negative tolerance");
  const Index m = a.rows(), n = a.cols();
  SubspaceMaps out;
  out.tol = tol > 0 ? tol
                    : 2.0 * static_cast<double>(std::max(m, n)) *
                          std::numeric_limits<double>::epsilon();
  if (m == 0 || n == 0) {
    out.im = CMatrix(m, 0);
    out.ker = CMatrix::Identity(n, n);
    out.im_t = CMatrix(n, 0);
    out.ker_t = CMatrix::Identity(m, m);
    return out;
  }
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = out.tol * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  out.rank = r;
  out.im = svd.matrixU().leftCols(r);
  out.ker_t = svd.matrixU().rightCols(m - r);
  out.im_t = svd.matrixV().leftCols(r);
  out.ker = svd.matrixV().rightCols(n - r);
  return out;
}

SymmetricSylvester sylvester_symmetric(const CMatrix& a, const CMatrix& c) {
  require_square(a, "sylvester_symmetric: a");
  require_square(c, "sylvester_symmetric: c");
  if (a.rows() != c.rows()) throw InvalidInput("sylvester_symmetric: shape mismatch");
  if (!all_finite(a) || !all_finite(c))
    throw InvalidInput("sylvester_symmetric: non-finite entry");
  require_symmetric(c, 1e-12, "sylvester_symmetric: c");

  const Index n = a.rows();
  const SymBasis basis = sym_basis(n);
  const Index m = static_cast<Index>(basis.pairs.size());

  CMatrix f(m, m);
  for (Index k = 0; k < m; ++k) {
    CVector e = CVector::Zero(m);
    e(k) = 1.0;
    CMatrix x = sym_from_coords(e, n, basis);
    f.col(k) = sym_coords(a * x + x * a.transpose(), basis);
  }
  const CVector cv = sym_coords(symmetrize(c), basis);

  Eigen::JacobiSVD<CMatrix> svd(f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  while (r < m && sv(r) > kSylvesterRankTol * std::max(sv(0), 1e-300)) ++r;
  if (sv(0) == 0.0) r = 0;

  // ker fᵀ (bilinear adjoint) = conj of the trailing left singular vectors.
  const CMatrix range = svd.matrixU().leftCols(r);
  const CMatrix kernel = svd.matrixU().rightCols(m - r).conjugate();

  CVector m0v = CVector::Zero(m);
  if (r < m) {
    CMatrix split(m, m);
    split << range, kernel;
    Eigen::JacobiSVD<CMatrix> split_svd(split);
    const auto& ssv = split_svd.singularValues();
    if (ssv(m - 1) > 1e-8 * ssv(0)) {
      CVector coef = split.colPivHouseholderQr().solve(cv);
      m0v = kernel * coef.tail(m - r);
    } else {
      const CMatrix perp = svd.matrixU().rightCols(m - r);
      m0v = perp * (perp.adjoint() * cv);
    }
  }
  CVector rhs = cv - m0v;
  CVector hv = CVector::Zero(m);
  if (r > 0) {
    CVector proj = svd.matrixU().leftCols(r).adjoint() * rhs;
    for (Index k = 0; k < r; ++k) proj(k) /= sv(k);
    hv = svd.matrixV().leftCols(r) * proj;
  }
  return {sym_from_coords(hv, n, basis), sym_from_coords(m0v, n, basis)};
}

CMatrix mat_exp(const CMatrix& a) {
  require_square(a, "mat_exp");
  if (!all_finite(a)) throw InvalidInput("mat_exp: non-finite entry");
  if (a.isZero(0.0)) return CMatrix::Identity(a.rows(), a.cols());
  return a.exp();
}

CMatrix symplectic_form(Index n) {
  CMatrix j = CMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = -CMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = CMatrix::Identity(n, n);
  return j;
}

bool all_finite(const CMatrix& a) { return a.allFinite(); }

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double symmetry_defect(const CMatrix& a) { return (a - a.transpose()).norm(); }

double skew_defect(const CMatrix& a) { return (a + a.transpose()).norm(); }

CMatrix symmetrize(const CMatrix& a) { return (a + a.transpose()) / 2.0; }

double rcond(const CMatrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

double subspace_gap(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("subspace_gap: ambient dimension mismatch");
  const CMatrix qa = subspace_maps(a, 1e-12).im;
  const CMatrix qb = subspace_maps(b, 1e-12).im;
  if (qa.cols() != qb.cols()) return 1.0;
  return op_norm(qa * qa.adjoint() - qb * qb.adjoint());
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw InvalidInput(std::string(what) + ": matrix not square");
}

void require_symmetric(const CMatrix& a, double tol, const char* what) {
  require_square(a, what);
  if (symmetry_defect(a) > tol * std::max(1.0, a.norm()))
    throw InvalidInput(std::string(what) + ": matrix is not symmetric");
}

void require_skew(const CMatrix& a, double tol, const char* what) {
  require_square(a, what);
  if (skew_defect(a) > tol * std::max(1.0, a.norm()))
    throw InvalidInput(std::string(what) + ": matrix is not skew-symmetric");
}

}  // namespace microcosm
