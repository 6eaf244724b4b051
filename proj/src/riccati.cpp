#include "microcosm/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

namespace microcosm {

namespace {

constexpr double kStructTol = 1e-12;
constexpr double kClusterTol = 1e-5;
constexpr double kNullTol = 1e-8;
constexpr double kTieTol = 1e-9;
constexpr double kTransversalGood = 1e-3;
constexpr double kTransversalMin = 1e-10;
constexpr double kFrameTol = 1e-8;

struct Cluster {
  Complex center;
  std::vector<Complex> members;
};

// Eigenvalue clusters ordered by descending real part, then descending imaginary part.
std::vector<Cluster> ordered_clusters(const CMatrix& z, double scale) {
  Eigen::ComplexEigenSolver<CMatrix> es(z, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("invariant_lagrangian_frame: eigenvalue computation failed");
  const CVector ev = es.eigenvalues();
  const Index m = ev.size();

  std::vector<Index> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Index i = 0; i < m; ++i)
    for (Index j = i + 1; j < m; ++j)
      if (std::abs(ev(i) - ev(j)) <= kClusterTol * scale) parent[find(i)] = find(j);

  std::vector<Cluster> clusters;
  std::vector<Index> slot(m, -1);
  for (Index i = 0; i < m; ++i) {
    const Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(clusters.size());
      clusters.push_back({});
    }
    clusters[slot[r]].members.push_back(ev(i));
  }
  for (Cluster& c : clusters) {
    Complex sum = 0.0;
    for (Complex l : c.members) sum += l;
    c.center = sum / static_cast<double>(c.members.size());
  }

  std::stable_sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return a.center.real() > b.center.real();
  });
  const double tie = kTieTol * scale;
  for (std::size_t i = 0; i < clusters.size();) {
    std::size_t j = i + 1;
    while (j < clusters.size() &&
           clusters[j - 1].center.real() - clusters[j].center.real() <= tie)
      ++j;
    std::stable_sort(clusters.begin() + i, clusters.begin() + j,
                     [](const Cluster& a, const Cluster& b) {
                       return a.center.imag() > b.center.imag();
                     });
    i = j;
  }
  return clusters;
}

// Orthonormal eigenvector candidates, one block per eigenspace.
std::vector<CMatrix> eigenspaces(const CMatrix& z, double scale) {
  const Index m = z.rows();
  std::vector<CMatrix> out;
  for (const Cluster& c : ordered_clusters(z, scale)) {
    auto null_space = [&](Complex lambda, bool force) -> CMatrix {
      CMatrix shifted = z - lambda * CMatrix::Identity(m, m);
      Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      Index k = 0;
      while (k < m && sv(m - 1 - k) <= kNullTol * scale) ++k;
      if (k == 0 && force) k = 1;
      return svd.matrixV().rightCols(k);
    };
    CMatrix e = null_space(c.center, false);
    if (e.cols() > 0) {
      out.push_back(e);
      continue;
    }
    for (Complex l : c.members) out.push_back(null_space(l, true));
  }
  return out;
}

LagrangianFrame deflate(const HamiltonianMatrix& h, bool complementary) {
  const Index n = h.n;
  const double scale = std::max(1.0, op_norm(h.z));
  CMatrix basis = CMatrix::Identity(2 * n, 2 * n);
  CMatrix zk = h.z;
  CMatrix jk = h.j();
  CMatrix frame(2 * n, n);

  for (Index col = 0; col < n; ++col) {
    const std::vector<CMatrix> spaces = eigenspaces(zk, scale);
    CVector v;
    if (!complementary) {
      v = spaces.front().col(0);
    } else {
      CMatrix perp = CMatrix::Identity(n, n);
      if (col > 0) {
        const CMatrix q = subspace_maps(frame.topLeftCorner(n, col)).im;
        perp -= q * q.adjoint();
      }
      double best = -1.0;
      for (const CMatrix& e : spaces) {
        const CMatrix t = perp * (basis * e).topRows(n);
        Eigen::JacobiSVD<CMatrix> svd(t, Eigen::ComputeFullV);
        const double measure = svd.singularValues()(0);
        if (measure > best) {
          best = measure;
          v = e * svd.matrixV().col(0);
        }
        if (measure >= kTransversalGood) break;
      }
      if (best < kTransversalMin)
        throw DegeneracyError("complementary_frame: no eigenvector transversal to the vertical");
    }
    v.normalize();
    frame.col(col) = basis * v;
    if (col + 1 == n) break;

    const Index k2 = zk.rows();
    const CMatrix row = v.transpose() * jk;
    const CMatrix kernel = subspace_maps(row).ker;
    const CMatrix b = (CMatrix::Identity(k2, k2) - v * v.adjoint()) * kernel;
    const SubspaceMaps maps = subspace_maps(b, 1e-10);
    if (maps.rank != k2 - 2)
      throw NumericalError("invariant_lagrangian_frame: deflation lost rank");
    const CMatrix& imb = maps.im;
    zk = imb.adjoint() * zk * imb;
    jk = imb.transpose() * jk * imb;
    basis = basis * imb;
  }

  LagrangianFrame out{frame, frame.adjoint() * h.z * frame};
  const double invariance = (h.z * out.u - out.u * out.sigma).norm();
  const double lagrangian = (out.u.transpose() * h.j() * out.u).norm();
  if (invariance > kFrameTol * scale || lagrangian > kFrameTol)
    throw NumericalError("invariant_lagrangian_frame: frame residual too large");
  return out;
}

}  // namespace

double HamiltonianMatrix::hamiltonian_defect() const {
  const CMatrix jj = j();
  return (z.transpose() * jj + jj * z).norm();
}

HamiltonianMatrix build_hamiltonian(const CMatrix& omega, const CMatrix& p) {
  require_skew(omega, kStructTol, "build_hamiltonian: omega");
  require_symmetric(p, kStructTol, "build_hamiltonian: p");
  if (omega.rows() != p.rows()) throw InvalidInput("build_hamiltonian: shape mismatch");
  if (!all_finite(omega) || !all_finite(p))
    throw InvalidInput("build_hamiltonian: non-finite entry");
  const Index n = omega.rows();
  HamiltonianMatrix h;
  h.n = n;
  h.z.resize(2 * n, 2 * n);
  h.z << omega, CMatrix::Identity(n, n), -p, omega;
  return h;
}

HamiltonianMatrix hamiltonian_from(const CMatrix& z) {
  require_square(z, "hamiltonian_from");
  if (z.rows() % 2 != 0) throw InvalidInput("hamiltonian_from: odd dimension");
  if (!all_finite(z)) throw InvalidInput("hamiltonian_from: non-finite entry");
  HamiltonianMatrix h{z, z.rows() / 2};
  if (h.hamiltonian_defect() > kStructTol * std::max(1.0, z.norm()))
    throw InvalidInput("hamiltonian_from: matrix is not Hamiltonian (zᵀJ + Jz ≠ 0)");
  return h;
}

LagrangianFrame invariant_lagrangian_frame(const HamiltonianMatrix& h) {
  return deflate(h, false);
}

LagrangianFrame complementary_frame(const HamiltonianMatrix& h) {
  LagrangianFrame f = deflate(h, true);
  if (rcond(f.top()) < kTransversalMin)
    throw DegeneracyError("complementary_frame: top block singular");
  return f;
}

CMatrix solve_algebraic_sachs(const CMatrix& omega, const CMatrix& p) {
  const LagrangianFrame f = complementary_frame(build_hamiltonian(omega, p));
  const CMatrix alpha = f.top();
  const CMatrix gamma = f.bottom();
  const CMatrix x = alpha.transpose().partialPivLu().solve(gamma.transpose()).transpose();
  if (symmetry_defect(x) > 1e-9 * std::max(1.0, x.norm()))
    throw NumericalError("solve_algebraic_sachs: solution is not symmetric");
  return symmetrize(x);
}

double algebraic_sachs_residual(const CMatrix& x, const CMatrix& omega, const CMatrix& p) {
  return (x * x - omega * x + x * omega + p).norm();
}

bool genericity_check(const CMatrix& s0, const CMatrix& omega, double tol) {
  require_square(s0, "genericity_check: s0");
  if (s0.rows() != omega.rows() || s0.cols() != omega.cols())
    throw InvalidInput("genericity_check: shape mismatch");
  Eigen::ComplexEigenSolver<CMatrix> lo(omega - s0, false), hi(omega + s0, false);
  for (Index i = 0; i < lo.eigenvalues().size(); ++i)
    for (Index j = 0; j < hi.eigenvalues().size(); ++j)
      if (std::abs(lo.eigenvalues()(i) - hi.eigenvalues()(j)) <= tol) return false;
  return true;
}

}  // namespace microcosm
