#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "microcosm/errors.hpp"

namespace microcosm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Orthonormal frames for im A, ker A, im A*, ker A*.
struct SubspaceMaps {
  CMatrix im;
  CMatrix ker;
  CMatrix im_t;
  CMatrix ker_t;
  Index rank = 0;
  double tol = 0.0;
};

// tol is relative to the largest singular value; 0 selects 2·max(m,n)·eps.
SubspaceMaps subspace_maps(const CMatrix& a, double tol = 0.0);

struct SymmetricSylvester {
  CMatrix h0;
  CMatrix m0;
};

// Decomposes c = a·h0 + h0·aᵀ + m0 with m0 in the kernel of X ↦ aᵀX + Xa.
SymmetricSylvester sylvester_symmetric(const CMatrix& a, const CMatrix& c);

CMatrix mat_exp(const CMatrix& a);

template <typename Derived>
std::pair<typename Derived::PlainObject, typename Derived::PlainObject>
sym_skew_split(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) throw InvalidInput("sym_skew_split: matrix not square");
  typename Derived::PlainObject sym = (a + a.transpose()) / 2;
  typename Derived::PlainObject skew = (a - a.transpose()) / 2;
  return {sym, skew};
}

// J = [[0, -I], [I, 0]] of size 2n.
CMatrix symplectic_form(Index n);

bool all_finite(const CMatrix& a);
double op_norm(const CMatrix& a);
double symmetry_defect(const CMatrix& a);
double skew_defect(const CMatrix& a);
CMatrix symmetrize(const CMatrix& a);
double rcond(const CMatrix& a);

// Spectral distance between the orthogonal projectors onto the column spans.
double subspace_gap(const CMatrix& a, const CMatrix& b);

void require_square(const CMatrix& a, const char* what);
void require_symmetric(const CMatrix& a, double tol, const char* what);
void require_skew(const CMatrix& a, double tol, const char* what);

}  // namespace microcosm
