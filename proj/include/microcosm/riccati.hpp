#pragma once

#include "microcosm/matcore.hpp"

namespace microcosm {

struct HamiltonianMatrix {
  CMatrix z;
  Index n = 0;

  CMatrix j() const { return symplectic_form(n); }
  // ‖zᵀJ + Jz‖
  double hamiltonian_defect() const;
};

// Columns u span a z-invariant Lagrangian subspace: z·u = u·sigma, uᵀJu = 0, u*u = I.
struct LagrangianFrame {
  CMatrix u;
  CMatrix sigma;

  CMatrix top() const { return u.topRows(u.rows() / 2); }
  CMatrix bottom() const { return u.bottomRows(u.rows() / 2); }
};

// z = [[omega, I], [−p, omega]]
HamiltonianMatrix build_hamiltonian(const CMatrix& omega, const CMatrix& p);

// Wraps an arbitrary 2n×2n matrix after checking the Hamiltonian structure.
HamiltonianMatrix hamiltonian_from(const CMatrix& z);

LagrangianFrame invariant_lagrangian_frame(const HamiltonianMatrix& h);

// Frame whose top block is invertible.
LagrangianFrame complementary_frame(const HamiltonianMatrix& h);

// A symmetric X with X² − ωX + Xω + p = 0.
CMatrix solve_algebraic_sachs(const CMatrix& omega, const CMatrix& p);

double algebraic_sachs_residual(const CMatrix& x, const CMatrix& omega, const CMatrix& p);

// True iff spec(ω − s0) and spec(ω + s0) are disjoint.
bool genericity_check(const CMatrix& s0, const CMatrix& omega, double tol = 1e-8);

}  // namespace microcosm
