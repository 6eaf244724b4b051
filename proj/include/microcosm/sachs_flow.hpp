#pragma once

#include "microcosm/matcore.hpp"

namespace microcosm {

// Data for Ṡ + S² + e^{−uω}p e^{uω} = 0 with S(0) = s0, sigma a constant solution.
struct SachsIVP {
  CMatrix omega;
  CMatrix p;
  CMatrix sigma;
  CMatrix s0;

  // Throws InvalidInput naming the violated invariant.
  void validate() const;
};

struct ConstantPPair {
  CMatrix s0_val;    // vanishes at t
  CMatrix sinf_val;  // blows up like (u − t)⁻¹I at t
  CMatrix l0_val;
  CMatrix linf_val;
};

ConstantPPair constant_p_pair(const CMatrix& p, double t, double u);

// sigma² + p = 0 with ω = 0.
CMatrix ivp_omega0(const CMatrix& sigma, const CMatrix& s0, double u);

CMatrix ivp_general(const SachsIVP& ivp, double u);

// ∫₀ᵘ e^{(−Σ−ω)r} e^{(−Σ+ω)r} dr by adaptive Gauss–Legendre.
CMatrix flow_integral(const CMatrix& sigma, const CMatrix& omega, double u,
                      double tol = 1e-12);

}  // namespace microcosm
