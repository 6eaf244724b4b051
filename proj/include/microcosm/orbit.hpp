#pragma once

#include <optional>
#include <vector>

#include "microcosm/matcore.hpp"

namespace microcosm {

// w = [[−aᵀ, 0], [m0, a]] with a·h0 + h0·aᵀ + m0 = I and aᵀm0 + m0·a = 0.
struct OrbitGenerator {
  CMatrix a;
  CMatrix h0;
  CMatrix m0;
  CMatrix w;

  Index n() const { return a.rows(); }
};

struct GrassmannCurvePoint {
  double u = 0.0;
  CMatrix frame;
  std::optional<CMatrix> h;  // empty when the top block is singular

  bool at_infinity() const { return !h.has_value(); }
};

struct OrbitReport {
  double max_hdot_error = 0.0;
  double max_lagrangian_residual = 0.0;
  bool passed = false;
};

// a = −(s0 + omega)
OrbitGenerator build_generator(const CMatrix& s0, const CMatrix& omega);
OrbitGenerator generator_from_a(const CMatrix& a);
OrbitGenerator generator_from_parts(const CMatrix& a, const CMatrix& h0, const CMatrix& m0);

GrassmannCurvePoint orbit_point(const OrbitGenerator& g, double u);

OrbitReport verify_orbit(const OrbitGenerator& g, const std::vector<double>& samples);

// Maps orbit coordinates [I; H] to Cauchy data (value, derivative) at u = 0 of the
// Jacobi fields vanishing at u; sends [I; h0] to [0; I].
CMatrix jacobi_basis_map(const CMatrix& s0, const CMatrix& h0);

// Real part of basis_map·w·basis_map⁻¹, verified against the orbit at the samples.
CMatrix realize_real_generator(const OrbitGenerator& g, const CMatrix& basis_map,
                               const std::vector<double>& samples = {});

// Points u in (0, u_max] where the orbit subspace meets the one at u = 0.
std::vector<double> orbit_conjugate_points(const OrbitGenerator& g, double u_max,
                                           int samples_per_unit = 1000);

}  // namespace microcosm
