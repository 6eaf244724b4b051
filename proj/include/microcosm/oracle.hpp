#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "microcosm/matcore.hpp"

namespace microcosm {

using MatrixField = std::function<CMatrix(double, const CMatrix&)>;

struct OdeRun {
  std::vector<double> grid;
  std::vector<CMatrix> states;
  double max_step_error_estimate = 0.0;
  std::optional<double> blowup_u;

  // Kept for re-integration between grid points.
  MatrixField field;
  double step = 1e-3;
  double tol = 1e-10;

  // Integrates the stored field from the nearest grid state at or before u.
  CMatrix state_at(double u) const;
};

struct OdeOptions {
  double step = 1e-3;
  double tol = 1e-10;
};

// Ẍ − 2ωẊ + pX = 0 as the first-order system for [X; Ẋ]; states are 2n×k.
OdeRun integrate_jacobi(const CMatrix& omega, const CMatrix& p, const CMatrix& l0,
                        const CMatrix& ldot0, const std::vector<double>& grid,
                        OdeOptions opts = {});

// Ṡ + S² + tidal(u) = 0; stops at ‖S‖ > 1e8 and records the blow-up point.
OdeRun integrate_sachs(const std::function<CMatrix(double)>& tidal, const CMatrix& s0,
                       const std::vector<double>& grid, OdeOptions opts = {});

// Zeros of the Jacobi frame L(u) of a run started from L(0) = 0, L̇(0) = I.
std::vector<double> detect_conjugate(const OdeRun& run);

std::vector<double> oracle_grid(double lo, double hi, double step = 1e-3);

}  // namespace microcosm

namespace microcosm {

// Brinkmann-form Cauchy data (x(0), ẋ(0)) at u = 0 of the Jacobi fields of the
// Alekseevsky microcosm (omega, p) that vanish at u, as the columns of a 2n×n matrix.
CMatrix vanishing_fields_cauchy(const CMatrix& omega, const CMatrix& p, double u,
                                OdeOptions opts = {});

}  // namespace microcosm
