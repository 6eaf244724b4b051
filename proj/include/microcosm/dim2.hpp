#pragma once

#include <string>
#include <utility>
#include <vector>

#include "microcosm/matcore.hpp"

namespace microcosm {

// p = [[a + b, c], [c, a − b]], ω = [[0, −w], [w, 0]] (Alekseevsky form).
struct Dim2Params {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double w = 0.0;

  Eigen::MatrixXd p() const;
  Eigen::MatrixXd omega() const;
  double det_p() const { return a * a - b * b - c * c; }
  double f_invariant() const { return 4 * w * w * w * w + 4 * a * w * w + b * b + c * c; }
  // A + w², positive iff the energy density is positive.
  double energy_scalar() const { return a + w * w; }
  bool conformally_trivial() const { return b == 0.0 && c == 0.0; }
};

double energy_scalar_dim2(const Dim2Params& params);

// a + b·J + c·K + d·JK with J² = −1, K² = 1, JK = −KJ.
struct SplitQuaternion {
  Complex a, b, c, d;

  static SplitQuaternion from_matrix(const CMatrix& m);
  CMatrix to_matrix() const;
  SplitQuaternion operator*(const SplitQuaternion& o) const;
  SplitQuaternion operator+(const SplitQuaternion& o) const;
  SplitQuaternion conj_j() const;  // J·X·J
  bool trace_free(double tol = 1e-14) const;
  // X² for trace-free X.
  Complex square_scalar() const;
};

// S = [[s + u0, t], [t, s − u0]] solving S² − [ω, S] + p − ω² = 0.
struct Dim2Solution {
  Complex s;
  Complex t;
  Complex u0;
  Complex z;  // s² + w²

  CMatrix s_matrix() const;
  // Trace-free part of S + ω.
  SplitQuaternion sigma(double w) const;
  double residual(const Dim2Params& params) const;
  bool is_real(double tol = 1e-12) const;
};

enum class Dim2FamilyKind {
  circle,     // s = 0, t² + u0² = −A (w = 0)
  isotropic,  // s = ±i·w, t = ∓i·u0 (A = 0)
};

struct Dim2Family {
  Dim2FamilyKind kind;
  Complex s;  // the fixed value of s
  double a = 0.0;
  double w = 0.0;
  Dim2Solution member(Complex u0) const;
  bool contains(const Dim2Solution& sol, double tol = 1e-12) const;
  std::string description() const;
};

struct ConstantSolutions2x2 {
  std::vector<Dim2Solution> isolated;
  std::vector<Dim2Family> families;
};

ConstantSolutions2x2 constant_solutions_2x2(const Dim2Params& params);

enum class RealityClass { all_real, all_nonreal, mixed };

struct RealityReport {
  RealityClass cls = RealityClass::all_nonreal;
  bool det_negative = false;        // |p| < 0
  bool derived_all_real = false;    // |p| ≥ 0 and A + 2w² ≤ −√|p|
  bool printed_all_real = false;    // |p| ≥ 0, F ≥ 0 and A ≥ w²
  bool criteria_agree = false;      // derived criterion matches the explicit roots
  std::vector<std::string> witnesses;
};

RealityReport reality_classify(const Dim2Params& params);

// Roots of z² + A·z + (B² + C²)/4; x is the one of smaller modulus.
std::pair<Complex, Complex> quadratic_roots_xy(const Dim2Params& params);

struct OrbitCoeffs2x2 {
  Complex coef_a;
  Complex coef_b;
  Complex coef_c;
};

OrbitCoeffs2x2 orbit_coeffs_2x2(Complex s, const SplitQuaternion& sigma, double u);

// H(u) = e^{−2su}(coef_a + coef_b·ΣJΣJ + coef_c·[Σ, J]J), with Ḣ = e^{−2su}e^{−uΣ}(−J e^{uΣ} J).
CMatrix orbit_h_2x2(Complex s, const SplitQuaternion& sigma, double u);

// Exactly divided ((s² − ω²)γ(2su) − (Σ² − ω²)γ(2uΣ)) / (s² − Σ²).
Complex conjugate_condition(Complex s, Complex sigma2, Complex omega2, double u);

// Same condition written in the quadratic roots: f[y, x] with f(ζ) = ζ·γ(2u√(ζ + ω²)).
Complex conjugate_condition_xy(Complex x, Complex y, Complex omega2, double u);

struct ConjugateSearch {
  std::vector<double> points;
  std::vector<double> oracle_points;
  bool verified = false;
};

ConjugateSearch find_conjugate_points(const Dim2Params& params, double u_max,
                                      bool verify = true);

enum class Existence { yes, no, unknown };

struct ExistenceReport {
  Existence exists = Existence::unknown;
  std::vector<std::string> reasons;
};

ExistenceReport existence_predicates(const Dim2Params& params);

}  // namespace microcosm
