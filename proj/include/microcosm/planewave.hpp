#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "microcosm/matcore.hpp"

namespace microcosm {

enum class MetricForm { Brinkmann, Alekseevsky };

// Homogeneous plane wave with constant skew omega and symmetric p.
struct MicrocosmSpec {
  Index n = 0;
  Eigen::MatrixXd omega;
  Eigen::MatrixXd p;
  MetricForm form = MetricForm::Brinkmann;

  void validate() const;
  CMatrix omega_c() const { return omega.cast<Complex>(); }
  CMatrix p_c() const { return p.cast<Complex>(); }
};

MicrocosmSpec make_spec(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& p,
                        MetricForm form);

struct RosenData {
  std::vector<double> grid;
  std::vector<Eigen::MatrixXd> h;
  std::vector<Eigen::MatrixXd> l;
  std::optional<double> blowup;  // set when integration stopped early
};

// Brinkmann p ↔ Alekseevsky p + ω².
MicrocosmSpec convert_form(const MicrocosmSpec& spec, MetricForm target);

// e^{−uω} p e^{uω} of a Brinkmann spec.
CMatrix tidal_at(const MicrocosmSpec& spec, double u);

// Ω(X, Y) = Xᵀ Ẏ − Yᵀ Ẋ − 2 Xᵀ ω Y
Complex symplectic_form_eval(const CVector& x, const CVector& xdot, const CVector& y,
                             const CVector& ydot, const CMatrix& omega);

RosenData alekseevsky_to_rosen(const MicrocosmSpec& spec, const Eigen::MatrixXd& s_init,
                               const std::vector<double>& grid);

std::vector<double> rosen_grid(double lo, double hi, int points_per_unit = 512);

// Cumulative Simpson quadrature of h⁻¹ from u0: u ↦ H(u) − H(u0).
std::function<Eigen::MatrixXd(double)> grassmann_curve(const RosenData& rosen, double u0);

// tr(p) in Brinkmann form, equal to tr(p − ω²) in Alekseevsky form.
double energy_trace(const MicrocosmSpec& spec);

double raychaudhuri_bound(double e_min);

}  // namespace microcosm
