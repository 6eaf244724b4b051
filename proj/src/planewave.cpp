#include "microcosm/planewave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

namespace microcosm {

namespace {

using Eigen::MatrixXd;

constexpr double kStructTol = 1e-12;
constexpr double kMaxStep = 1e-3;
constexpr double kBlowup = 1e8;

struct SachsState {
  MatrixXd s;
  MatrixXd l;
};

SachsState rhs(const SachsState& x, const MatrixXd& omega, const MatrixXd& shifted_p) {
  return {-x.s * x.s + omega * x.s - x.s * omega - shifted_p, (x.s + omega) * x.l};
}

SachsState axpy(const SachsState& x, double h, const SachsState& k) {
  return {x.s + h * k.s, x.l + h * k.l};
}

SachsState rk4(const SachsState& x, double h, const MatrixXd& omega, const MatrixXd& q) {
  const SachsState k1 = rhs(x, omega, q);
  const SachsState k2 = rhs(axpy(x, h / 2, k1), omega, q);
  const SachsState k3 = rhs(axpy(x, h / 2, k2), omega, q);
  const SachsState k4 = rhs(axpy(x, h, k3), omega, q);
  return {x.s + h / 6 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s),
          x.l + h / 6 * (k1.l + 2 * k2.l + 2 * k3.l + k4.l)};
}

bool positive_definite(const MatrixXd& h) {
  Eigen::LLT<MatrixXd> llt(h);
  return llt.info() == Eigen::Success;
}

}  // namespace

void MicrocosmSpec::validate() const {
  if (n <= 0) throw InvalidInput("microcosm spec: dimension must be positive");
  if (omega.rows() != n || omega.cols() != n || p.rows() != n || p.cols() != n)
    throw InvalidInput("microcosm spec: omega and p must be n×n");
  if (!omega.allFinite() || !p.allFinite())
    throw InvalidInput("microcosm spec: non-finite entry");
  if ((omega + omega.transpose()).norm() > kStructTol * std::max(1.0, omega.norm()))
    throw InvalidInput("microcosm spec: omega is not skew-symmetric");
  if ((p - p.transpose()).norm() > kStructTol * std::max(1.0, p.norm()))
    throw InvalidInput("microcosm spec: p is not symmetric");
}

MicrocosmSpec make_spec(const MatrixXd& omega, const MatrixXd& p, MetricForm form) {
  MicrocosmSpec s{omega.rows(), omega, p, form};
  s.validate();
  return s;
}

MicrocosmSpec convert_form(const MicrocosmSpec& spec, MetricForm target) {
  spec.validate();
  MicrocosmSpec out = spec;
  out.form = target;
  if (spec.form == target) return out;
  const MatrixXd w2 = spec.omega * spec.omega;
  out.p = target == MetricForm::Alekseevsky ? MatrixXd(spec.p + w2) : MatrixXd(spec.p - w2);
  return out;
}

CMatrix tidal_at(const MicrocosmSpec& spec, double u) {
  if (spec.form != MetricForm::Brinkmann)
    throw InvalidInput("tidal_at: spec must be in Brinkmann form");
  const CMatrix w = spec.omega_c();
  return mat_exp(-u * w) * spec.p_c() * mat_exp(u * w);
}

Complex symplectic_form_eval(const CVector& x, const CVector& xdot, const CVector& y,
                             const CVector& ydot, const CMatrix& omega) {
  const Index n = omega.rows();
  if (x.size() != n || xdot.size() != n || y.size() != n || ydot.size() != n)
    throw InvalidInput("symplectic_form_eval: shape mismatch");
  return (x.transpose() * ydot).value() - (y.transpose() * xdot).value() -
         2.0 * (x.transpose() * omega * y).value();
}

std::vector<double> rosen_grid(double lo, double hi, int points_per_unit) {
  if (!(hi > lo) || points_per_unit < 2) throw InvalidInput("rosen_grid: bad range");
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) * points_per_unit));
  std::vector<double> g(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
  return g;
}

RosenData alekseevsky_to_rosen(const MicrocosmSpec& spec, const MatrixXd& s_init,
                               const std::vector<double>& grid) {
  spec.validate();
  if (spec.form != MetricForm::Alekseevsky)
    throw InvalidInput("alekseevsky_to_rosen: spec must be in Alekseevsky form");
  if (s_init.rows() != spec.n || s_init.cols() != spec.n)
    throw InvalidInput("alekseevsky_to_rosen: s_init shape mismatch");
  if ((s_init - s_init.transpose()).norm() > 1e-12 * std::max(1.0, s_init.norm()))
    throw InvalidInput("alekseevsky_to_rosen: s_init is not symmetric");
  if (grid.empty()) throw InvalidInput("alekseevsky_to_rosen: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InvalidInput("alekseevsky_to_rosen: grid must be strictly increasing");

  const MatrixXd q = spec.p - spec.omega * spec.omega;
  const Index n = spec.n;
  RosenData out;

  // Integrate from u = 0 towards each side of the grid.
  auto march = [&](SachsState x, double from, double to) -> std::optional<SachsState> {
    const double span = to - from;
    if (span == 0.0) return x;
    const int steps = static_cast<int>(std::ceil(std::abs(span) / kMaxStep));
    const double h = span / steps;
    for (int k = 0; k < steps; ++k) {
      x = rk4(x, h, spec.omega, q);
      if (!x.s.allFinite() || x.s.norm() > kBlowup) return std::nullopt;
    }
    return x;
  };

  const SachsState origin{s_init, MatrixXd::Identity(n, n)};
  std::vector<std::optional<SachsState>> states(grid.size());
  std::size_t first_pos = 0;
  while (first_pos < grid.size() && grid[first_pos] < 0.0) ++first_pos;

  std::size_t lo_keep = 0, hi_keep = grid.size();
  {
    SachsState x = origin;
    double at = 0.0;
    for (std::size_t i = first_pos; i < grid.size(); ++i) {
      auto next = march(x, at, grid[i]);
      if (!next || !positive_definite(next->l.transpose() * next->l)) {
        hi_keep = i;
        out.blowup = grid[i];
        break;
      }
      x = *next;
      at = grid[i];
      states[i] = x;
    }
  }
  {
    SachsState x = origin;
    double at = 0.0;
    for (std::size_t i = first_pos; i-- > 0;) {
      auto next = march(x, at, grid[i]);
      if (!next || !positive_definite(next->l.transpose() * next->l)) {
        lo_keep = i + 1;
        if (!out.blowup) out.blowup = grid[i];
        break;
      }
      x = *next;
      at = grid[i];
      states[i] = x;
    }
  }
  for (std::size_t i = lo_keep; i < hi_keep; ++i) {
    out.grid.push_back(grid[i]);
    out.l.push_back(states[i]->l);
    out.h.push_back(states[i]->l.transpose() * states[i]->l);
  }
  return out;
}

std::function<MatrixXd(double)> grassmann_curve(const RosenData& rosen, double u0) {
  const std::size_t count = rosen.grid.size();
  if (count < 3) throw InvalidInput("grassmann_curve: need at least three grid points");
  const double lo = rosen.grid.front(), hi = rosen.grid.back();
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    if (std::abs(rosen.grid[i] - (lo + step * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(hi)))
      throw InvalidInput("grassmann_curve: grid must be uniform");
  if (u0 < lo || u0 > hi) throw InvalidInput("grassmann_curve: u0 outside the grid");

  std::vector<MatrixXd> inv(count);
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::LLT<MatrixXd> llt(rosen.h[i]);
    if (llt.info() != Eigen::Success)
      throw PoleError("grassmann_curve: h not positive definite", rosen.grid[i]);
    inv[i] = llt.solve(MatrixXd::Identity(rosen.h[i].rows(), rosen.h[i].cols()));
  }

  // ∫ over [x_b, x_b + σ·step] of the parabola through nodes b, b+1, b+2.
  auto parabola = [inv, step](std::size_t b, double sigma) -> MatrixXd {
    const MatrixXd d1 = inv[b + 1] - inv[b];
    const MatrixXd d2 = inv[b + 2] - 2 * inv[b + 1] + inv[b];
    return step * (sigma * inv[b] + sigma * sigma / 2 * d1 +
                   (sigma * sigma * sigma / 3 - sigma * sigma / 2) / 2 * d2);
  };
  auto base = [count](std::size_t i) { return std::min(i, count - 3); };

  std::vector<MatrixXd> cumulative(count);
  cumulative[0] = MatrixXd::Zero(inv[0].rows(), inv[0].cols());
  for (std::size_t i = 1; i < count; ++i) {
    if (i % 2 == 0) {
      cumulative[i] = cumulative[i - 2] + step / 3 * (inv[i - 2] + 4 * inv[i - 1] + inv[i]);
    } else {
      const std::size_t b = base(i - 1);
      const double s0 = static_cast<double>(i - 1 - b);
      cumulative[i] = cumulative[i - 1] + parabola(b, s0 + 1) - parabola(b, s0);
    }
  }

  auto integral_to = [=](double u) -> MatrixXd {
    if (u < lo - 1e-12 || u > hi + 1e-12)
      throw InvalidInput("grassmann_curve: u outside the grid");
    const double pos = (u - lo) / step;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, double(count - 1)));
    if (i == count - 1) i = count - 2;
    const std::size_t b = base(i);
    const double si = static_cast<double>(i - b);
    return cumulative[i] + parabola(b, pos - double(b)) - parabola(b, si);
  };
  const MatrixXd at_u0 = integral_to(u0);
  return [integral_to, at_u0](double u) -> MatrixXd { return integral_to(u) - at_u0; };
}

double energy_trace(const MicrocosmSpec& spec) {
  spec.validate();
  if (spec.form == MetricForm::Brinkmann) return spec.p.trace();
  return (spec.p - spec.omega * spec.omega).trace();
}

double raychaudhuri_bound(double e_min) {
  if (!(e_min > 0)) throw InvalidInput("raychaudhuri_bound: energy must be positive");
  return M_PI / std::sqrt(e_min);
}

}  // namespace microcosm
