#include "microcosm/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "microcosm/roots.hpp"

namespace microcosm {

namespace {

constexpr double kBlowup = 1e8;
constexpr int kMaxHalvings = 20;

CMatrix rk4(const MatrixField& f, double u, const CMatrix& y, double h) {
  const CMatrix k1 = f(u, y);
  const CMatrix k2 = f(u + h / 2, y + h / 2 * k1);
  const CMatrix k3 = f(u + h / 2, y + h / 2 * k2);
  const CMatrix k4 = f(u + h, y + h * k3);
  return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

struct StepResult {
  CMatrix y;
  double error;
};

// One step of size h checked against two half steps (Richardson).
StepResult checked_step(const MatrixField& f, double u, const CMatrix& y, double h) {
  const CMatrix coarse = rk4(f, u, y, h);
  const CMatrix fine = rk4(f, u + h / 2, rk4(f, u, y, h / 2), h / 2);
  return {fine, (fine - coarse).norm() / 15.0};
}

// Advances y from u to target; returns false on blow-up (‖y‖ > limit).
bool advance(const MatrixField& f, double& u, CMatrix& y, double target, double step,
             double tol, double& max_err, double limit,
             const std::function<double(const CMatrix&)>& step_cap) {
  while (u < target) {
    double h = std::min({step, target - u, step_cap(y)});
    int halvings = 0;
    for (;;) {
      StepResult r = checked_step(f, u, y, h);
      const double scale = std::max(1.0, y.norm());
      if (r.y.allFinite() && r.error <= tol * scale) {
        max_err = std::max(max_err, r.error / scale);
        y = std::move(r.y);
        u += h;
        break;
      }
      if (++halvings > kMaxHalvings) {
        if (limit < INFINITY) return false;
        throw AccuracyError("oracle: step-size control failed at u = " + std::to_string(u));
      }
      h /= 2;
    }
    if (y.norm() > limit) return false;
  }
  u = target;
  return true;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidInput("oracle: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidInput("oracle: grid must be strictly increasing");
}

double no_cap(const CMatrix&) { return INFINITY; }

}  // namespace

CMatrix OdeRun::state_at(double u) const {
  if (grid.empty() || u < grid.front()) throw InvalidInput("OdeRun::state_at: u before grid");
  auto it = std::upper_bound(grid.begin(), grid.end(), u);
  std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  if (i >= states.size()) throw InvalidInput("OdeRun::state_at: u past the integrated range");
  double at = grid[i];
  CMatrix y = states[i];
  double err = 0.0;
  advance(field, at, y, u, step, tol, err, INFINITY, no_cap);
  return y;
}

std::vector<double> oracle_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0)) throw InvalidInput("oracle_grid: bad range");
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> g(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count);
  return g;
}

OdeRun integrate_jacobi(const CMatrix& omega, const CMatrix& p, const CMatrix& l0,
                        const CMatrix& ldot0, const std::vector<double>& grid,
                        OdeOptions opts) {
  require_skew(omega, 1e-12, "integrate_jacobi: omega");
  require_symmetric(p, 1e-12, "integrate_jacobi: p");
  const Index n = omega.rows();
  if (p.rows() != n || l0.rows() != n || ldot0.rows() != n || l0.cols() != ldot0.cols())
    throw InvalidInput("integrate_jacobi: shape mismatch");
  check_grid(grid);

  CMatrix q = CMatrix::Zero(2 * n, 2 * n);
  q.topRightCorner(n, n).setIdentity();
  q.bottomLeftCorner(n, n) = -p;
  q.bottomRightCorner(n, n) = 2.0 * omega;

  OdeRun run;
  run.field = [q](double, const CMatrix& y) -> CMatrix { return q * y; };
  run.step = opts.step;
  run.tol = opts.tol;
  run.grid = grid;
  CMatrix y(2 * n, l0.cols());
  y << l0, ldot0;
  run.states.reserve(grid.size());
  run.states.push_back(y);
  double u = grid.front();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    advance(run.field, u, y, grid[i], opts.step, opts.tol, run.max_step_error_estimate,
            INFINITY, no_cap);
    run.states.push_back(y);
  }
  return run;
}

OdeRun integrate_sachs(const std::function<CMatrix(double)>& tidal, const CMatrix& s0,
                       const std::vector<double>& grid, OdeOptions opts) {
  require_symmetric(s0, 1e-9, "integrate_sachs: s0");
  check_grid(grid);
  OdeRun run;
  run.field = [tidal](double u, const CMatrix& s) -> CMatrix { return -(s * s) - tidal(u); };
  run.step = opts.step;
  run.tol = opts.tol;
  auto cap = [](const CMatrix& s) { return 0.02 / std::max(1e-300, s.norm()); };
  CMatrix y = s0;
  double u = grid.front();
  run.grid.push_back(u);
  run.states.push_back(y);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!advance(run.field, u, y, grid[i], opts.step, opts.tol, run.max_step_error_estimate,
                 kBlowup, cap)) {
      run.blowup_u = u + 1.0 / y.norm();
      return run;
    }
    run.grid.push_back(grid[i]);
    run.states.push_back(y);
  }
  return run;
}

std::vector<double> detect_conjugate(const OdeRun& run) {
  if (run.states.empty()) return {};
  const Index n = run.states.front().rows() / 2;
  if (run.states.front().topRows(n).norm() > 1e-12)
    throw InvalidInput("detect_conjugate: run must start from L = 0");
  const std::size_t count = run.states.size();
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    const CMatrix& y = run.states[i];
    Eigen::JacobiSVD<CMatrix> svd(y.topRows(n));
    g[i] = svd.singularValues()(n - 1) / y.norm();
  }
  auto path = [&run, n](double u) {
    const CMatrix y = run.state_at(u);
    return std::make_pair(CMatrix(y.topRows(n)), CMatrix(y.bottomRows(n)));
  };
  std::vector<double> out;
  const double spacing = count > 1 ? (run.grid.back() - run.grid.front()) / (count - 1) : 1.0;
  std::vector<std::size_t> candidates = roots::local_minima(g);
  if (count > 2 && g[count - 1] < g[count - 2]) candidates.push_back(count - 1);
  for (std::size_t i : candidates) {
    if (run.grid[i] - run.grid.front() < 2 * spacing) continue;
    const roots::SingularPoint sp = roots::refine_singular_point(path, run.grid[i], 2 * spacing);
    if (!sp.converged || sp.u > run.grid.back() + 1e-9) continue;
    const double scale = run.state_at(sp.u).norm();
    if (sp.sigma_min / scale < 1e-9) out.push_back(sp.u);
  }
  return roots::dedupe(out, 1e-7);
}

}  // namespace microcosm

namespace microcosm {

CMatrix vanishing_fields_cauchy(const CMatrix& omega, const CMatrix& p, double u,
                                OdeOptions opts) {
  const Index n = omega.rows();
  if (u == 0.0) {
    CMatrix out = CMatrix::Zero(2 * n, n);
    out.bottomRows(n).setIdentity();
    return out;
  }
  // For u < 0 run time backwards: X(−v) solves the same equation with ω ↦ −ω.
  const double dir = u > 0 ? 1.0 : -1.0;
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix l0 = CMatrix::Zero(n, 2 * n), ldot0 = CMatrix::Zero(n, 2 * n);
  l0.leftCols(n) = id;
  ldot0.rightCols(n) = dir * id;
  const OdeRun run = integrate_jacobi(dir * omega, p, l0, ldot0,
                                      {0.0, std::abs(u)}, opts);
  const CMatrix x = run.states.back().topRows(n);
  const CMatrix kernel = subspace_maps(x, 1e-8).ker;
  if (kernel.cols() != n)
    throw NumericalError("vanishing_fields_cauchy: fundamental solution lost rank");
  CMatrix to_brinkmann = CMatrix::Identity(2 * n, 2 * n);
  to_brinkmann.bottomLeftCorner(n, n) = -omega;
  return to_brinkmann * kernel;
}

}  // namespace microcosm
