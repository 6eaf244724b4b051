#include "microcosm/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "microcosm/roots.hpp"

namespace microcosm {

namespace {

constexpr double kGeneratorTol = 1e-9;
constexpr double kInfinityRcond = 1e-12;
constexpr double kOrbitPassTol = 1e-6;
constexpr double kHdotStep = 1e-5;

CMatrix stacked(const CMatrix& top, const CMatrix& bottom) {
  CMatrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

CMatrix orthonormal(const CMatrix& frame) {
  Eigen::HouseholderQR<CMatrix> qr(frame);
  return qr.householderQ() * CMatrix::Identity(frame.rows(), frame.cols());
}

}  // namespace

OrbitGenerator generator_from_parts(const CMatrix& a, const CMatrix& h0, const CMatrix& m0) {
  require_square(a, "orbit generator: a");
  require_symmetric(h0, kGeneratorTol, "orbit generator: h0");
  require_symmetric(m0, kGeneratorTol, "orbit generator: m0");
  const Index n = a.rows();
  if (h0.rows() != n || m0.rows() != n) throw InvalidInput("orbit generator: shape mismatch");
  const CMatrix id = CMatrix::Identity(n, n);
  if ((a * h0 + h0 * a.transpose() + m0 - id).norm() > kGeneratorTol * std::max(1.0, a.norm()))
    throw InvalidInput("orbit generator: a·h0 + h0·aᵀ + m0 ≠ I");
  if ((a.transpose() * m0 + m0 * a).norm() >
      kGeneratorTol * (1.0 + a.norm() * m0.norm()))
    throw InvalidInput("orbit generator: m0 not in the kernel of X ↦ aᵀX + Xa");
  OrbitGenerator g{a, h0, m0, CMatrix::Zero(2 * n, 2 * n)};
  g.w.topLeftCorner(n, n) = -a.transpose();
  g.w.bottomLeftCorner(n, n) = m0;
  g.w.bottomRightCorner(n, n) = a;
  return g;
}

OrbitGenerator generator_from_a(const CMatrix& a) {
  require_square(a, "generator_from_a");
  const SymmetricSylvester parts =
      sylvester_symmetric(a, CMatrix::Identity(a.rows(), a.cols()));
  return generator_from_parts(a, parts.h0, parts.m0);
}

OrbitGenerator build_generator(const CMatrix& s0, const CMatrix& omega) {
  require_symmetric(s0, 1e-9, "build_generator: s0");
  require_skew(omega, 1e-12, "build_generator: omega");
  if (s0.rows() != omega.rows()) throw InvalidInput("build_generator: shape mismatch");
  return generator_from_a(-(s0 + omega));
}

GrassmannCurvePoint orbit_point(const OrbitGenerator& g, double u) {
  const Index n = g.n();
  GrassmannCurvePoint pt;
  pt.u = u;
  pt.frame = mat_exp(u * g.w) * stacked(CMatrix::Identity(n, n), g.h0);
  const CMatrix top = pt.frame.topRows(n);
  if (rcond(top) > kInfinityRcond)
    pt.h = top.transpose().partialPivLu().solve(pt.frame.bottomRows(n).transpose()).transpose();
  return pt;
}

OrbitReport verify_orbit(const OrbitGenerator& g, const std::vector<double>& samples) {
  const CMatrix j = symplectic_form(g.n());
  OrbitReport r;
  for (double u : samples) {
    const GrassmannCurvePoint pt = orbit_point(g, u);
    const double scale = pt.frame.squaredNorm();
    r.max_lagrangian_residual = std::max(
        r.max_lagrangian_residual, (pt.frame.transpose() * j * pt.frame).norm() / scale);
    const GrassmannCurvePoint lo = orbit_point(g, u - kHdotStep);
    const GrassmannCurvePoint hi = orbit_point(g, u + kHdotStep);
    if (!lo.h || !hi.h) continue;
    const CMatrix hdot = (*hi.h - *lo.h) / (2 * kHdotStep);
    const CMatrix expected = mat_exp(u * g.a) * mat_exp(u * g.a.transpose());
    r.max_hdot_error = std::max(r.max_hdot_error, (hdot - expected).cwiseAbs().maxCoeff());
  }
  r.passed = r.max_hdot_error <= kOrbitPassTol && r.max_lagrangian_residual <= kOrbitPassTol;
  return r;
}

CMatrix jacobi_basis_map(const CMatrix& s0, const CMatrix& h0) {
  const Index n = s0.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix c0(2 * n, 2 * n);
  c0 << id, h0, s0, s0 * h0 + id;
  return c0 * symplectic_form(n);
}

CMatrix realize_real_generator(const OrbitGenerator& g, const CMatrix& basis_map,
                               const std::vector<double>& samples) {
  const Index n = g.n();
  if (basis_map.rows() != 2 * n || basis_map.cols() != 2 * n)
    throw InvalidInput("realize_real_generator: basis_map shape mismatch");
  const CMatrix j = symplectic_form(n);
  if ((basis_map.transpose() * j * basis_map - j).norm() >
      1e-9 * std::max(1.0, basis_map.squaredNorm()))
    throw InvalidInput("realize_real_generator: basis_map is not symplectic");

  const Eigen::PartialPivLU<CMatrix> lu(basis_map);
  const CMatrix x = basis_map * g.w * lu.inverse();
  const CMatrix x_real = x.real().cast<Complex>();

  const std::vector<double> us = samples.empty() ? roots::linspace(-1.0, 1.0, 20) : samples;
  const CMatrix start = basis_map * orbit_point(g, 0.0).frame;
  for (double u : us) {
    const CMatrix target = basis_map * orbit_point(g, u).frame;
    const double gap = subspace_gap(mat_exp(u * x_real) * start, target);
    if (!(gap <= kOrbitPassTol))
      throw ConsistencyError("realize_real_generator: real generator does not reproduce the orbit");
  }
  return x_real;
}

std::vector<double> orbit_conjugate_points(const OrbitGenerator& g, double u_max,
                                           int samples_per_unit) {
  if (!(u_max > 0)) throw InvalidInput("orbit_conjugate_points: u_max must be positive");
  const CMatrix j = symplectic_form(g.n());
  const CMatrix q0t = orthonormal(orbit_point(g, 0.0).frame).transpose() * j;
  auto meet = [&](double u) {
    const CMatrix m = q0t * orthonormal(orbit_point(g, u).frame);
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
  };
  const auto count = static_cast<std::size_t>(std::ceil(u_max * samples_per_unit)) + 1;
  const std::vector<double> us = roots::linspace(0.0, u_max, count);
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i) vals[i] = meet(us[i]);
  std::vector<double> out;
  for (std::size_t i : roots::local_minima(vals)) {
    if (i < 2) continue;
    const roots::Minimum m = roots::refine_minimum(meet, us[i - 1], us[i + 1]);
    if (m.value < 1e-7 && m.value < 1e-3 * std::max(vals[i - 1], vals[i + 1]))
      out.push_back(m.x);
  }
  if (vals[count - 1] < 1e-10) out.push_back(u_max);
  return roots::dedupe(out, 1e-7);
}

}  // namespace microcosm
