#include "microcosm/sachs_flow.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "microcosm/efuncs.hpp"

namespace microcosm {

namespace {

constexpr double kPoleRcond = 1e-12;
constexpr int kMaxDepth = 30;

void require_invertible(const CMatrix& m, double u, const char* what) {
  if (rcond(m) < kPoleRcond) throw PoleError(what, u);
}

template <typename F>
CMatrix gauss_panel(const F& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss<double, 15>;
  const double half = (b - a) / 2, mid = (a + b) / 2;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  CMatrix sum = w[0] * f(mid);  // 15 points: x[0] = 0
  for (std::size_t i = 1; i < x.size(); ++i)
    sum += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
  return sum * half;
}

template <typename F>
CMatrix adaptive(const F& f, double a, double b, const CMatrix& whole, double tol,
                 int depth) {
  const double mid = (a + b) / 2;
  const CMatrix left = gauss_panel(f, a, mid);
  const CMatrix right = gauss_panel(f, mid, b);
  const CMatrix both = left + right;
  if ((both - whole).norm() <= tol * std::max(1.0, both.norm()) || depth >= kMaxDepth)
    return both;
  return adaptive(f, a, mid, left, tol / 2, depth + 1) +
         adaptive(f, mid, b, right, tol / 2, depth + 1);
}

}  // namespace

void SachsIVP::validate() const {
  require_skew(omega, 1e-12, "SachsIVP: omega");
  require_symmetric(p, 1e-12, "SachsIVP: p");
  require_symmetric(sigma, 1e-9, "SachsIVP: sigma");
  require_symmetric(s0, 1e-9, "SachsIVP: s0");
  const Index n = omega.rows();
  if (p.rows() != n || sigma.rows() != n || s0.rows() != n)
    throw InvalidInput("SachsIVP: shape mismatch");
  const CMatrix res = sigma * sigma + sigma * omega - omega * sigma + p;
  const double scale = 1.0 + p.norm() + omega.norm() * omega.norm();
  if (res.norm() > 1e-8 * scale)
    throw InvalidInput("SachsIVP: sigma does not solve sigma² + [sigma, omega] + p = 0");
}

ConstantPPair constant_p_pair(const CMatrix& p, double t, double u) {
  require_symmetric(p, 1e-12, "constant_p_pair: p");
  const double d = t - u;
  const CMatrix m = p * (d * d);
  ConstantPPair out;
  out.l0_val = eval_matrix(EntireFn::c, m);
  out.linf_val = d * eval_matrix(EntireFn::s, m);
  try {
    out.s0_val = d * p * eval_matrix(EntireFn::T, m);
  } catch (const PoleError&) {
    throw PoleError("constant_p_pair: vanishing solution at a pole", u);
  }
  if (d == 0.0) throw PoleError("constant_p_pair: u equals t", u);
  try {
    out.sinf_val = eval_matrix(EntireFn::U, m) / (u - t);
  } catch (const PoleError&) {
    throw PoleError("constant_p_pair: blowing-up solution at a pole", u);
  }
  return out;
}

CMatrix ivp_omega0(const CMatrix& sigma, const CMatrix& s0, double u) {
  require_symmetric(sigma, 1e-9, "ivp_omega0: sigma");
  require_symmetric(s0, 1e-9, "ivp_omega0: s0");
  const Index n = sigma.rows();
  const CMatrix e = mat_exp(-u * sigma);
  const CMatrix g = e * (s0 - sigma) * e;
  const CMatrix bracket =
      CMatrix::Identity(n, n) + u * eval_matrix(EntireFn::E, 2.0 * u * sigma) * g;
  require_invertible(bracket, u, "ivp_omega0: bracket singular");
  return sigma + g * bracket.partialPivLu().inverse();
}

CMatrix flow_integral(const CMatrix& sigma, const CMatrix& omega, double u, double tol) {
  const CMatrix lo = -sigma - omega, hi = -sigma + omega;
  auto f = [&](double r) -> CMatrix { return mat_exp(r * lo) * mat_exp(r * hi); };
  if (u == 0.0) return CMatrix::Zero(sigma.rows(), sigma.cols());
  return adaptive(f, 0.0, u, gauss_panel(f, 0.0, u), tol, 0);
}

CMatrix ivp_general(const SachsIVP& ivp, double u) {
  ivp.validate();
  const Index n = ivp.omega.rows();
  const CMatrix d = ivp.s0 - ivp.sigma;
  const CMatrix f = CMatrix::Identity(n, n) + d * flow_integral(ivp.sigma, ivp.omega, u);
  require_invertible(f, u, "ivp_general: F singular");
  const CMatrix rot = mat_exp(-u * ivp.omega);
  const CMatrix rot_inv = mat_exp(u * ivp.omega);
  const CMatrix left = mat_exp(u * (-ivp.sigma + ivp.omega));
  const CMatrix right = mat_exp(u * (-ivp.sigma - ivp.omega));
  return rot * ivp.sigma * rot_inv +
         rot * left * f.partialPivLu().solve(d) * right * rot_inv;
}

}  // namespace microcosm
