#include "microcosm/dim2.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "microcosm/efuncs.hpp"
#include "microcosm/oracle.hpp"
#include "microcosm/roots.hpp"

namespace microcosm {

namespace {

constexpr double kDedupTol = 1e-10;
constexpr double kSamplesPerUnit = 1e4;
constexpr double kOracleMatchTol = 1e-6;
constexpr double kNearNodes = 1e-2;

const Complex kI(0.0, 1.0);

CMatrix j2() {
  CMatrix m(2, 2);
  m << 0.0, -1.0, 1.0, 0.0;
  return m;
}

Dim2Solution solution_from_s(const Dim2Params& p, Complex s) {
  const Complex z = s * s + p.w * p.w;
  const Complex t = -(p.b * p.w + p.c * s) / (2.0 * z);
  const Complex u0 = (-p.b * s + p.c * p.w) / (2.0 * z);
  return {s, t, u0, z};
}

void push_unique(std::vector<Dim2Solution>& out, const Dim2Solution& sol) {
  for (const Dim2Solution& o : out)
    if (std::abs(o.s - sol.s) + std::abs(o.t - sol.t) + std::abs(o.u0 - sol.u0) <=
        kDedupTol * (1.0 + std::abs(sol.s)))
      return;
  out.push_back(sol);
}

// γ(2u√(ζ + ω²)); even in the square root.
Complex g_of(Complex zeta, Complex omega2, double u) {
  return eval_scalar(EntireFn::gamma, 2.0 * u * std::sqrt(zeta + omega2));
}

// [f(T)]_{0,k} for the bidiagonal T with the nodes on the diagonal is f[nodes].
CMatrix bidiagonal(const std::vector<Complex>& nodes) {
  const auto k = static_cast<Index>(nodes.size());
  CMatrix t = CMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    t(i, i) = nodes[i];
    if (i + 1 < k) t(i, i + 1) = 1.0;
  }
  return t;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

Eigen::MatrixXd Dim2Params::p() const {
  Eigen::MatrixXd m(2, 2);
  m << a + b, c, c, a - b;
  return m;
}

Eigen::MatrixXd Dim2Params::omega() const {
  Eigen::MatrixXd m(2, 2);
  m << 0.0, -w, w, 0.0;
  return m;
}

double energy_scalar_dim2(const Dim2Params& params) { return params.energy_scalar(); }

SplitQuaternion SplitQuaternion::from_matrix(const CMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw InvalidInput("SplitQuaternion: matrix must be 2×2");
  return {(m(0, 0) + m(1, 1)) / 2.0, (m(1, 0) - m(0, 1)) / 2.0, (m(0, 0) - m(1, 1)) / 2.0,
          (m(1, 0) + m(0, 1)) / 2.0};
}

CMatrix SplitQuaternion::to_matrix() const {
  CMatrix m(2, 2);
  m << a + c, -b + d, b + d, a - c;
  return m;
}

SplitQuaternion SplitQuaternion::operator*(const SplitQuaternion& o) const {
  return from_matrix(to_matrix() * o.to_matrix());
}

SplitQuaternion SplitQuaternion::operator+(const SplitQuaternion& o) const {
  return {a + o.a, b + o.b, c + o.c, d + o.d};
}

SplitQuaternion SplitQuaternion::conj_j() const {
  return from_matrix(j2() * to_matrix() * j2());
}

bool SplitQuaternion::trace_free(double tol) const {
  return std::abs(a) <= tol * std::max(1.0, std::abs(b) + std::abs(c) + std::abs(d));
}

Complex SplitQuaternion::square_scalar() const { return a * a - b * b + c * c + d * d; }

CMatrix Dim2Solution::s_matrix() const {
  CMatrix m(2, 2);
  m << s + u0, t, t, s - u0;
  return m;
}

SplitQuaternion Dim2Solution::sigma(double w) const { return {0.0, w, u0, t}; }

double Dim2Solution::residual(const Dim2Params& params) const {
  const double w = params.w;
  const Complex r1 = params.b + 2.0 * s * u0 + 2.0 * w * t;
  const Complex r2 = params.c + 2.0 * s * t - 2.0 * w * u0;
  const Complex r3 = params.a + s * s + w * w + t * t + u0 * u0;
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

bool Dim2Solution::is_real(double tol) const {
  auto real = [tol](Complex v) { return std::abs(v.imag()) <= tol * std::max(1.0, std::abs(v)); };
  return real(s) && real(t) && real(u0);
}

Dim2Solution Dim2Family::member(Complex u0) const {
  Dim2Solution sol{s, 0.0, u0, s * s + w * w};
  if (kind == Dim2FamilyKind::isotropic)
    sol.t = -s * u0 / w;
  else
    sol.t = std::sqrt(Complex(-a) - u0 * u0);
  return sol;
}

bool Dim2Family::contains(const Dim2Solution& sol, double tol) const {
  if (std::abs(sol.s - s) > tol) return false;
  if (kind == Dim2FamilyKind::isotropic) return std::abs(sol.t * w + s * sol.u0) <= tol;
  return std::abs(sol.t * sol.t + sol.u0 * sol.u0 + a) <= tol;
}

std::string Dim2Family::description() const {
  if (kind == Dim2FamilyKind::isotropic)
    return "s = " + std::string(s.imag() > 0 ? "+" : "-") + "i·w, t = " +
           (s.imag() > 0 ? "-" : "+") + "i·u0, u0 free";
  return "s = 0, t² + u0² = " + fmt(-a);
}

ConstantSolutions2x2 constant_solutions_2x2(const Dim2Params& params) {
  ConstantSolutions2x2 out;
  const double a = params.a, w = params.w;
  if (!params.conformally_trivial()) {
    const Complex root = std::sqrt(Complex(params.det_p()));
    for (double sign : {1.0, -1.0}) {
      const Complex q = (-(a + 2 * w * w) + sign * root) / 2.0;
      const Complex s = std::sqrt(q);
      push_unique(out.isolated, solution_from_s(params, s));
      push_unique(out.isolated, solution_from_s(params, -s));
    }
    return out;
  }
  if (a != 0.0) {
    const Complex s = std::sqrt(Complex(-(a + w * w)));
    push_unique(out.isolated, {s, 0.0, 0.0, s * s + w * w});
    push_unique(out.isolated, {-s, 0.0, 0.0, s * s + w * w});
  }
  if (w == 0.0) out.families.push_back({Dim2FamilyKind::circle, 0.0, a, w});
  if (a == 0.0 && w != 0.0) {
    out.families.push_back({Dim2FamilyKind::isotropic, kI * w, a, w});
    out.families.push_back({Dim2FamilyKind::isotropic, -kI * w, a, w});
  }
  return out;
}

RealityReport reality_classify(const Dim2Params& params) {
  if (params.conformally_trivial())
    throw InvalidInput("reality_classify: requires (B, C) ≠ (0, 0)");
  RealityReport r;
  const double det = params.det_p();
  const double a = params.a, w = params.w;
  r.det_negative = det < 0;
  r.derived_all_real = det >= 0 && a + 2 * w * w <= -std::sqrt(det);
  r.printed_all_real = det >= 0 && params.f_invariant() >= 0 && a >= w * w;

  const auto sols = constant_solutions_2x2(params).isolated;
  std::size_t real = 0;
  for (const Dim2Solution& s : sols) real += s.is_real(1e-10) ? 1 : 0;
  r.cls = real == sols.size() ? RealityClass::all_real
          : real == 0         ? RealityClass::all_nonreal
                              : RealityClass::mixed;
  r.criteria_agree = r.derived_all_real == (r.cls == RealityClass::all_real);
  r.witnesses.push_back("|p| = " + fmt(det));
  r.witnesses.push_back("A + 2w² = " + fmt(a + 2 * w * w));
  if (det >= 0) r.witnesses.push_back("-sqrt|p| = " + fmt(-std::sqrt(det)));
  r.witnesses.push_back("F = " + fmt(params.f_invariant()));
  r.witnesses.push_back(std::to_string(real) + " of " + std::to_string(sols.size()) +
                        " roots real");
  return r;
}

std::pair<Complex, Complex> quadratic_roots_xy(const Dim2Params& params) {
  const Complex root = std::sqrt(Complex(params.det_p()));
  const Complex r1 = (-params.a + root) / 2.0;
  const Complex r2 = (-params.a - root) / 2.0;
  if (std::abs(r1) < std::abs(r2) || (std::abs(r1) == std::abs(r2) && r1.real() >= r2.real()))
    return {r1, r2};
  return {r2, r1};
}

OrbitCoeffs2x2 orbit_coeffs_2x2(Complex s, const SplitQuaternion& sigma, double u) {
  if (!sigma.trace_free(1e-12)) throw InvalidInput("orbit_coeffs_2x2: sigma must be trace-free");
  const Complex q = std::sqrt(sigma.square_scalar());
  const Complex a0 = -2.0 * s, am = -2.0 * s - 2.0 * q, ap = -2.0 * s + 2.0 * q;
  auto g = [u](Complex rate) { return u * eval_scalar(EntireFn::E, rate * u); };
  const Complex ia = 0.5 * g(a0) + 0.25 * (g(ap) + g(am));
  const Complex ic = mat_exp(u * bidiagonal({0.0, am, ap}))(0, 2);
  const Complex ib = 2.0 * mat_exp(u * bidiagonal({0.0, am, a0, ap}))(0, 3);
  const Complex grow = std::exp(2.0 * s * u);
  return {grow * ia, grow * ib, grow * ic};
}

CMatrix orbit_h_2x2(Complex s, const SplitQuaternion& sigma, double u) {
  const OrbitCoeffs2x2 k = orbit_coeffs_2x2(s, sigma, u);
  const CMatrix m = sigma.to_matrix();
  const CMatrix j = j2();
  const CMatrix inner = k.coef_a * CMatrix::Identity(2, 2) + k.coef_b * (m * j * m * j) +
                        k.coef_c * ((m * j - j * m) * j);
  return std::exp(-2.0 * s * u) * inner;
}

Complex conjugate_condition_xy(Complex x, Complex y, Complex omega2, double u) {
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  if (std::abs(y - x) > kNearNodes * scale)
    return (y * g_of(y, omega2, u) - x * g_of(x, omega2, u)) / (y - x);
  // (ζ·G)[y, x] = G(x) + y·G[y, x], G(ζ) = Γ(4u²(ζ + ω²)), Γ = 2φ[0, ·], φ(v) = c(−v).
  const double k = 4.0 * u * u;
  const Complex vy = k * (y + omega2), vx = k * (x + omega2);
  const Complex phi3 = eval_matrix(EntireFn::c, -bidiagonal({0.0, vy, vx}))(0, 2);
  return g_of(x, omega2, u) + y * k * 2.0 * phi3;
}

Complex conjugate_condition(Complex s, Complex sigma2, Complex omega2, double u) {
  return conjugate_condition_xy(sigma2 - omega2, s * s - omega2, omega2, u);
}

ConjugateSearch find_conjugate_points(const Dim2Params& params, double u_max, bool verify) {
  if (!(u_max > 0)) throw InvalidInput("find_conjugate_points: u_max must be positive");
  const auto [x, y] = quadratic_roots_xy(params);
  const Complex omega2 = -params.w * params.w;
  auto cond = [x = x, y = y, omega2](double u) {
    return conjugate_condition_xy(x, y, omega2, u).real();
  };
  const auto count = static_cast<std::size_t>(std::ceil(u_max * kSamplesPerUnit)) + 1;
  ConjugateSearch out;
  for (double u : roots::real_zeros(cond, 0.0, u_max, count))
    if (u > 1e-9) out.points.push_back(u);
  if (!verify) return out;

  const CMatrix omega = params.omega().cast<Complex>();
  const CMatrix p = params.p().cast<Complex>();
  const OdeRun run = integrate_jacobi(omega, p, CMatrix::Zero(2, 2), CMatrix::Identity(2, 2),
                                      oracle_grid(0.0, u_max));
  out.oracle_points = detect_conjugate(run);
  auto covered = [u_max](const std::vector<double>& from, const std::vector<double>& in) {
    for (double u : from) {
      if (u_max - u < kOracleMatchTol) continue;
      const bool hit = std::any_of(in.begin(), in.end(),
                                   [u](double v) { return std::abs(u - v) <= kOracleMatchTol; });
      if (!hit) return false;
    }
    return true;
  };
  out.verified = covered(out.points, out.oracle_points) && covered(out.oracle_points, out.points);
  return out;
}

ExistenceReport existence_predicates(const Dim2Params& params) {
  ExistenceReport r;
  const double lambda_max = params.a + std::hypot(params.b, params.c);
  if (params.det_p() < 0) r.reasons.push_back("|p| < 0");
  if (params.energy_scalar() > 0) r.reasons.push_back("energy A + w² > 0");
  if (lambda_max > 0) r.reasons.push_back("p has a positive eigenvalue");
  if (!r.reasons.empty()) {
    r.exists = Existence::yes;
    return r;
  }
  if (params.conformally_trivial()) {
    r.exists = Existence::no;
    r.reasons.push_back("conformally trivial with energy A + w² ≤ 0");
    return r;
  }
  r.reasons.push_back("no analytic criterion applies");
  return r;
}

}  // namespace microcosm
