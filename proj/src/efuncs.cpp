#include "microcosm/efuncs.hpp"

#include <cmath>
#include <string>

namespace microcosm {

namespace {

constexpr double kPoleTol = 1e-13;
constexpr double kSeriesRadius = 1.0;
constexpr double kTermTol = 1e-18;

// 1 + Σ_k Π_{i≤k} w·ratio(i)
template <typename Ratio>
Complex series(Complex w, Ratio ratio) {
  Complex term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= w * ratio(k);
    sum += term;
    if (std::abs(term) < kTermTol) break;
  }
  return sum;
}

Complex c_series(Complex z) {
  return series(-z, [](int k) { return 1.0 / ((2.0 * k - 1) * (2.0 * k)); });
}
Complex s_series(Complex z) {
  return series(-z, [](int k) { return 1.0 / ((2.0 * k) * (2.0 * k + 1)); });
}
Complex e_series(Complex z) {
  return series(z, [](int k) { return 1.0 / (k + 1.0); });
}
Complex sigma_series(Complex z) { return s_series(-z * z); }
Complex gamma_series(Complex z) {
  return series(z * z, [](int k) { return 1.0 / ((2.0 * k + 1) * (2.0 * k + 2)); });
}

Complex c_value(Complex z) {
  return std::abs(z) <= kSeriesRadius ? c_series(z) : std::cos(std::sqrt(z));
}
Complex s_value(Complex z) {
  if (std::abs(z) <= kSeriesRadius) return s_series(z);
  const Complex r = std::sqrt(z);
  return std::sin(r) / r;
}

Complex quotient(Complex num, Complex den, Complex z, const char* fn) {
  if (std::abs(den) < kPoleTol * std::abs(num))
    throw PoleError(std::string(fn) + ": pole", z);
  return num / den;
}

std::vector<long double> base_coeffs(EntireFn f, int order) {
  std::vector<long double> a(order + 1, 0.0L);
  long double fact = 1.0L;  // running factorial
  switch (f) {
    case EntireFn::c:
    case EntireFn::s: {
      const int shift = f == EntireFn::c ? 0 : 1;
      for (int k = 0; k <= order; ++k) {
        long double d = 1.0L;
        for (int i = 1; i <= 2 * k + shift; ++i) d *= i;
        a[k] = (k % 2 == 0 ? 1.0L : -1.0L) / d;
      }
      break;
    }
    case EntireFn::E:
      for (int k = 0; k <= order; ++k) {
        fact *= (k + 1);
        a[k] = 1.0L / fact;
      }
      break;
    case EntireFn::sigma:
      for (int k = 0; 2 * k <= order; ++k) {
        long double d = 1.0L;
        for (int i = 1; i <= 2 * k + 1; ++i) d *= i;
        a[2 * k] = 1.0L / d;
      }
      break;
    case EntireFn::gamma:
      for (int k = 0; 2 * k <= order; ++k) {
        long double d = 1.0L;
        for (int i = 1; i <= 2 * k + 2; ++i) d *= i;
        a[2 * k] = 2.0L / d;
      }
      break;
    default:
      break;
  }
  return a;
}

std::vector<long double> divide(const std::vector<long double>& num,
                                const std::vector<long double>& den) {
  std::vector<long double> q(num.size(), 0.0L);
  for (std::size_t k = 0; k < num.size(); ++k) {
    long double acc = num[k];
    for (std::size_t i = 1; i <= k; ++i) acc -= den[i] * q[k - i];
    q[k] = acc / den[0];
  }
  return q;
}

CMatrix solve_quotient(const CMatrix& num, const CMatrix& den, const CMatrix& m,
                       EntireFn den_fn, const char* fn) {
  Eigen::JacobiSVD<CMatrix> svd(den);
  const auto& sv = svd.singularValues();
  const double scale = std::max(op_norm(num), sv(0));
  if (sv(sv.size() - 1) < kPoleTol * scale) {
    Eigen::ComplexEigenSolver<CMatrix> es(m, false);
    Complex loc = es.eigenvalues()(0);
    for (Index i = 1; i < es.eigenvalues().size(); ++i) {
      const Complex l = es.eigenvalues()(i);
      if (std::abs(eval_scalar(den_fn, l)) < std::abs(eval_scalar(den_fn, loc))) loc = l;
    }
    throw PoleError(std::string(fn) + ": matrix argument at a pole", loc);
  }
  return den.partialPivLu().solve(num);
}

// exp([[0, I], [−m, 0]]) = [[c(m), s(m)], [−m·s(m), c(m)]]
std::pair<CMatrix, CMatrix> cos_sin_blocks(const CMatrix& m) {
  const Index n = m.rows();
  CMatrix big = CMatrix::Zero(2 * n, 2 * n);
  big.topRightCorner(n, n).setIdentity();
  big.bottomLeftCorner(n, n) = -m;
  CMatrix e = mat_exp(big);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

CMatrix phi1(const CMatrix& m) {
  const Index n = m.rows();
  CMatrix big = CMatrix::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = m;
  big.topRightCorner(n, n).setIdentity();
  return mat_exp(big).topRightCorner(n, n);
}

}  // namespace

std::string_view name(EntireFn f) {
  switch (f) {
    case EntireFn::c: return "c";
    case EntireFn::s: return "s";
    case EntireFn::T: return "T";
    case EntireFn::U: return "U";
    case EntireFn::E: return "E";
    case EntireFn::sigma: return "sigma";
    case EntireFn::gamma: return "gamma";
  }
  return "?";
}

Complex eval_scalar(EntireFn f, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidInput("eval_scalar: non-finite argument");
  const bool small = std::abs(z) <= kSeriesRadius;
  switch (f) {
    case EntireFn::c: return c_value(z);
    case EntireFn::s: return s_value(z);
    case EntireFn::T: return quotient(s_value(z), c_value(z), z, "T");
    case EntireFn::U: return quotient(c_value(z), s_value(z), z, "U");
    case EntireFn::E: return small ? e_series(z) : (std::exp(z) - 1.0) / z;
    case EntireFn::sigma: return small ? sigma_series(z) : std::sinh(z) / z;
    case EntireFn::gamma: {
      if (small) return gamma_series(z);
      const Complex h = std::sinh(z / 2.0) / (z / 2.0);
      return h * h;
    }
  }
  throw InvalidInput("eval_scalar: unknown function");
}

CMatrix eval_matrix(EntireFn f, const CMatrix& m) {
  require_square(m, "eval_matrix");
  if (!all_finite(m)) throw InvalidInput("eval_matrix: non-finite entry");
  const Index n = m.rows();
  if (n == 0) return m;
  switch (f) {
    case EntireFn::c: return cos_sin_blocks(m).first;
    case EntireFn::s: return cos_sin_blocks(m).second;
    case EntireFn::T: {
      auto [c, s] = cos_sin_blocks(m);
      return solve_quotient(s, c, m, EntireFn::c, "T");
    }
    case EntireFn::U: {
      auto [c, s] = cos_sin_blocks(m);
      return solve_quotient(c, s, m, EntireFn::s, "U");
    }
    case EntireFn::E: return phi1(m);
    case EntireFn::sigma: return cos_sin_blocks(-m * m).second;
    case EntireFn::gamma: {
      CMatrix h = cos_sin_blocks(-(m * m) / 4.0).second;
      return h * h;
    }
  }
  throw InvalidInput("eval_matrix: unknown function");
}

std::vector<double> taylor_coeffs(EntireFn f, int order) {
  if (order < 0) throw InvalidInput("taylor_coeffs: negative order");
  std::vector<long double> a;
  if (f == EntireFn::T)
    a = divide(base_coeffs(EntireFn::s, order), base_coeffs(EntireFn::c, order));
  else if (f == EntireFn::U)
    a = divide(base_coeffs(EntireFn::c, order), base_coeffs(EntireFn::s, order));
  else
    a = base_coeffs(f, order);
  return {a.begin(), a.end()};
}

}  // namespace microcosm
