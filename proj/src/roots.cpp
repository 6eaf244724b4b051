#include "microcosm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace microcosm::roots {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> xs(count);
  if (count == 1) {
    xs[0] = lo;
    return xs;
  }
  for (std::size_t i = 0; i < count; ++i)
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return xs;
}

std::vector<double> sign_change_zeros(const std::function<double(double)>& f,
                                      const std::vector<double>& xs,
                                      const std::vector<double>& fs) {
  std::vector<double> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      out.push_back(xs[i]);
      continue;
    }
    if (i + 1 < xs.size() && fs[i + 1] != 0.0 && std::signbit(fs[i]) != std::signbit(fs[i + 1])) {
      std::uintmax_t iters = 200;
      auto r = boost::math::tools::toms748_solve(
          f, xs[i], xs[i + 1], fs[i], fs[i + 1],
          boost::math::tools::eps_tolerance<double>(48), iters);
      out.push_back((r.first + r.second) / 2);
    }
  }
  return out;
}

std::vector<std::size_t> local_minima(const std::vector<double>& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (g[i] <= g[i - 1] && g[i] <= g[i + 1] && (g[i] < g[i - 1] || g[i] < g[i + 1]))
      out.push_back(i);
  return out;
}

Minimum refine_minimum(const std::function<double(double)>& g, double a, double b) {
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::brent_find_minima(g, a, b,
                                                 std::numeric_limits<double>::digits, iters);
  return {r.first, r.second};
}

std::vector<double> real_zeros(const std::function<double(double)>& f, double lo, double hi,
                               std::size_t count, double touch_ratio) {
  const std::vector<double> xs = linspace(lo, hi, count);
  std::vector<double> fs(count), mag(count);
  for (std::size_t i = 0; i < count; ++i) {
    fs[i] = f(xs[i]);
    mag[i] = std::abs(fs[i]);
  }
  std::vector<double> out = sign_change_zeros(f, xs, fs);
  auto abs_f = [&](double x) { return std::abs(f(x)); };
  const std::size_t reach = std::max<std::size_t>(1, count / 200);
  auto reference = [&](std::size_t i) {
    const std::size_t lo_i = i > reach ? i - reach : 0;
    const std::size_t hi_i = std::min(count - 1, i + reach);
    return std::max(mag[lo_i], mag[hi_i]);
  };
  for (std::size_t i : local_minima(mag)) {
    if (std::signbit(fs[i - 1]) != std::signbit(fs[i]) ||
        std::signbit(fs[i]) != std::signbit(fs[i + 1]))
      continue;
    const Minimum m = refine_minimum(abs_f, xs[i - 1], xs[i + 1]);
    if (m.value <= touch_ratio * reference(i)) out.push_back(m.x);
  }
  const std::size_t last = count - 1;
  if (count > 2 && mag[last] < mag[last - 1] &&
      std::signbit(fs[last - 1]) == std::signbit(fs[last])) {
    const Minimum m = refine_minimum(abs_f, xs[last - 1], xs[last]);
    if (m.value <= touch_ratio * reference(last) && xs[last] - m.x > 1e-9 * std::max(1.0, hi))
      out.push_back(m.x);
  }
  return dedupe(out, 1e-7 * std::max(1.0, std::abs(hi)));
}

std::vector<double> dedupe(std::vector<double> xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

}  // namespace microcosm::roots

namespace microcosm::roots {

SingularPoint refine_singular_point(const MatrixPath& path, double u0, double max_shift,
                                    int max_iter) {
  SingularPoint out{u0, 0.0, false};
  double u = u0;
  for (int it = 0; it < max_iter; ++it) {
    const auto [m, dm] = path(u);
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Index k = m.cols() - 1;
    const double sigma = svd.singularValues()(k);
    const Complex d = (svd.matrixU().col(k).adjoint() * dm * svd.matrixV().col(k)).value();
    out.u = u;
    out.sigma_min = sigma;
    if (std::abs(d) == 0.0) return out;
    const double step = -sigma * d.real() / std::norm(d);
    u += step;
    if (std::abs(u - u0) > max_shift) return out;
    const double noise = 1e-13 * (m.norm() + dm.norm()) / std::abs(d);
    if (std::abs(step) <= 1e-11 * std::max(1.0, std::abs(u)) + noise) {
      out.u = u;
      out.sigma_min = Eigen::JacobiSVD<CMatrix>(path(u).first).singularValues()(k);
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace microcosm::roots
