#pragma once

#include <functional>
#include <vector>

namespace microcosm::roots {

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

std::vector<double> linspace(double lo, double hi, std::size_t count);

// Zeros bracketed by sign changes of f between consecutive grid samples.
std::vector<double> sign_change_zeros(const std::function<double(double)>& f,
                                      const std::vector<double>& xs,
                                      const std::vector<double>& fs);

// Interior indices i with g[i−1] ≥ g[i] ≤ g[i+1].
std::vector<std::size_t> local_minima(const std::vector<double>& g);

Minimum refine_minimum(const std::function<double(double)>& g, double a, double b);

// Sign-change zeros plus touching zeros: local minima of |f| whose refined value
// falls below touch_ratio times the samples count/200 steps away.
std::vector<double> real_zeros(const std::function<double(double)>& f, double lo, double hi,
                               std::size_t count, double touch_ratio = 1e-6);

std::vector<double> dedupe(std::vector<double> xs, double tol);

}  // namespace microcosm::roots

#include "microcosm/matcore.hpp"

namespace microcosm::roots {

// M(u) together with dM/du.
using MatrixPath = std::function<std::pair<CMatrix, CMatrix>(double)>;

struct SingularPoint {
  double u = 0.0;
  double sigma_min = 0.0;  // smallest singular value at u
  bool converged = false;
};

// Newton iteration on the smallest singular value of a matrix path, each step
// freezing the singular vectors: u ← u − Re(σ·conj(a*M′b)) / |a*M′b|².
SingularPoint refine_singular_point(const MatrixPath& path, double u0, double max_shift,
                                    int max_iter = 12);

}  // namespace microcosm::roots
