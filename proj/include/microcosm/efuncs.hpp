#pragma once

#include <string_view>
#include <vector>

#include "microcosm/matcore.hpp"

namespace microcosm {

// c(z) = cos√z, s(z) = sin√z/√z, T = s/c, U = c/s, E(z) = (e^z − 1)/z,
// sigma(z) = sinh z / z, gamma(z) = 2(cosh z − 1)/z².
enum class EntireFn { c, s, T, U, E, sigma, gamma };

std::string_view name(EntireFn f);

Complex eval_scalar(EntireFn f, Complex z);

CMatrix eval_matrix(EntireFn f, const CMatrix& m);

// Taylor coefficients a_0..a_order at z = 0.
std::vector<double> taylor_coeffs(EntireFn f, int order);

}  // namespace microcosm
