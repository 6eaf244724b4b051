#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "microcosm/errors.hpp"

namespace microcosm {

inline constexpr int kSachsSeriesMaxOrder = 30;

// Taylor data of the solution S(u) = (u−t)⁻¹I − Σ (u−t)ⁿ Sₙ / n! blowing up at t.
template <typename Scalar>
struct SachsJet {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  Real base = Real(0);
  std::vector<Matrix> coeffs;
  std::vector<Matrix> p_jets;
};

// p_jets[k] is the k-th derivative of p at t. Missing jets are zero.
template <typename Scalar>
SachsJet<Scalar> recursion_coeffs(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& p_jets,
    int order, typename Eigen::NumTraits<Scalar>::Real base = 0,
    int max_order = kSachsSeriesMaxOrder) {
  using Matrix = typename SachsJet<Scalar>::Matrix;
  using Real = typename SachsJet<Scalar>::Real;
  using std::abs;
  if (order < 0) throw InvalidInput("recursion_coeffs: negative order");
  if (order > max_order) throw InvalidInput("recursion_coeffs: order above cap");
  if (p_jets.empty()) throw InvalidInput("recursion_coeffs: no p jets");
  const Eigen::Index n = p_jets.front().rows();
  const Real eps = Eigen::NumTraits<Real>::epsilon();
  for (const Matrix& p : p_jets) {
    if (p.rows() != n || p.cols() != n)
      throw InvalidInput("recursion_coeffs: jet shape mismatch");
    const Real scale = p.norm() > Real(1) ? Real(p.norm()) : Real(1);
    if (Real((p - p.transpose()).norm()) > Real(1e3) * eps * scale)
      throw InvalidInput("recursion_coeffs: p jet is not symmetric");
  }

  SachsJet<Scalar> jet;
  jet.base = base;
  jet.p_jets = p_jets;
  jet.coeffs.assign(order + 1, Matrix::Zero(n, n));
  // S_{k+1} = (k+1)/(k+3)·(p_k + Σ_m C(k,m) S_m S_{k−m})
  for (int k = 0; k + 1 <= order; ++k) {
    Matrix acc = k < static_cast<int>(p_jets.size()) ? p_jets[k] : Matrix::Zero(n, n);
    Scalar binom(1);
    for (int m = 0; m <= k; ++m) {
      acc += binom * (jet.coeffs[m] * jet.coeffs[k - m]);
      binom = binom * Scalar(k - m) / Scalar(m + 1);
    }
    jet.coeffs[k + 1] = Scalar(k + 1) / Scalar(k + 3) * (acc + acc.transpose()) / Scalar(2);
  }
  return jet;
}

template <typename Scalar>
typename SachsJet<Scalar>::Matrix eval_truncated(
    const SachsJet<Scalar>& jet, typename SachsJet<Scalar>::Real u) {
  using Matrix = typename SachsJet<Scalar>::Matrix;
  const auto x = u - jet.base;
  if (x == 0) throw PoleError("eval_truncated: u equals the blow-up point",
                                static_cast<double>(u));
  const Eigen::Index n = jet.coeffs.front().rows();
  Matrix out = Matrix::Identity(n, n) * Scalar(1 / x);
  Scalar w(1);  // xⁿ/n!
  for (std::size_t k = 1; k < jet.coeffs.size(); ++k) {
    w = w * Scalar(x) / Scalar(static_cast<int>(k));
    out -= w * jet.coeffs[k];
  }
  return out;
}

}  // namespace microcosm
