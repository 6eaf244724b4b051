#include <gtest/gtest.h>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "microcosm/errors.hpp"
#include "microcosm/oracle.hpp"
#include "microcosm/sachs_series.hpp"
#include "test_util.hpp"

namespace microcosm {
namespace {

using testing::mat2;
using testing::max_abs;
using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                          boost::multiprecision::et_off>;
using BigMatrix = Eigen::Matrix<Big, Eigen::Dynamic, Eigen::Dynamic>;

TEST(SachsSeries, ScalarBernoulliPattern) {
  const std::vector<CMatrix> jets{CMatrix::Constant(1, 1, 1.0)};
  const SachsJet<Complex> jet = recursion_coeffs<Complex>(jets, 21);
  EXPECT_NEAR(jet.coeffs[1](0, 0).real(), 1.0 / 3, 1e-16);
  EXPECT_EQ(jet.coeffs[2](0, 0), Complex(0.0));
  // u·S(u) = U(u²) = 1 − Σ_k u^{2k} S_{2k−1}/(2k−1)!
  for (int k = 1; k <= 10; ++k) {
    const double from_recursion =
        -jet.coeffs[2 * k - 1](0, 0).real() / boost::math::factorial<double>(2 * k - 1);
    const double bernoulli = -std::pow(4.0, k) *
                             std::abs(boost::math::bernoulli_b2n<double>(k)) /
                             boost::math::factorial<double>(2 * k);
    EXPECT_NEAR(from_recursion, bernoulli, 1e-12 * std::abs(bernoulli)) << k;
    EXPECT_EQ(jet.coeffs[2 * k](0, 0), Complex(0.0));
  }
}

TEST(SachsSeries, LowOrderCoefficients) {
  const CMatrix p0 = testing::cplx(testing::random_sym(3));
  const CMatrix p1 = testing::cplx(testing::random_sym(3));
  const SachsJet<Complex> jet = recursion_coeffs<Complex>({p0, p1}, 2);
  ASSERT_EQ(jet.coeffs.size(), 3u);
  EXPECT_EQ(jet.coeffs[0], CMatrix(CMatrix::Zero(3, 3)));
  EXPECT_LT(max_abs(jet.coeffs[1] - p0 / 3.0), 1e-16);
  // The (u−t)² coefficient of S is −S₂/2 = −p₁/4.
  EXPECT_LT(max_abs(jet.coeffs[2] - p1 / 2.0), 1e-16);
}

TEST(SachsSeries, FlatJetVanishes) {
  const SachsJet<Complex> jet = recursion_coeffs<Complex>({CMatrix::Zero(2, 2)}, 12, 0.5);
  for (const CMatrix& s : jet.coeffs) EXPECT_EQ(s, CMatrix(CMatrix::Zero(2, 2)));
  for (double u : {-1.0, 0.7, 3.0})
    EXPECT_LT(max_abs(eval_truncated(jet, u) - CMatrix::Identity(2, 2) / (u - 0.5)), 1e-15);
  EXPECT_THROW(eval_truncated(jet, 0.5), PoleError);
}

TEST(SachsSeries, RejectsAsymmetricJet) {
  EXPECT_THROW(recursion_coeffs<Complex>({mat2(0, 1, 0, 0)}, 3), InvalidInput);
  EXPECT_THROW(recursion_coeffs<Complex>({CMatrix::Zero(2, 2)}, kSachsSeriesMaxOrder + 1),
               InvalidInput);
}

TEST(SachsSeries, CotangentOfConstantP) {
  const SachsJet<Complex> jet = recursion_coeffs<Complex>({mat2(1, 0, 0, 4)}, 12);
  const double u = 0.2;
  const CMatrix s = eval_truncated(jet, u);
  EXPECT_LT(max_abs(s - mat2(1 / std::tan(u), 0, 0, 2 / std::tan(2 * u))), 1e-10);
}

TEST(SachsSeries, LinearTidalAgainstOracle) {
  const SachsJet<Complex> jet = recursion_coeffs<Complex>({mat2(0, 0, 0, 1), mat2(1, 0, 0, 0)}, 10);
  const double seed = 0.01, u = 0.1;
  const OdeRun run = integrate_sachs([](double v) { return mat2(v, 0, 0, 1); },
                                     eval_truncated(jet, seed), oracle_grid(seed, u, 1e-4));
  ASSERT_FALSE(run.blowup_u);
  EXPECT_LT(max_abs(run.states.back() - eval_truncated(jet, u)), 1e-6);
}

TEST(SachsSeries, CoefficientsSymmetric) {
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<CMatrix> jets;
    for (int k = 0; k < 5; ++k) jets.push_back(testing::cplx(testing::random_sym(3)));
    const SachsJet<Complex> jet = recursion_coeffs<Complex>(jets, 14);
    for (const CMatrix& s : jet.coeffs) EXPECT_LT(symmetry_defect(s), 1e-12);
  }
}

// ‖Ṡ + S² + p‖ of the order-N partial sum, in 100-digit arithmetic.
Big series_residual(const SachsJet<Big>& jet, const std::vector<BigMatrix>& p_jets, Big x) {
  const Eigen::Index n = jet.coeffs.front().rows();
  const BigMatrix s = eval_truncated(jet, x);
  BigMatrix ds = -BigMatrix::Identity(n, n) / (x * x);
  Big w = 1;  // x^{k−1}/(k−1)!
  for (std::size_t k = 1; k < jet.coeffs.size(); ++k) {
    if (k > 1) w = w * x / Big(static_cast<int>(k - 1));
    ds -= w * jet.coeffs[k];
  }
  BigMatrix p = BigMatrix::Zero(n, n);
  w = 1;
  for (std::size_t k = 0; k < p_jets.size(); ++k) {
    if (k > 0) w = w * x / Big(static_cast<int>(k));
    p += w * p_jets[k];
  }
  const BigMatrix r = ds + s * s + p;
  Big m = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m = std::max(m, Big(abs(r(i, j))));
  return m;
}

TEST(SachsSeries, ResidualSlope) {
  const int order = 14;
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 1 + trial % 3;
    const int degree = trial % 5;
    std::vector<BigMatrix> jets;
    for (int k = 0; k <= degree; ++k) jets.push_back(testing::random_sym(n).cast<Big>());
    const SachsJet<Big> jet = recursion_coeffs<Big>(jets, order);
    std::vector<double> lx, ly;
    for (double e = -3; e <= -1 + 1e-9; e += 0.25) {
      const double x = std::pow(10.0, e);
      lx.push_back(e);
      ly.push_back(static_cast<double>(log10(series_residual(jet, jets, Big(x)))));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    EXPECT_GE(sxy / sxx, order - 2) << "trial " << trial;
  }
}

}  // namespace
}  // namespace microcosm
