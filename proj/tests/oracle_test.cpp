#include <gtest/gtest.h>

#include "microcosm/errors.hpp"
#include "microcosm/oracle.hpp"
#include "microcosm/planewave.hpp"
#include "microcosm/riccati.hpp"
#include "microcosm/sachs_flow.hpp"
#include "test_util.hpp"

namespace microcosm {
namespace {

using testing::cplx;
using testing::max_abs;

TEST(JacobiOracle, FlatConstant) {
  const OdeRun run = integrate_jacobi(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                      CMatrix::Identity(2, 2), CMatrix::Zero(2, 2),
                                      oracle_grid(0, 3));
  for (const CMatrix& st : run.states)
    EXPECT_LT(max_abs(st.topRows(2) - CMatrix::Identity(2, 2)), 1e-15);
}

TEST(JacobiOracle, Sine) {
  const OdeRun run = integrate_jacobi(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2),
                                      CMatrix::Zero(2, 2), CMatrix::Identity(2, 2),
                                      oracle_grid(0, 7));
  for (std::size_t i = 0; i < run.grid.size(); i += 100)
    EXPECT_LT(max_abs(run.states[i].topRows(2) - std::sin(run.grid[i]) * CMatrix::Identity(2, 2)),
              1e-10);
  const std::vector<double> pts = detect_conjugate(run);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_NEAR(pts[0], M_PI, 1e-8);
  EXPECT_NEAR(pts[1], 2 * M_PI, 1e-8);
}

TEST(JacobiOracle, MatchesExponential) {
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix omega = cplx(testing::random_skew(2));
    const CMatrix p = cplx(testing::random_sym(2));
    const CMatrix l0 = cplx(testing::random_real(2, 2));
    const CMatrix ld0 = cplx(testing::random_real(2, 2));
    const OdeRun run = integrate_jacobi(omega, p, l0, ld0, oracle_grid(0, 2));
    CMatrix q = CMatrix::Zero(4, 4);
    q.topRightCorner(2, 2).setIdentity();
    q.bottomLeftCorner(2, 2) = -p;
    q.bottomRightCorner(2, 2) = 2.0 * omega;
    CMatrix y0(4, 2);
    y0 << l0, ld0;
    EXPECT_LT(max_abs(run.states.back() - mat_exp(2.0 * q) * y0), 1e-9);
    EXPECT_LT(max_abs(run.state_at(1.2345) - mat_exp(1.2345 * q) * y0), 1e-9);
  }
}

TEST(JacobiOracle, FourthOrder) {
  const OdeOptions loose{0.1, 1.0}, finer{0.05, 1.0};
  auto err = [](OdeOptions o) {
    const OdeRun run = integrate_jacobi(CMatrix::Zero(1, 1), CMatrix::Identity(1, 1),
                                        CMatrix::Zero(1, 1), CMatrix::Identity(1, 1),
                                        {0.0, 2.0}, o);
    return std::abs(run.states.back()(0, 0) - std::sin(2.0));
  };
  EXPECT_GE(err(loose) / err(finer), 16.0 * 0.9);
}

TEST(JacobiOracle, RejectsBadInput) {
  EXPECT_THROW(integrate_jacobi(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                CMatrix::Identity(2, 2), oracle_grid(0, 1)),
               InvalidInput);
  EXPECT_THROW(integrate_jacobi(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                CMatrix::Identity(2, 2), {0.0, 0.0}),
               InvalidInput);
}

TEST(SachsOracle, FlatRiccati) {
  const OdeRun run = integrate_sachs([](double) { return CMatrix(CMatrix::Zero(2, 2)); },
                                     CMatrix::Identity(2, 2), oracle_grid(0, 3));
  EXPECT_FALSE(run.blowup_u);
  for (std::size_t i = 0; i < run.grid.size(); i += 100)
    EXPECT_LT(max_abs(run.states[i] - CMatrix::Identity(2, 2) / (1 + run.grid[i])), 1e-12);
}

TEST(SachsOracle, TangentBlowUp) {
  const OdeRun run = integrate_sachs([](double) { return CMatrix(CMatrix::Identity(1, 1)); },
                                     CMatrix::Zero(1, 1), oracle_grid(0, 2));
  ASSERT_TRUE(run.blowup_u);
  EXPECT_NEAR(*run.blowup_u, M_PI / 2, 1e-4);
  for (std::size_t i = 0; i < run.grid.size() && run.grid[i] < 1.5; i += 50)
    EXPECT_NEAR(run.states[i](0, 0).real(), -std::tan(run.grid[i]), 1e-8);
}

TEST(SachsOracle, MicrocosmMatchesClosedForm) {
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix omega = cplx(testing::random_skew(2));
    const CMatrix p = cplx(testing::random_sym(2));
    const SachsIVP ivp{omega, p, solve_algebraic_sachs(omega, p), cplx(testing::random_sym(2, 0.3))};
    const OdeRun run = integrate_sachs(
        [&](double u) { return CMatrix(mat_exp(-u * omega) * p * mat_exp(u * omega)); }, ivp.s0,
        oracle_grid(0, 0.8));
    for (std::size_t i = 0; i < run.states.size(); i += 40)
      EXPECT_LT(max_abs(run.states[i] - ivp_general(ivp, run.grid[i])), 1e-6);
  }
}

TEST(SachsOracle, LogDerivativeOfJacobi) {
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix p = cplx(testing::random_sym(2));
    const CMatrix s0 = cplx(testing::random_sym(2, 0.5));
    // ω = 0: L̇ = S L with L(0) = I.
    const std::vector<double> grid = oracle_grid(0, 0.7);
    const OdeRun jac = integrate_jacobi(CMatrix::Zero(2, 2), p, CMatrix::Identity(2, 2), s0, grid);
    const OdeRun sac = integrate_sachs([&](double) { return p; }, s0, grid);
    for (std::size_t i = 0; i < sac.states.size(); i += 35) {
      const CMatrix l = jac.states[i].topRows(2), ld = jac.states[i].bottomRows(2);
      EXPECT_LT(max_abs(sac.states[i] - ld * l.inverse()), 1e-7);
    }
  }
}

TEST(DetectConjugate, FlatEmpty) {
  const OdeRun run = integrate_jacobi(CMatrix::Zero(2, 2), CMatrix::Zero(2, 2),
                                      CMatrix::Zero(2, 2), CMatrix::Identity(2, 2),
                                      oracle_grid(0, 10));
  EXPECT_TRUE(detect_conjugate(run).empty());
}

TEST(DetectConjugate, RequiresVanishingStart) {
  const OdeRun run = integrate_jacobi(CMatrix::Zero(1, 1), CMatrix::Identity(1, 1),
                                      CMatrix::Identity(1, 1), CMatrix::Zero(1, 1),
                                      oracle_grid(0, 1));
  EXPECT_THROW(detect_conjugate(run), InvalidInput);
}

TEST(DetectConjugate, PositiveEnergyWithinScaledTraceBound) {
  for (auto [a, w] : std::vector<std::pair<double, double>>{{1.0, 0.3}, {0.2, 0.9}, {3.0, 0.0}}) {
    const CMatrix omega = testing::rot_gen(w);
    const CMatrix p = CMatrix::Identity(2, 2) * a;
    const OdeRun run = integrate_jacobi(omega, p, CMatrix::Zero(2, 2), CMatrix::Identity(2, 2),
                                        oracle_grid(0, 10));
    const std::vector<double> pts = detect_conjugate(run);
    ASSERT_FALSE(pts.empty());
    const double e = a + w * w;
    // π/√(2E) is the bound for the trace energy 2E; the safety factor is √2 (= √n).
    EXPECT_LE(pts.front(), M_PI / std::sqrt(2 * e) * std::sqrt(2.0) + 1e-6);
    EXPECT_NEAR(pts.front(), M_PI / std::sqrt(e), 1e-7);
  }
}

TEST(VanishingFields, StartAndCheck) {
  const CMatrix omega = cplx(testing::random_skew(2));
  const CMatrix p = cplx(testing::random_sym(2));
  CMatrix start = CMatrix::Zero(4, 2);
  start.bottomRows(2).setIdentity();
  EXPECT_LT(subspace_gap(vanishing_fields_cauchy(omega, p, 0.0), start), 1e-15);
  // Fields with these Cauchy data (Brinkmann form) vanish at u: check in Alekseevsky form with
  // ẋ_A(0) = ẋ_B(0) + ω x(0).
  for (double u : {0.6, -0.9}) {
    const CMatrix c = vanishing_fields_cauchy(omega, p, u);
    const CMatrix l0 = c.topRows(2), ld0 = c.bottomRows(2) + omega * c.topRows(2);
    const double sgn = u > 0 ? 1.0 : -1.0;
    CMatrix q = CMatrix::Zero(4, 4);
    q.topRightCorner(2, 2).setIdentity();
    q.bottomLeftCorner(2, 2) = -p;
    q.bottomRightCorner(2, 2) = 2.0 * omega;
    CMatrix y0(4, 2);
    y0 << l0, ld0;
    EXPECT_LT(max_abs((mat_exp(u * q) * y0).topRows(2)), 1e-8) << sgn;
  }
}

}  // namespace
}  // namespace microcosm
