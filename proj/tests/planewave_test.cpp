#include <gtest/gtest.h>

#include "microcosm/dim2.hpp"
#include "microcosm/errors.hpp"
#include "microcosm/oracle.hpp"
#include "microcosm/planewave.hpp"
#include "microcosm/roots.hpp"
#include "test_util.hpp"

namespace microcosm {
namespace {

using Eigen::MatrixXd;
using testing::max_abs;

MatrixXd rot(double w) { return (MatrixXd(2, 2) << 0, -w, w, 0).finished(); }

MicrocosmSpec random_spec(Index n, MetricForm form) {
  return make_spec(testing::random_skew(n), testing::random_sym(n), form);
}

TEST(ConvertForm, ZeroOmegaUnchanged) {
  const MicrocosmSpec s = make_spec(MatrixXd::Zero(3, 3), testing::random_sym(3),
                                    MetricForm::Brinkmann);
  EXPECT_EQ(convert_form(s, MetricForm::Alekseevsky).p, s.p);
  const MicrocosmSpec a = make_spec(MatrixXd::Zero(3, 3), s.p, MetricForm::Alekseevsky);
  EXPECT_EQ(convert_form(a, MetricForm::Brinkmann).p, s.p);
}

TEST(ConvertForm, RotationSquare) {
  const MicrocosmSpec s = make_spec(rot(1.0), MatrixXd::Zero(2, 2), MetricForm::Brinkmann);
  const MicrocosmSpec a = convert_form(s, MetricForm::Alekseevsky);
  EXPECT_EQ(a.form, MetricForm::Alekseevsky);
  EXPECT_EQ(a.p, MatrixXd(-MatrixXd::Identity(2, 2)));
  EXPECT_EQ(a.omega, s.omega);
}

TEST(ConvertForm, RoundTrip) {
  for (int trial = 0; trial < 20; ++trial) {
    const MicrocosmSpec s = random_spec(2 + trial % 3, MetricForm::Brinkmann);
    const MicrocosmSpec back =
        convert_form(convert_form(s, MetricForm::Alekseevsky), MetricForm::Brinkmann);
    EXPECT_EQ(back.form, MetricForm::Brinkmann);
    EXPECT_EQ(back.omega, s.omega);
    EXPECT_LE((back.p - s.p).cwiseAbs().maxCoeff(), 4 * std::numeric_limits<double>::epsilon());
    EXPECT_NEAR(energy_trace(s), energy_trace(convert_form(s, MetricForm::Alekseevsky)), 1e-14);
    const MicrocosmSpec a = convert_form(s, MetricForm::Alekseevsky);
    EXPECT_NEAR((a.p - a.omega * a.omega).trace(), s.p.trace(), 1e-14);
  }
}

TEST(Spec, ValidationNamesInvariant) {
  MicrocosmSpec s = make_spec(rot(1.0), MatrixXd::Identity(2, 2), MetricForm::Brinkmann);
  s.omega(0, 0) = 1.0;
  try {
    s.validate();
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("skew"), std::string::npos);
  }
  s = make_spec(rot(1.0), MatrixXd::Identity(2, 2), MetricForm::Brinkmann);
  s.p(0, 1) = 2.0;
  EXPECT_THROW(s.validate(), InvalidInput);
}

TEST(Tidal, Examples) {
  const MatrixXd p = testing::random_sym(2);
  const MicrocosmSpec s = make_spec(rot(0.7), p, MetricForm::Brinkmann);
  EXPECT_LT(max_abs(tidal_at(s, 0.0) - testing::cplx(p)), 1e-15);
  const MicrocosmSpec flat = make_spec(MatrixXd::Zero(2, 2), p, MetricForm::Brinkmann);
  EXPECT_LT(max_abs(tidal_at(flat, 2.3) - testing::cplx(p)), 1e-15);

  const MatrixXd d = (MatrixXd(2, 2) << 1, 0, 0, -1).finished();
  const MicrocosmSpec q = make_spec(rot(M_PI / 2), d, MetricForm::Brinkmann);
  const CMatrix t = tidal_at(q, 1.0);
  // e^{ω} is the rotation by π/2.
  const MatrixXd r = (MatrixXd(2, 2) << 0, -1, 1, 0).finished();
  EXPECT_LT(max_abs(t - testing::cplx(r.transpose() * d * r)), 1e-14);
  EXPECT_LT(max_abs(t - testing::cplx(-d)), 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
  EXPECT_NEAR(es.eigenvalues()(0), -1, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(1), 1, 1e-14);
  const MicrocosmSpec a = make_spec(rot(1), d, MetricForm::Alekseevsky);
  EXPECT_THROW(tidal_at(a, 0.1), InvalidInput);
}

TEST(SymplecticForm, Examples) {
  const CVector x = CVector::Random(3), xd = CVector::Random(3);
  EXPECT_EQ(symplectic_form_eval(x, xd, x, xd, CMatrix::Zero(3, 3)), Complex(0.0));
  CVector e1 = CVector::Zero(2);
  e1(0) = 1;
  for (double u : {0.0, 1.5, -2.0})
    EXPECT_EQ(symplectic_form_eval(e1, CVector::Zero(2), u * e1, e1, CMatrix::Zero(2, 2)),
              Complex(1.0));
  const CMatrix omega = testing::cplx(testing::random_skew(3));
  const CVector y = CVector::Random(3), yd = CVector::Random(3);
  EXPECT_LT(std::abs(symplectic_form_eval(x, xd, y, yd, omega) +
                     symplectic_form_eval(y, yd, x, xd, omega)),
            1e-14);
}

TEST(SymplecticForm, ConservedAlongJacobiFlow) {
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + trial % 2;
    const CMatrix omega = testing::cplx(testing::random_skew(n, 2));
    const CMatrix p = testing::cplx(testing::random_sym(n, 2));
    const OdeRun run = integrate_jacobi(omega, p, testing::cplx(testing::random_real(n, 2)),
                                        testing::cplx(testing::random_real(n, 2)),
                                        oracle_grid(0, 3));
    auto form = [&](const CMatrix& st) {
      return symplectic_form_eval(st.col(0).head(n), st.col(0).tail(n), st.col(1).head(n),
                                  st.col(1).tail(n), omega);
    };
    const Complex start = form(run.states.front());
    double drift = 0;
    for (const CMatrix& st : run.states) drift = std::max(drift, std::abs(form(st) - start));
    EXPECT_LE(drift, 1e-8 * (std::abs(start) + 1));
  }
}

TEST(Rosen, Minkowski) {
  const MicrocosmSpec s = make_spec(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 2),
                                    MetricForm::Alekseevsky);
  const RosenData r = alekseevsky_to_rosen(s, MatrixXd::Zero(2, 2), rosen_grid(-1, 1));
  EXPECT_FALSE(r.blowup);
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    EXPECT_LT((r.h[i] - MatrixXd::Identity(2, 2)).norm(), 1e-15);
    EXPECT_LT((r.l[i] - MatrixXd::Identity(2, 2)).norm(), 1e-15);
  }
}

TEST(Rosen, CosineSquared) {
  const double eps = 0.8;
  const MicrocosmSpec s = make_spec(MatrixXd::Zero(2, 2), eps * eps * MatrixXd::Identity(2, 2),
                                    MetricForm::Alekseevsky);
  const RosenData r = alekseevsky_to_rosen(s, MatrixXd::Zero(2, 2), rosen_grid(-1, 1.5));
  ASSERT_FALSE(r.blowup);
  for (std::size_t i = 0; i < r.grid.size(); i += 37) {
    const double c = std::cos(eps * r.grid[i]);
    EXPECT_LT((r.h[i] - c * c * MatrixXd::Identity(2, 2)).norm(), 1e-10);
  }
  const auto curve = grassmann_curve(r, 0.0);
  for (double u : {-0.9, -0.3, 0.25, 1.0, 1.5})
    EXPECT_LT((curve(u) - std::tan(eps * u) / eps * MatrixXd::Identity(2, 2)).norm(), 1e-8) << u;
}

TEST(Rosen, BlowUpTruncates) {
  const MicrocosmSpec s = make_spec(MatrixXd::Zero(1, 1), MatrixXd::Identity(1, 1),
                                    MetricForm::Alekseevsky);
  const RosenData r = alekseevsky_to_rosen(s, MatrixXd::Zero(1, 1), rosen_grid(0, 3));
  ASSERT_TRUE(r.blowup);
  EXPECT_NEAR(*r.blowup, M_PI / 2, 0.01);
  EXPECT_LT(r.grid.back(), M_PI / 2);
}

TEST(Rosen, ConstantSolutionClosedForm) {
  const Dim2Params prm{-1.0, 0.5, 0.2, 0.3};
  const ConstantSolutions2x2 sols = constant_solutions_2x2(prm);
  const Dim2Solution* real_sol = nullptr;
  for (const Dim2Solution& s : sols.isolated)
    if (s.is_real(1e-12)) real_sol = &s;
  ASSERT_NE(real_sol, nullptr);
  const MatrixXd sm = real_sol->s_matrix().real();
  const MicrocosmSpec spec = make_spec(prm.omega(), prm.p(), MetricForm::Alekseevsky);
  const RosenData r = alekseevsky_to_rosen(spec, sm, rosen_grid(-1, 1));
  ASSERT_FALSE(r.blowup);
  for (std::size_t i = 0; i < r.grid.size(); i += 31) {
    const double u = r.grid[i];
    const CMatrix l = mat_exp(testing::cplx(u * (sm + prm.omega())));
    const CMatrix h = mat_exp(testing::cplx(u * (sm - prm.omega()))) * l;
    EXPECT_LT(max_abs(testing::cplx(r.l[i]) - l), 1e-8);
    EXPECT_LT(max_abs(testing::cplx(r.h[i]) - h), 1e-8);
  }
}

TEST(Rosen, JacobiEquationFiniteDifference) {
  for (int trial = 0; trial < 5; ++trial) {
    const MicrocosmSpec spec = random_spec(2 + trial % 2, MetricForm::Alekseevsky);
    const RosenData r =
        alekseevsky_to_rosen(spec, testing::random_sym(spec.n, 0.3), rosen_grid(-0.5, 0.5));
    ASSERT_FALSE(r.blowup);
    const double d = r.grid[1] - r.grid[0];
    for (std::size_t i = 1; i + 1 < r.grid.size(); i += 17) {
      const MatrixXd ldd = (r.l[i + 1] - 2 * r.l[i] + r.l[i - 1]) / (d * d);
      const MatrixXd ld = (r.l[i + 1] - r.l[i - 1]) / (2 * d);
      EXPECT_LE((ldd - 2 * spec.omega * ld + spec.p * r.l[i]).cwiseAbs().maxCoeff(), 1e-5);
      EXPECT_LE((r.h[i] - r.l[i].transpose() * r.l[i]).norm(), 1e-10);
    }
  }
}

TEST(GrassmannCurve, Identity) {
  RosenData r;
  r.grid = rosen_grid(0, 2);
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    r.h.push_back(MatrixXd::Identity(2, 2));
    r.l.push_back(MatrixXd::Identity(2, 2));
  }
  const auto curve = grassmann_curve(r, 0.5);
  for (double u : {0.0, 0.5, 1.3, 2.0})
    EXPECT_LT((curve(u) - (u - 0.5) * MatrixXd::Identity(2, 2)).norm(), 1e-13);
}

TEST(GrassmannCurve, NilpotentOrbitConsistency) {
  RosenData r;
  r.grid = rosen_grid(-1, 1);
  for (double u : r.grid) {
    const MatrixXd hdot = (MatrixXd(2, 2) << u * u + 1, u, u, 1).finished();
    r.h.push_back(hdot.inverse());
    r.l.push_back(Eigen::LLT<MatrixXd>(r.h.back()).matrixU());
  }
  const auto curve = grassmann_curve(r, 0.0);
  for (double u : {-1.0, -0.4, 0.3, 0.77, 1.0}) {
    const MatrixXd h = (MatrixXd(2, 2) << u * u * u / 3 + u, u * u / 2, u * u / 2, u).finished();
    EXPECT_LT((curve(u) - h).norm(), 1e-8) << u;
  }
}

TEST(GrassmannCurve, SingularMetricReported) {
  RosenData r;
  r.grid = rosen_grid(0, 1, 8);
  for (double u : r.grid) {
    r.h.push_back(MatrixXd::Identity(1, 1) * (u - 0.5));
    r.l.push_back(MatrixXd::Identity(1, 1));
  }
  EXPECT_THROW(grassmann_curve(r, 0.0), PoleError);
}

TEST(Raychaudhuri, Formula) {
  EXPECT_DOUBLE_EQ(raychaudhuri_bound(1.0), M_PI);
  EXPECT_DOUBLE_EQ(raychaudhuri_bound(4.0), M_PI / 2);
  EXPECT_THROW(raychaudhuri_bound(0.0), InvalidInput);
  EXPECT_THROW(raychaudhuri_bound(-1.0), InvalidInput);
}

TEST(Raychaudhuri, ConformallyTrivialOracle) {
  for (auto [a, w] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.5, 0.7}, {2.0, 1.0}}) {
    const Dim2Params prm{a, 0, 0, w};
    const OdeRun run = integrate_jacobi(testing::cplx(prm.omega()), testing::cplx(prm.p()),
                                        CMatrix::Zero(2, 2), CMatrix::Identity(2, 2),
                                        oracle_grid(0, 8));
    const std::vector<double> pts = detect_conjugate(run);
    ASSERT_FALSE(pts.empty());
    EXPECT_LE(pts.front(), raychaudhuri_bound(energy_scalar_dim2(prm)) + 1e-6);
  }
}

}  // namespace
}  // namespace microcosm
