#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ptpq/errors.hpp"
#include "ptpq/integrator.hpp"
#include "ptpq/nino.hpp"
#include "ptpq/vector_field.hpp"

using namespace ptpq;
using namespace ptpq::dynamics;
using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

const Complex I{0.0, 1.0};

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Vec3 bloch_rate(const ComplexMatrix& dx) { return oracle::bloch_from_density(dx); }

// Random generator set; nonjump weights are rescaled to satisfy sum |z|^2 = 1.
NinoGeneratorSet random_set(std::mt19937_64& rng, int n = 2) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<NonjumpTerm> nj;
  const int k = count(rng);
  std::vector<Complex> z;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    z.push_back(oracle::random_matrix(rng, 1)(0, 0));
    total += std::norm(z.back());
  }
  for (int i = 0; i < k; ++i) nj.push_back({z[i] / std::sqrt(total), oracle::random_matrix(rng, n), 1});
  std::vector<JumpTerm> j;
  for (int i = count(rng) - 1; i > 0; --i) j.push_back({sign(rng) ? 1 : -1, oracle::random_matrix(rng, n)});
  return NinoGeneratorSet(nj, j);
}

// Unital CPTP set: normal jump operators, L+ = -1/2 sum B^dagger B.
NinoGeneratorSet random_unital_cptp_set(std::mt19937_64& rng) {
  std::vector<JumpTerm> jumps;
  ComplexMatrix bb = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    const ComplexMatrix u = oracle::expm_hermitian(oracle::random_hermitian(rng, 2), I);
    const ComplexMatrix d = diag2(oracle::random_matrix(rng, 1)(0, 0), oracle::random_matrix(rng, 1)(0, 0));
    const ComplexMatrix b = u * d * u.adjoint();
    jumps.push_back({1, b});
    bb += b.adjoint() * b;
  }
  const ComplexMatrix l = -I * oracle::random_hermitian(rng, 2) - 0.5 * bb;
  return NinoGeneratorSet({{1.0, l, 1}}, jumps);
}

}  // namespace

TEST(NinoGeneratorSet, Validation) {
  EXPECT_THROW(NinoGeneratorSet({}, {}), ValidationError);
  EXPECT_THROW(NinoGeneratorSet({{0.5, ComplexMatrix::Zero(2, 2), 1}}), ValidationError);
  EXPECT_THROW(NinoGeneratorSet({{1.0, ComplexMatrix::Zero(2, 2), 2}}), ValidationError);
  EXPECT_THROW(NinoGeneratorSet({{1.0, ComplexMatrix::Zero(2, 2), 1}}, {{1, ComplexMatrix::Zero(3, 3)}}),
               ValidationError);
  const NinoGeneratorSet ok({{1.0, ComplexMatrix::Zero(2, 2), 1}});
  EXPECT_FALSE(ok.has_negative_nonjump_sign());
  const NinoGeneratorSet neg({{std::sqrt(2.0), ComplexMatrix::Zero(2, 2), 1}, {1.0, ComplexMatrix::Zero(2, 2), -1}});
  EXPECT_TRUE(neg.has_negative_nonjump_sign());
}

TEST(NinoRhs, UnitaryPrecession) {
  const ComplexMatrix h = oracle::pauli(3) / 2.0;
  const NinoGeneratorSet gens({{1.0, -I * h, 1}});
  const ComplexMatrix x = oracle::density_from_bloch({1, 0, 0});
  const ComplexMatrix dx = nino_rhs(x, gens);
  EXPECT_LT(max_abs(dx - (-I * (h * x - x * h))), 1e-15);
  EXPECT_LT((bloch_rate(dx) - Vec3(0, 1, 0)).norm(), 1e-15);
}

TEST(NinoRhs, HermitianNonjump) {
  const NinoGeneratorSet gens({{1.0, diag2(1, 0), 1}});
  const ComplexMatrix dx = nino_rhs(ComplexMatrix::Identity(2, 2) / 2.0, gens);
  EXPECT_LT(max_abs(dx - oracle::pauli(3) / 2.0), 1e-15);
  EXPECT_NEAR(bloch_rate(dx).z(), 1.0, 1e-15);
}

TEST(NinoRhs, JumpOnly) {
  const NinoGeneratorSet gens({{1.0, ComplexMatrix::Zero(2, 2), 1}}, {{1, oracle::pauli(1)}});
  const ComplexMatrix dx = nino_rhs(diag2(1, 0), gens);
  EXPECT_LT(max_abs(dx - diag2(-1, 1)), 1e-15);
  EXPECT_NEAR(bloch_rate(dx).z(), -2.0, 1e-15);
}

TEST(NinoRhs, TraceAndHermiticity) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 2;
    const auto gens = random_set(rng, n);
    const ComplexMatrix dx = nino_rhs(oracle::random_density(rng, n), gens);
    EXPECT_LT(std::abs(dx.trace()), 1e-12 * std::max(1.0, max_abs(dx)));
    EXPECT_LT(max_abs(dx - dx.adjoint()), 1e-12 * std::max(1.0, max_abs(dx)));
  }
}

TEST(NinoRhs, TraceGeneratorOracle) {
  std::mt19937_64 rng(32);
  const auto gens = random_set(rng);
  ComplexMatrix df0 = ComplexMatrix::Zero(2, 2);
  for (const auto& t : gens.nonjump()) df0 += t.zeta * std::norm(t.z) * (t.generator + t.generator.adjoint());
  for (const auto& t : gens.jump()) df0 += static_cast<double>(t.zeta) * t.op.adjoint() * t.op;
  EXPECT_LT(max_abs(gens.trace_generator() - df0), 1e-14);
}

TEST(FieldRhs, Examples) {
  const auto tors = torsion_field(1.0);
  // g z (-y, x, 0) at (1, 0, 0.5)
  EXPECT_LT((field_rhs({1, 0, 0.5}, tors) - Vec3(0.0, 0.5, 0.0)).norm(), 1e-15);
  EXPECT_LT((field_rhs({0.2, 0.4, 0.5}, tors) - Vec3(-0.2, 0.1, 0.0)).norm(), 1e-15);
  const auto dt = dissipative_torsion_field({0.9, 1.0, 1.0});
  EXPECT_LT((field_rhs({0.1, 0.1, 0.1}, dt) - Vec3(-0.02, -0.09, -0.01)).norm(), 1e-15);
  const double delta = (1.21 - 1.0) / 1.21;
  const Vec3 fp(std::sqrt(delta), 1.1 * delta, 1.1 * std::sqrt(delta));
  EXPECT_LT(field_rhs(BlochVector::from(fp), dissipative_torsion_field({1.1, 1.0, 1.0})).norm(), 1e-12);
  EXPECT_EQ(field_rhs({0, 0, 0}, dt).norm(), 0.0);
  EXPECT_EQ(field_rhs({0.3, -0.2, 0.5}, torsion_field(0.0)).norm(), 0.0);
}

TEST(FieldRhs, DissipativeTorsionMatchesComponents) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> par(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double m = par(rng), gamma = par(rng), g = par(rng);
    const auto f = dissipative_torsion_field({m, gamma, g});
    const Vec3 r = oracle::random_in_ball(rng);
    EXPECT_LT((f(r) - oracle::dissipative_torsion(r, m, gamma, g)).norm(), 1e-14);
    EXPECT_LT((f.generator(r) * r - f(r)).norm(), 1e-14);
    const Mat3 jac = oracle::fd_jacobian([&](const Vec3& v) { return oracle::dissipative_torsion(v, m, gamma, g); }, r);
    EXPECT_LT((f.analytic_jacobian(r) - jac).cwiseAbs().maxCoeff(), 1e-8);
    // symmetric part of G is m lambda_4 - gamma I for every r
    const Mat3 gp = (f.generator(r) + f.generator(r).transpose()) / 2.0;
    EXPECT_LT((gp - (m * gell_mann_4() - gamma * Mat3::Identity())).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(FieldRhs, LineOfFixedPoints) {
  const auto f = dissipative_torsion_field({0.7, 0.7, 0.0});
  for (double x : {-1.0, -0.3, 0.2, 0.7}) EXPECT_LT(f(Vec3(x, 0, x)).norm(), 1e-15);
}

TEST(JumpCoords, PaperMatrices) {
  const auto g110 = jump_coords_to_generator({0.0, 1.0, 1.0, 0.0}, 1);
  Mat3 e110;
  e110 << 0, 2, 0, 2, 0, 0, 0, 0, -2;
  EXPECT_LT((g110.g - e110).cwiseAbs().maxCoeff(), 1e-15);
  const auto g001 = jump_coords_to_generator({0.0, 0.0, 0.0, 1.0}, 1);
  EXPECT_LT((g001.g - Vec3(-1, -1, 1).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-15);
  Mat3 lambda1;
  lambda1 << 0, 1, 0, 1, 0, 0, 0, 0, 0;
  EXPECT_LT((g110.g + g001.g - (2 * lambda1 - Mat3::Identity())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(JumpCoords, MatchesFiniteDifferenceOfRhs) {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix b = oracle::random_matrix(rng, 2);
    const int zeta = i % 2 ? 1 : -1;
    const auto gen = jump_coords_to_generator(pauli_coordinates(b), zeta);
    // Bloch image of zeta B X B^dagger is affine in r: G r + C.
    auto lin = [&](const Vec3& r) {
      return oracle::bloch_from_density(static_cast<double>(zeta) * b * oracle::density_from_bloch(r) * b.adjoint());
    };
    const Vec3 r = oracle::random_in_ball(rng);
    EXPECT_LT((gen.g * r + gen.c - lin(r)).norm(), 1e-12);
    EXPECT_LT((gen.g - oracle::fd_jacobian(lin, r)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(NinoBlochField, MatchesOperatorForm) {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 300; ++i) {
    const auto gens = random_set(rng);
    const auto field = nino_bloch_field(gens);
    const Vec3 r = oracle::random_in_ball(rng);
    const Vec3 expected = bloch_rate(nino_rhs(oracle::density_from_bloch(r), gens));
    EXPECT_LT((field(r) - expected).norm(), 1e-10 * std::max(1.0, expected.norm()));
  }
}

TEST(NinoBlochField, UnitalCptpContracts) {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 100; ++i) {
    const auto gens = random_unital_cptp_set(rng);
    EXPECT_LT(max_abs(gens.trace_generator()), 1e-12);
    const auto field = nino_bloch_field(gens);
    const Mat3 g = field.generator(Vec3::Zero());
    const Mat3 gp = (g + g.transpose()) / 2.0;
    EXPECT_LT(Eigen::SelfAdjointEigenSolver<Mat3>(gp).eigenvalues().maxCoeff(), 1e-12);
    EXPECT_LT(field.inhomogeneous.norm(), 1e-12);
  }
}

TEST(Integrate, PrecessionReturns) {
  const NinoGeneratorSet gens({{1.0, -I * oracle::pauli(3) / 2.0, 1}});
  IntegratorOptions opts;
  opts.stop_on_convergence = false;
  const auto traj = integrate(nino_bloch_field(gens), {1, 0, 0}, 2 * std::numbers::pi, opts);
  EXPECT_EQ(traj.status, TrajectoryStatus::MaxTime);
  EXPECT_NEAR(traj.final_time(), 2 * std::numbers::pi, 1e-15);
  EXPECT_LT((traj.final_state().vec() - Vec3(1, 0, 0)).norm(), 1e-8);
  // same orbit in operator form
  const auto op = integrate(gens, linalg::from_bloch({1, 0, 0}), 2 * std::numbers::pi, opts);
  EXPECT_LT((op.final_state().vec() - Vec3(1, 0, 0)).norm(), 1e-8);
  EXPECT_LT(op.trace_error_max, 1e-12);
}

TEST(Integrate, Rk45MatchesReference) {
  const auto f = dissipative_torsion_field({1.1, 1.0, 1.0});
  IntegratorOptions opts;
  opts.method = Method::RK45;
  opts.stop_on_convergence = false;
  const auto traj = integrate(f, {0.3, -0.2, 0.1}, 5.0, opts);
  const Vec3 ref = oracle::rk4_flow([](const Vec3& r) { return oracle::dissipative_torsion(r, 1.1, 1.0, 1.0); },
                                    Vec3(0.3, -0.2, 0.1), 5.0, 20000);
  EXPECT_NEAR(traj.final_time(), 5.0, 1e-12);
  EXPECT_LT((traj.final_state().vec() - ref).norm(), 1e-8);
  EXPECT_LT(traj.times.size(), 2000u);
}

TEST(Integrate, ContractionEnvelope) {
  std::mt19937_64 rng(37);
  const double m = 0.9, gamma = 1.0;
  const auto f = dissipative_torsion_field({m, gamma, 1.0});
  for (int i = 0; i < 5; ++i) {
    const Vec3 r0 = oracle::random_in_ball(rng);
    double worst = -1.0;
    auto check = [&](double t, const Vec3& r) {
      worst = std::max(worst, r.norm() - (std::exp((m - gamma) * t) * r0.norm() + 1e-9));
      return false;
    };
    IntegratorOptions opts;
    opts.record_stride = 1000;
    const auto traj = integrate(f, BlochVector::from(r0), 200.0, opts, check);
    EXPECT_LE(worst, 0.0);
    EXPECT_LT(traj.final_state().norm(), 1e-6);
  }
}

TEST(Integrate, ConvergesToPlusFixedPoint) {
  const auto f = dissipative_torsion_field({1.1, 1.0, 1.0});
  const auto traj = integrate(f, {0.1, 0, 0.1}, 200.0);
  EXPECT_EQ(traj.status, TrajectoryStatus::Converged);
  const Vec3 fp = oracle::newton([](const Vec3& r) { return oracle::dissipative_torsion(r, 1.1, 1.0, 1.0); },
                                 Vec3(0.4, 0.2, 0.4));
  EXPECT_LT((traj.final_state().vec() - fp).norm(), 1e-6);
}

TEST(Integrate, UnphysicalTruncatesAtLastInBallSample) {
  const auto f = linear_field(Mat3::Identity());  // pure radial growth
  IntegratorOptions opts;
  opts.dt = 1e-2;
  const auto traj = integrate(f, {0.5, 0, 0}, 10.0, opts);
  EXPECT_EQ(traj.status, TrajectoryStatus::Unphysical);
  EXPECT_LE(traj.final_state().norm(), 1.0 + opts.ball_tol);
  EXPECT_NEAR(traj.final_time(), std::log(2.0), 0.011);
  for (const auto& s : traj.states) EXPECT_LE(s.norm(), 1.0 + opts.ball_tol);
}

TEST(Integrate, ConvergenceWindow) {
  const auto f = linear_field(-Mat3::Identity());
  IntegratorOptions opts;
  opts.convergence_window = 10;
  const auto traj = integrate(f, {0, 0, 0}, 1.0, opts);
  EXPECT_EQ(traj.status, TrajectoryStatus::Converged);
  EXPECT_NEAR(traj.final_time(), 9 * opts.dt, 1e-15);
}

TEST(Integrate, ObserverHalts) {
  const auto f = linear_field(-Mat3::Identity());
  const auto traj = integrate(f, {0.5, 0, 0}, 10.0, {}, [](double t, const Vec3&) { return t >= 0.5; });
  EXPECT_EQ(traj.status, TrajectoryStatus::Running);
  EXPECT_NEAR(traj.final_time(), 0.5, 1e-12);
  EXPECT_NEAR(traj.final_state().x, 0.5 * std::exp(-0.5), 1e-12);
}

TEST(Integrate, NonFiniteReportsLastGoodTime) {
  VectorField f = linear_field(Mat3::Zero(), Vec3(1, 0, 0));
  f.direct = [](const Vec3& r) -> Vec3 {
    return r.x() > 0.25 ? Vec3::Constant(std::nan("")) : Vec3(1, 0, 0);
  };
  IntegratorOptions opts;
  opts.dt = 0.1;
  try {
    integrate(f, {0, 0, 0}, 1.0, opts);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("last good time t = 0.2"), std::string::npos) << e.what();
  }
}

TEST(Integrate, OptionValidation) {
  const auto f = linear_field(-Mat3::Identity());
  IntegratorOptions bad;
  bad.dt = 0;
  EXPECT_THROW(integrate(f, {0, 0, 0}, 1.0, bad), ValidationError);
  EXPECT_THROW(integrate(f, {0, 0, 0}, -1.0), ValidationError);
  EXPECT_THROW(integrate(f, {1.0, 1.0, 0}, 1.0), ValidationError);
}

TEST(Integrate, RecordStrideKeepsEnds) {
  const auto f = linear_field(-Mat3::Identity());
  IntegratorOptions opts;
  opts.record_stride = 300;
  opts.stop_on_convergence = false;
  const auto traj = integrate(f, {0.5, 0, 0}, 1.0, opts);
  ASSERT_EQ(traj.times.size(), 5u);  // 0, 0.3, 0.6, 0.9, 1.0
  EXPECT_EQ(traj.times.front(), 0.0);
  EXPECT_EQ(traj.times.back(), 1.0);
}

TEST(Integrate, UnitaryOnlyConservesNorm) {
  std::mt19937_64 rng(38);
  for (int i = 0; i < 10; ++i) {
    const NinoGeneratorSet gens({{1.0, -I * oracle::random_hermitian(rng, 2), 1}});
    const Vec3 r0 = oracle::random_in_ball(rng);
    IntegratorOptions opts;
    opts.stop_on_convergence = false;
    opts.record_stride = 100;
    const auto traj = integrate(gens, linalg::from_bloch(BlochVector::from(r0)), 10.0, opts);
    for (const auto& s : traj.states) EXPECT_NEAR(s.norm(), r0.norm(), 1e-9);
  }
}

TEST(Integrate, TraceDriftAndRenormalize) {
  std::mt19937_64 rng(39);
  const auto gens = random_set(rng);
  IntegratorOptions opts;
  opts.stop_on_convergence = false;
  opts.record_stride = 100;
  // random sets can leave the ball; only compare while both stay physical
  const auto a = integrate(gens, linalg::from_bloch({0, 0, 0}), 0.5, opts);
  EXPECT_LT(a.trace_error_max, 1e-10);
  opts.renormalize = true;
  const auto b = integrate(gens, linalg::from_bloch({0, 0, 0}), 0.5, opts);
  EXPECT_LT(b.trace_error_max, 1e-14);
  if (a.status == b.status && a.times.size() == b.times.size())
    EXPECT_LT((a.final_state().vec() - b.final_state().vec()).norm(), 1e-9);
}
