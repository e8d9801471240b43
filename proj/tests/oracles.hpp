#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library beyond its plain types.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V3 = Eigen::Vector3d;
using M3 = Eigen::Matrix3d;

inline M pauli(int a) {
  M s(2, 2);
  switch (a) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, C(0, -1), C(0, 1), 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

inline M random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  M m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = C(nd(rng), nd(rng));
  return m;
}

inline M random_hermitian(std::mt19937_64& rng, int n, double scale = 1.0) {
  M a = random_matrix(rng, n, scale);
  return (a + a.adjoint()) / 2.0;
}

// A A^dagger normalized to unit trace.
inline M random_density(std::mt19937_64& rng, int n) {
  M a = random_matrix(rng, n);
  M rho = a * a.adjoint();
  return rho / rho.trace();
}

inline V3 random_in_ball(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    V3 v(u(rng), u(rng), u(rng));
    if (v.squaredNorm() <= 1.0) return radius * v;
  }
}

inline M density_from_bloch(const V3& r) {
  M x(2, 2);
  x << C(1 + r.z(), 0), C(r.x(), -r.y()), C(r.x(), r.y()), C(1 - r.z(), 0);
  return x / 2.0;
}

inline V3 bloch_from_density(const M& x) {
  return {2.0 * x(0, 1).real(), 2.0 * x(1, 0).imag(), (x(0, 0) - x(1, 1)).real()};
}

// exp(H) for Hermitian H by eigendecomposition.
inline M expm_hermitian(const M& h, C factor) {
  Eigen::SelfAdjointEigenSolver<M> es(h);
  M d = M::Zero(h.rows(), h.cols());
  for (int i = 0; i < h.rows(); ++i) d(i, i) = std::exp(factor * es.eigenvalues()(i));
  return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

// Truncated Taylor series with repeated halving; reference for general matrices.
inline M expm_taylor(const M& a) {
  int s = 0;
  double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  while (norm > 0.01) {
    norm /= 2;
    ++s;
  }
  const M b = a / std::pow(2.0, s);
  M term = M::Identity(a.rows(), a.cols()), sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// The dissipative torsion field written out by components.
inline V3 dissipative_torsion(const V3& r, double m, double gamma, double g) {
  const double x = r.x(), y = r.y(), z = r.z();
  return {m * z - gamma * x - g * y * z, -gamma * y + g * x * z, m * x - gamma * z};
}

inline M3 fd_jacobian(const std::function<V3(const V3&)>& f, const V3& r, double h = 1e-6) {
  M3 j;
  for (int b = 0; b < 3; ++b) {
    V3 e = V3::Zero();
    e(b) = h;
    j.col(b) = (f(r + e) - f(r - e)) / (2 * h);
  }
  return j;
}

inline V3 newton(const std::function<V3(const V3&)>& f, V3 r, int iters = 50) {
  for (int i = 0; i < iters; ++i) {
    const V3 step = fd_jacobian(f, r, 1e-7).fullPivLu().solve(f(r));
    r -= step;
    if (step.norm() < 1e-15) break;
  }
  return r;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi), fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Standard normal CDF.
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Classic 4th order RK on a Bloch field, fixed step; used as a reference flow.
inline V3 rk4_flow(const std::function<V3(const V3&)>& f, V3 r, double t, int steps) {
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const V3 k1 = f(r), k2 = f(r + h / 2 * k1), k3 = f(r + h / 2 * k2), k4 = f(r + h * k3);
    r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return r;
}

}  // namespace oracle
