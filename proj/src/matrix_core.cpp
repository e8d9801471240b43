#include "ptpq/matrix_core.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ptpq/errors.hpp"

namespace ptpq::linalg {

namespace {

std::array<ComplexMatrix, 4> make_paulis() {
  const Complex i{0.0, 1.0};
  std::array<ComplexMatrix, 4> s;
  for (auto& m : s) m = ComplexMatrix::Zero(2, 2);
  s[0] << 1.0, 0.0, 0.0, 1.0;
  s[1] << 0.0, 1.0, 1.0, 0.0;
  s[2] << 0.0, -i, i, 0.0;
  s[3] << 1.0, 0.0, 0.0, -1.0;
  return s;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
}

}  // namespace

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

const ComplexMatrix& sigma(int a) {
  static const std::array<ComplexMatrix, 4> paulis = make_paulis();
  if (a < 0 || a > 3) throw ValidationError("sigma: index must be in 0..3");
  return paulis[static_cast<std::size_t>(a)];
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianParts hermitian_split(const ComplexMatrix& l) {
  require_square(l, "hermitian_split");
  const ComplexMatrix adj = l.adjoint();
  return {(l + adj) / 2.0, (l - adj) / 2.0};
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigenvalues: solver did not converge");
  return solver.eigenvalues();
}

bool is_psd(const ComplexMatrix& m, double tol) {
  require_square(m, "is_psd");
  if (hermiticity_error(m) > tol) throw ValidationError("is_psd: not Hermitian");
  return hermitian_eigenvalues(m).minCoeff() >= -tol;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& m) {
  require_square(m, "matrix_exponential");
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1) || norm1 > kMaxExponentNorm) {
    std::ostringstream os;
    os << "matrix_exponential: ||M||_1 = " << norm1 << " exceeds supported range " << kMaxExponentNorm;
    throw ValidationError(os.str());
  }
  return m.exp();
}

double schatten_norm(const ComplexMatrix& x, double p) {
  require_square(x, "schatten_norm");
  if (!(p >= 1.0)) throw ValidationError("schatten_norm: p must be >= 1");
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  const Eigen::VectorXd& s = svd.singularValues();
  if (std::isinf(p)) return s.size() ? s.maxCoeff() : 0.0;
  if (p == 1.0) return s.sum();
  return std::pow(s.array().pow(p).sum(), 1.0 / p);
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  if (!m_.allFinite()) throw ValidationError("DensityMatrix: non-finite entries");
  if (hermiticity_error(m_) > kHermitianTol) throw ValidationError("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace() - Complex{1.0, 0.0}) > kTraceTol) throw ValidationError("DensityMatrix: trace is not 1");
  if (hermitian_eigenvalues(m_).minCoeff() < -kPsdTol) throw ValidationError("DensityMatrix: not positive semidefinite");
}

Vec3 bloch_of(const ComplexMatrix& x) {
  if (x.rows() != 2 || x.cols() != 2) throw ValidationError("Bloch coordinates require a 2x2 operator");
  // tr(X sigma^a) written out for the 2x2 case.
  return {(x(0, 1) + x(1, 0)).real(), (Complex{0.0, 1.0} * (x(0, 1) - x(1, 0))).real(), (x(0, 0) - x(1, 1)).real()};
}

ComplexMatrix operator_of(const Vec3& r) {
  return (sigma(0) + r.x() * sigma(1) + r.y() * sigma(2) + r.z() * sigma(3)) / 2.0;
}

BlochVector to_bloch(const DensityMatrix& state) { return BlochVector::from(bloch_of(state.matrix())); }

DensityMatrix from_bloch(const BlochVector& r) {
  const double n = r.norm();
  if (n > 1.0 + kBallTol) throw ValidationError("from_bloch: outside Bloch ball");
  // within tolerance of the sphere: snap back so the PSD check sees a pure state
  return DensityMatrix(operator_of(n > 1.0 ? Vec3(r.vec() / n) : r.vec()));
}

}  // namespace ptpq::linalg
