#pragma once

// Small dense complex linear algebra for qubit (and few-level) states:
// Hermitian splitting, PSD checks, Schatten norms, matrix exponentials,
// and the density-matrix <-> Bloch-vector correspondence.

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace ptpq::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kBallTol = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Largest ||M||_1 accepted by matrix_exponential.
inline constexpr double kMaxExponentNorm = 50.0;

ComplexMatrix identity(Index n);

// sigma(0) = I2, sigma(1..3) = Pauli x, y, z.
const ComplexMatrix& sigma(int a);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// max_ij |M - M^dagger|_ij
double hermiticity_error(const ComplexMatrix& m);

struct HermitianParts {
  ComplexMatrix plus;   // (L + L^dagger)/2
  ComplexMatrix minus;  // (L - L^dagger)/2
};

HermitianParts hermitian_split(const ComplexMatrix& l);

// Ascending eigenvalues of a Hermitian matrix (only the lower triangle is read).
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

// True iff every eigenvalue is >= -tol. Throws ValidationError("not Hermitian")
// when ||M - M^dagger||_max > tol.
bool is_psd(const ComplexMatrix& m, double tol = kPsdTol);

// exp(M) by scaling and squaring with a Pade approximant. Throws for ||M||_1 > 50.
ComplexMatrix matrix_exponential(const ComplexMatrix& m);

// ||X||_p = (sum_i s_i^p)^(1/p) over singular values; p = kInfinity gives the
// largest singular value. Throws for p < 1.
double schatten_norm(const ComplexMatrix& x, double p);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static BlochVector from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
  Vec3 vec() const { return {x, y, z}; }
  double norm() const { return vec().norm(); }
  bool physical(double tol = kBallTol) const { return vec().squaredNorm() <= 1.0 + tol; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

// A validated state: Hermitian, PSD and unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

// r^a = tr(X sigma^a). Requires a 2x2 state.
BlochVector to_bloch(const DensityMatrix& state);
// X = (I + r.sigma)/2. Throws "outside Bloch ball" for |r| > 1 + 1e-9.
DensityMatrix from_bloch(const BlochVector& r);

// Unvalidated versions used on intermediate integrator stages.
Vec3 bloch_of(const ComplexMatrix& x);
ComplexMatrix operator_of(const Vec3& r);

}  // namespace ptpq::linalg
