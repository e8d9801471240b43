#include "ptpq/nino.hpp"

#include <cmath>
#include <sstream>

#include "ptpq/errors.hpp"

namespace ptpq::dynamics {

using linalg::sigma;

NinoGeneratorSet::NinoGeneratorSet(std::vector<NonjumpTerm> nonjump, std::vector<JumpTerm> jump)
    : nonjump_(std::move(nonjump)), jump_(std::move(jump)) {
  if (nonjump_.empty()) throw ValidationError("NinoGeneratorSet: at least one nonjump generator is required");
  dim_ = nonjump_.front().generator.rows();
  if (dim_ < 1) throw ValidationError("NinoGeneratorSet: empty generator");

  auto check = [this](const ComplexMatrix& m, int zeta, const char* what) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw ValidationError(std::string("NinoGeneratorSet: ") + what + " has inconsistent dimensions");
    }
    if (!m.allFinite()) throw ValidationError(std::string("NinoGeneratorSet: ") + what + " has non-finite entries");
    if (zeta != 1 && zeta != -1) throw ValidationError(std::string("NinoGeneratorSet: ") + what + " sign must be +1 or -1");
  };

  double norm = 0.0;
  df0_ = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& t : nonjump_) {
    check(t.generator, t.zeta, "nonjump generator");
    const double w = t.zeta * std::norm(t.z);
    norm += w;
    df0_ += w * (t.generator + t.generator.adjoint());
    if (t.zeta < 0) negative_nonjump_ = true;
  }
  for (const auto& t : jump_) {
    check(t.op, t.zeta, "jump operator");
    df0_ += static_cast<double>(t.zeta) * t.op.adjoint() * t.op;
  }
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "NinoGeneratorSet: normalization sum zeta|z|^2 = " << norm << " != 1";
    throw ValidationError(os.str());
  }
}

ComplexMatrix nino_rhs(const ComplexMatrix& x, const NinoGeneratorSet& gens) {
  if (x.rows() != gens.dim() || x.cols() != gens.dim()) throw ValidationError("nino_rhs: state dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& t : gens.nonjump()) {
    const double w = t.zeta * std::norm(t.z);
    out += w * (t.generator * x + x * t.generator.adjoint());
  }
  for (const auto& t : gens.jump()) out += static_cast<double>(t.zeta) * t.op * x * t.op.adjoint();
  out -= (x * gens.trace_generator()).trace() * x;
  return out;
}

ComplexMatrix nino_rhs(const DensityMatrix& x, const NinoGeneratorSet& gens) { return nino_rhs(x.matrix(), gens); }

std::array<Complex, 4> pauli_coordinates(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw ValidationError("pauli_coordinates: 2x2 operator required");
  std::array<Complex, 4> xi{};
  for (int mu = 0; mu < 4; ++mu) xi[static_cast<std::size_t>(mu)] = (sigma(mu) * m).trace() / 2.0;
  return xi;
}

AffineGenerator jump_coords_to_generator(const std::array<Complex, 4>& xi, int zeta) {
  if (zeta != 1 && zeta != -1) throw ValidationError("jump_coords_to_generator: zeta must be +1 or -1");
  const double s = zeta;
  AffineGenerator out;
  const double diag = std::norm(xi[0]) - std::norm(xi[1]) - std::norm(xi[2]) - std::norm(xi[3]);
  Vec3 im;  // Im(xi_0^* xi_c)
  for (int c = 0; c < 3; ++c) im[c] = (std::conj(xi[0]) * xi[static_cast<std::size_t>(c + 1)]).imag();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const auto ua = static_cast<std::size_t>(a + 1);
      const auto ub = static_cast<std::size_t>(b + 1);
      out.g(a, b) = s * (a == b ? diag : 0.0) + 2.0 * s * (std::conj(xi[ua]) * xi[ub]).real();
    }
  }
  // 2 zeta Im(xi_0^* xi_c) eps^{abc}
  out.g(0, 1) += 2.0 * s * im[2];
  out.g(1, 0) -= 2.0 * s * im[2];
  out.g(1, 2) += 2.0 * s * im[0];
  out.g(2, 1) -= 2.0 * s * im[0];
  out.g(2, 0) += 2.0 * s * im[1];
  out.g(0, 2) -= 2.0 * s * im[1];

  ComplexMatrix b = xi[0] * sigma(0);
  for (int a = 1; a < 4; ++a) b += xi[static_cast<std::size_t>(a)] * sigma(a);
  const ComplexMatrix bbd = b * b.adjoint();
  for (int a = 0; a < 3; ++a) out.c[a] = s * (sigma(a + 1) * bbd).trace().real() / 2.0;
  return out;
}

AffineGenerator nonjump_generator(const ComplexMatrix& l, double weight) {
  const auto parts = linalg::hermitian_split(l);
  const auto plus = pauli_coordinates(parts.plus);
  const auto minus = pauli_coordinates(parts.minus);
  // L- = i(eta_0 I + eta.sigma) with real eta.
  Vec3 eta;
  for (int c = 0; c < 3; ++c) eta[c] = minus[static_cast<std::size_t>(c + 1)].imag();

  AffineGenerator out;
  out.g = 2.0 * plus[0].real() * Mat3::Identity();
  out.g(0, 1) += 2.0 * eta[2];
  out.g(1, 0) -= 2.0 * eta[2];
  out.g(1, 2) += 2.0 * eta[0];
  out.g(2, 1) -= 2.0 * eta[0];
  out.g(2, 0) += 2.0 * eta[1];
  out.g(0, 2) -= 2.0 * eta[1];
  for (int a = 0; a < 3; ++a) out.c[a] = 2.0 * plus[static_cast<std::size_t>(a + 1)].real();
  out.g *= weight;
  out.c *= weight;
  return out;
}

VectorField nino_bloch_field(const NinoGeneratorSet& gens) {
  if (gens.dim() != 2) throw ValidationError("nino_bloch_field: qubit generators required");
  AffineGenerator lin;
  for (const auto& t : gens.nonjump()) {
    const auto contrib = nonjump_generator(t.generator, t.zeta * std::norm(t.z));
    lin.g += contrib.g;
    lin.c += contrib.c;
  }
  for (const auto& t : gens.jump()) {
    const auto contrib = jump_coords_to_generator(pauli_coordinates(t.op), t.zeta);
    lin.g += contrib.g;
    lin.c += contrib.c;
  }
  const ComplexMatrix& df0 = gens.trace_generator();
  const double tr_df0 = df0.trace().real();
  Vec3 f;
  for (int a = 0; a < 3; ++a) f[a] = (sigma(a + 1) * df0).trace().real();

  VectorField field;
  field.generator = [g = lin.g, tr_df0, f](const Vec3& r) -> Mat3 {
    return g - 0.5 * (tr_df0 + f.dot(r)) * Mat3::Identity();
  };
  field.inhomogeneous = lin.c;
  field.analytic_jacobian = [g = lin.g, tr_df0, f](const Vec3& r) -> Mat3 {
    return g - 0.5 * (tr_df0 + f.dot(r)) * Mat3::Identity() - 0.5 * r * f.transpose();
  };
  return field;
}

}  // namespace ptpq::dynamics
