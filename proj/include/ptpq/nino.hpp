#pragma once

// Markovian master equation for nonlinear-in-normalization-only (NINO)
// channels built from nonjump generators z e^{tL} and jump operators B sqrt(t):
//
//   dX/dt = sum zeta|z|^2 ([L-, X] + {L+, X}) + sum zeta B X B^dagger - X tr(X dF0/dt)
//   dF0/dt = sum zeta|z|^2 (L + L^dagger) + sum zeta B^dagger B

#include <array>
#include <vector>

#include "ptpq/matrix_core.hpp"
#include "ptpq/vector_field.hpp"

namespace ptpq::dynamics {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::DensityMatrix;
using linalg::Index;

struct NonjumpTerm {
  Complex z{1.0, 0.0};
  ComplexMatrix generator;  // L
  int zeta = +1;
};

struct JumpTerm {
  int zeta = +1;
  ComplexMatrix op;  // B
};

class NinoGeneratorSet {
 public:
  // Requires at least one nonjump term, signs in {+1, -1}, equal square
  // dimensions, and sum over nonjump zeta|z|^2 = 1 to 1e-10.
  NinoGeneratorSet(std::vector<NonjumpTerm> nonjump, std::vector<JumpTerm> jump = {});

  Index dim() const { return dim_; }
  const std::vector<NonjumpTerm>& nonjump() const { return nonjump_; }
  const std::vector<JumpTerm>& jump() const { return jump_; }

  // Set when a nonjump term carries zeta = -1 (accepted, but outside the analyzed models).
  bool has_negative_nonjump_sign() const { return negative_nonjump_; }

  const ComplexMatrix& trace_generator() const { return df0_; }  // dF0/dt

 private:
  std::vector<NonjumpTerm> nonjump_;
  std::vector<JumpTerm> jump_;
  Index dim_ = 0;
  bool negative_nonjump_ = false;
  ComplexMatrix df0_;
};

// dX/dt on a raw operator (no state validation).
ComplexMatrix nino_rhs(const ComplexMatrix& x, const NinoGeneratorSet& gens);
ComplexMatrix nino_rhs(const DensityMatrix& x, const NinoGeneratorSet& gens);

// Affine Bloch-space contribution dr/dt = G r + C.
struct AffineGenerator {
  Mat3 g = Mat3::Zero();
  Vec3 c = Vec3::Zero();
};

// Pauli coordinates xi_mu = tr(sigma^mu M)/2, so M = xi_0 I + xi_a sigma^a.
std::array<Complex, 4> pauli_coordinates(const ComplexMatrix& m);

// Contribution of zeta B X B^dagger with B = xi_0 I + xi_a sigma^a:
//   G^ab = zeta(|xi_0|^2 - |xi|^2) delta^ab + 2 zeta Im(xi_0^* xi_c) eps^abc + 2 zeta Re(xi_a^* xi_b)
//   C^a  = zeta tr(sigma^a B B^dagger)/2
AffineGenerator jump_coords_to_generator(const std::array<Complex, 4>& xi, int zeta);

// Linear contribution of weight * (L X + X L^dagger) on a qubit.
AffineGenerator nonjump_generator(const ComplexMatrix& l, double weight);

// Bloch-space form of the NINO equation at N = 2:
//   G(r) = G_lin - s(r) I,  s(r) = (tr dF0 + f.r)/2,  f^a = tr(sigma^a dF0).
VectorField nino_bloch_field(const NinoGeneratorSet& gens);

}  // namespace ptpq::dynamics
