#pragma once

#include <functional>

#include "ptpq/matrix_core.hpp"

namespace ptpq::dynamics {

using linalg::BlochVector;
using linalg::Mat3;
using linalg::Vec3;

// Qubit flow dr/dt = G(r) r + C.
struct VectorField {
  std::function<Mat3(const Vec3&)> generator;
  Vec3 inhomogeneous = Vec3::Zero();
  // d(dr/dt)/dr; empty when the field only supports numerical differentiation.
  std::function<Mat3(const Vec3&)> analytic_jacobian;
  // Optional closed-form G(r) r + C, used in place of the generator product when set.
  std::function<Vec3(const Vec3&)> direct;

  Vec3 operator()(const Vec3& r) const { return direct ? direct(r) : Vec3(generator(r) * r + inhomogeneous); }
  bool has_analytic_jacobian() const { return static_cast<bool>(analytic_jacobian); }
};

Vec3 field_rhs(const BlochVector& r, const VectorField& field);

// The rotation generator about z: J_z r = (-y, x, 0).
Mat3 rotation_generator_z();
// Gell-Mann lambda_4 restricted to 3x3: couples x and z.
Mat3 gell_mann_4();

// Constant affine field G r + C.
VectorField linear_field(const Mat3& g, const Vec3& c = Vec3::Zero());

// G(r) = g z J_z.
VectorField torsion_field(double g);

struct DissipativeTorsionParams {
  double m_pump = 0.0;
  double gamma = 0.0;
  double g_torsion = 0.0;
};

// G(r) = m lambda_4 - gamma I + g z J_z, i.e.
//   dx/dt = m z - gamma x - g y z,  dy/dt = -gamma y + g x z,  dz/dt = m x - gamma z.
VectorField dissipative_torsion_field(const DissipativeTorsionParams& p);

// Time-reversed copy of a field (used for backward differencing).
VectorField reversed(const VectorField& field);

}  // namespace ptpq::dynamics
