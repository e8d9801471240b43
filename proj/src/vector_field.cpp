#include "ptpq/vector_field.hpp"

namespace ptpq::dynamics {

Vec3 field_rhs(const BlochVector& r, const VectorField& field) { return field(r.vec()); }

Mat3 rotation_generator_z() {
  Mat3 j;
  j << 0, -1, 0,
       1, 0, 0,
       0, 0, 0;
  return j;
}

Mat3 gell_mann_4() {
  Mat3 l;
  l << 0, 0, 1,
       0, 0, 0,
       1, 0, 0;
  return l;
}

VectorField linear_field(const Mat3& g, const Vec3& c) {
  VectorField f;
  f.generator = [g](const Vec3&) { return g; };
  f.inhomogeneous = c;
  f.analytic_jacobian = [g](const Vec3&) { return g; };
  return f;
}

VectorField torsion_field(double g) {
  VectorField f;
  const Mat3 jz = rotation_generator_z();
  f.generator = [g, jz](const Vec3& r) -> Mat3 { return g * r.z() * jz; };
  f.analytic_jacobian = [g](const Vec3& r) {
    Mat3 j;
    j << 0, -g * r.z(), -g * r.y(),
         g * r.z(), 0, g * r.x(),
         0, 0, 0;
    return j;
  };
  return f;
}

VectorField dissipative_torsion_field(const DissipativeTorsionParams& p) {
  VectorField f;
  const Mat3 linear = p.m_pump * gell_mann_4() - p.gamma * Mat3::Identity();
  const Mat3 jz = rotation_generator_z();
  const double g = p.g_torsion;
  f.generator = [linear, jz, g](const Vec3& r) -> Mat3 { return linear + g * r.z() * jz; };
  f.direct = [p](const Vec3& r) {
    const double m = p.m_pump, gm = p.gamma, g = p.g_torsion;
    return Vec3{m * r.z() - gm * r.x() - g * r.y() * r.z(), -gm * r.y() + g * r.x() * r.z(), m * r.x() - gm * r.z()};
  };
  f.analytic_jacobian = [p](const Vec3& r) {
    const double m = p.m_pump, gm = p.gamma, g = p.g_torsion;
    Mat3 j;
    j << -gm, -g * r.z(), m - g * r.y(),
         g * r.z(), -gm, g * r.x(),
         m, 0, -gm;
    return j;
  };
  return f;
}

VectorField reversed(const VectorField& field) {
  VectorField f;
  f.generator = [inner = field.generator](const Vec3& r) -> Mat3 { return -inner(r); };
  f.inhomogeneous = -field.inhomogeneous;
  if (field.direct) {
    f.direct = [inner = field.direct](const Vec3& r) -> Vec3 { return -inner(r); };
  }
  if (field.analytic_jacobian) {
    f.analytic_jacobian = [inner = field.analytic_jacobian](const Vec3& r) -> Mat3 { return -inner(r); };
  }
  return f;
}

}  // namespace ptpq::dynamics
