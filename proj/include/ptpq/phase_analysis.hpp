#pragma once

// Flow geometry (divergence, vorticity, pair expansivity, midpoint K matrix),
// fixed points and their stability for the dissipative torsion model, basin
// labels, and phase diagrams over two of (m, gamma, g).

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ptpq/integrator.hpp"
#include "ptpq/vector_field.hpp"

namespace ptpq::phase {

using dynamics::DissipativeTorsionParams;
using dynamics::VectorField;
using linalg::BlochVector;
using linalg::Complex;
using linalg::Mat3;
using linalg::Vec3;

inline constexpr double kJacobianStep = 1e-6;
inline constexpr double kStabilityMargin = 1e-10;

// Analytic Jacobian when the field has one, central differences otherwise.
Mat3 jacobian(const VectorField& field, const Vec3& r);
Mat3 numerical_jacobian(const VectorField& field, const Vec3& r, double h = kJacobianStep);

double divergence(const VectorField& field, const BlochVector& r);
Vec3 vorticity(const VectorField& field, const BlochVector& r);

// d/dt ||X_a - X_b||_p = 2^{1/p-1} (dr/|dr|) . (v_a - v_b). p = kInfinity allowed.
// Throws ValidationError for coincident points or p < 1.
double pair_separation_rate(const BlochVector& r_a, const BlochVector& r_b, const VectorField& field, double p);

// K^{ab}(R) = R^c d_b G^{ac}(R), obtained as Jacobian minus G(R).
Mat3 midpoint_K(const VectorField& field, const BlochVector& midpoint);

enum class FixedPointKind { Origin, Plus, Minus, LineContinuum };
std::string_view to_string(FixedPointKind k);

struct FixedPointRecord {
  BlochVector location;
  FixedPointKind kind = FixedPointKind::Origin;
  std::array<Complex, 3> eigenvalues{};  // sorted by real part, then imaginary part
  bool stable = false;
  bool in_ball = true;
  Vec3 line_direction = Vec3::Zero();  // LineContinuum only: points are location + s * direction
};

struct FixedPointSet {
  std::vector<FixedPointRecord> points;
  bool gamma_zero = false;  // gamma = 0: only the origin is reported

  const FixedPointRecord* find(FixedPointKind k) const;
};

FixedPointSet analytic_fixed_points(const DissipativeTorsionParams& p);

// sqrt((gamma^2 + m^2) delta + m^2 delta^2), delta = (m^2 - gamma^2)/m^2.
// Throws ValidationError("no finite pair exists") when m^2 <= gamma^2.
double g_min(double m, double gamma);

// Eigenvalues of the Jacobian at r_star. Throws when |field(r_star)| > 1e-8.
FixedPointRecord jacobian_stability(const VectorField& field, const BlochVector& r_star);

struct XiCoords {
  double xi_plus = 0.0;   // (z + x)/2
  double xi_minus = 0.0;  // (z - x)/2
  double y = 0.0;
};

XiCoords xi_transform(const BlochVector& r);
BlochVector xi_inverse(const XiCoords& xi);

enum class BasinLabel { Plus, Minus, Origin, Unphysical, Undecided };
std::string_view to_string(BasinLabel b);

struct BasinOptions {
  double t_max = 200.0;
  double capture_radius = 1e-4;
  dynamics::IntegratorOptions integrator{};
};

struct BasinResult {
  BasinLabel label = BasinLabel::Undecided;
  dynamics::Trajectory trajectory;
};

// Integrates from r0 and labels by the fixed point within capture_radius of the end state.
BasinResult basin_trajectory(const BlochVector& r0, const DissipativeTorsionParams& p, const BasinOptions& opts = {});
BasinLabel basin_classify(const BlochVector& r0, const DissipativeTorsionParams& p, const BasinOptions& opts = {});

enum class PhaseLabel { SingleStableOrigin, Bistable, LineDegenerate, NoFiniteAttractorInBall, Unclassified };
std::string_view to_string(PhaseLabel l);

PhaseLabel classify_phase(const DissipativeTorsionParams& p);

struct Grid1D {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;
  std::vector<double> values() const;
};

enum class ScanAxes { MGamma, MG };  // second axis gamma at fixed g, or g at fixed gamma

struct PhaseScanSpec {
  ScanAxes axes = ScanAxes::MGamma;
  Grid1D m;
  Grid1D second;
  double fixed = 1.0;
};

struct PhaseDiagram {
  ScanAxes axes = ScanAxes::MGamma;
  std::vector<double> param1;  // m
  std::vector<double> param2;  // gamma or g
  std::vector<PhaseLabel> cells;  // row-major, param1 outer

  PhaseLabel at(std::size_t i, std::size_t j) const { return cells[i * param2.size() + j]; }
};

PhaseDiagram phase_scan(const PhaseScanSpec& spec);

// "param1,param2,label" with one row per cell.
std::string phase_csv(const PhaseDiagram& d);

}  // namespace ptpq::phase
