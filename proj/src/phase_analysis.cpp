#include "ptpq/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ptpq/errors.hpp"
#include "ptpq/format.hpp"

namespace ptpq::phase {

Mat3 numerical_jacobian(const VectorField& field, const Vec3& r, double h) {
  Mat3 j;
  for (int b = 0; b < 3; ++b) {
    Vec3 e = Vec3::Zero();
    e(b) = h;
    j.col(b) = (field(r + e) - field(r - e)) / (2.0 * h);
  }
  return j;
}

Mat3 jacobian(const VectorField& field, const Vec3& r) {
  return field.has_analytic_jacobian() ? field.analytic_jacobian(r) : numerical_jacobian(field, r);
}

double divergence(const VectorField& field, const BlochVector& r) { return jacobian(field, r.vec()).trace(); }

Vec3 vorticity(const VectorField& field, const BlochVector& r) {
  const Mat3 j = jacobian(field, r.vec());  // j(c, b) = d v^c / d r^b
  return {j(2, 1) - j(1, 2), j(0, 2) - j(2, 0), j(1, 0) - j(0, 1)};
}

double pair_separation_rate(const BlochVector& r_a, const BlochVector& r_b, const VectorField& field, double p) {
  if (!(p >= 1.0)) throw ValidationError("pair_separation_rate: p must be >= 1");
  const Vec3 dr = r_a.vec() - r_b.vec();
  const double len = dr.norm();
  if (len == 0.0) throw ValidationError("pair_separation_rate: coincident states");
  const Vec3 dv = field(r_a.vec()) - field(r_b.vec());
  return std::pow(2.0, 1.0 / p - 1.0) * dr.dot(dv) / len;
}

Mat3 midpoint_K(const VectorField& field, const BlochVector& midpoint) {
  const Vec3 r = midpoint.vec();
  return jacobian(field, r) - field.generator(r);
}

std::string_view to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::Origin: return "Origin";
    case FixedPointKind::Plus: return "Plus";
    case FixedPointKind::Minus: return "Minus";
    case FixedPointKind::LineContinuum: return "LineContinuum";
  }
  return "?";
}

const FixedPointRecord* FixedPointSet::find(FixedPointKind k) const {
  for (const auto& p : points)
    if (p.kind == k) return &p;
  return nullptr;
}

namespace {

std::array<Complex, 3> sorted_eigenvalues(const Mat3& j) {
  Eigen::EigenSolver<Mat3> es(j, false);
  std::array<Complex, 3> ev{};
  for (int i = 0; i < 3; ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

bool all_negative(const std::array<Complex, 3>& ev) {
  return std::all_of(ev.begin(), ev.end(), [](Complex l) { return l.real() < -kStabilityMargin; });
}

FixedPointRecord make_record(const VectorField& field, const Vec3& r, FixedPointKind kind) {
  FixedPointRecord rec;
  rec.location = BlochVector::from(r);
  rec.kind = kind;
  rec.eigenvalues = sorted_eigenvalues(jacobian(field, r));
  rec.stable = all_negative(rec.eigenvalues);
  rec.in_ball = r.norm() <= 1.0 + linalg::kBallTol;
  return rec;
}

// |m^2 - gamma^2| at rounding level counts as the boundary.
bool on_boundary(double m, double gamma) {
  return std::abs(m * m - gamma * gamma) <= 1e-12 * std::max(1.0, m * m);
}

}  // namespace

double g_min(double m, double gamma) {
  if (!(m * m > gamma * gamma)) throw ValidationError("g_min: no finite pair exists (requires m^2 > gamma^2)");
  const double delta = (m * m - gamma * gamma) / (m * m);
  return std::sqrt((gamma * gamma + m * m) * delta + m * m * delta * delta);
}

FixedPointSet analytic_fixed_points(const DissipativeTorsionParams& p) {
  const VectorField field = dynamics::dissipative_torsion_field(p);
  FixedPointSet out;
  out.points.push_back(make_record(field, Vec3::Zero(), FixedPointKind::Origin));
  if (p.gamma == 0.0) {
    out.gamma_zero = true;
    return out;
  }
  const double m = p.m_pump, gamma = p.gamma, g = p.g_torsion;
  if (g == 0.0 && on_boundary(m, gamma)) {
    // z = (gamma/m) x, y = 0 is a line of fixed points
    FixedPointRecord line = make_record(field, Vec3::Zero(), FixedPointKind::LineContinuum);
    line.line_direction = Vec3(1.0, 0.0, gamma / m).normalized();
    out.points.push_back(line);
  }
  if (g != 0.0 && m * m > gamma * gamma && !on_boundary(m, gamma)) {
    const double delta = (m * m - gamma * gamma) / (m * m);
    const double sd = std::sqrt(delta);
    const double sgn = gamma > 0.0 ? 1.0 : -1.0;
    const Vec3 plus(std::abs(gamma) / g * sd, m / g * delta, sgn * m / g * sd);
    const Vec3 minus(-plus.x(), plus.y(), -plus.z());
    out.points.push_back(make_record(field, plus, FixedPointKind::Plus));
    out.points.push_back(make_record(field, minus, FixedPointKind::Minus));
  }
  return out;
}

FixedPointRecord jacobian_stability(const VectorField& field, const BlochVector& r_star) {
  const Vec3 r = r_star.vec();
  const double residual = field(r).norm();
  if (!(residual <= 1e-8)) {
    std::ostringstream os;
    os << "jacobian_stability: |field(r*)| = " << residual << " exceeds 1e-8";
    throw ValidationError(os.str());
  }
  FixedPointKind kind = FixedPointKind::Origin;
  if (r.norm() > 1e-12) kind = (r.z() + r.x()) >= 0.0 ? FixedPointKind::Plus : FixedPointKind::Minus;
  return make_record(field, r, kind);
}

XiCoords xi_transform(const BlochVector& r) { return {(r.z + r.x) / 2.0, (r.z - r.x) / 2.0, r.y}; }

BlochVector xi_inverse(const XiCoords& xi) { return {xi.xi_plus - xi.xi_minus, xi.y, xi.xi_plus + xi.xi_minus}; }

std::string_view to_string(BasinLabel b) {
  switch (b) {
    case BasinLabel::Plus: return "Plus";
    case BasinLabel::Minus: return "Minus";
    case BasinLabel::Origin: return "Origin";
    case BasinLabel::Unphysical: return "Unphysical";
    case BasinLabel::Undecided: return "Undecided";
  }
  return "?";
}

BasinResult basin_trajectory(const BlochVector& r0, const DissipativeTorsionParams& p, const BasinOptions& opts) {
  if (r0.norm() > 1.0 + linalg::kBallTol) throw ValidationError("basin_classify: initial point outside Bloch ball");
  const FixedPointSet fps = analytic_fixed_points(p);
  BasinResult res;
  res.trajectory = dynamics::integrate(dynamics::dissipative_torsion_field(p), r0, opts.t_max, opts.integrator);
  if (res.trajectory.status == dynamics::TrajectoryStatus::Unphysical) {
    res.label = BasinLabel::Unphysical;
    return res;
  }
  const Vec3 end = res.trajectory.final_state().vec();
  for (const auto& fp : fps.points) {
    if (fp.kind == FixedPointKind::LineContinuum) continue;
    if ((end - fp.location.vec()).norm() <= opts.capture_radius) {
      res.label = fp.kind == FixedPointKind::Plus    ? BasinLabel::Plus
                  : fp.kind == FixedPointKind::Minus ? BasinLabel::Minus
                                                     : BasinLabel::Origin;
      return res;
    }
  }
  res.label = BasinLabel::Undecided;
  return res;
}

BasinLabel basin_classify(const BlochVector& r0, const DissipativeTorsionParams& p, const BasinOptions& opts) {
  return basin_trajectory(r0, p, opts).label;
}

std::string_view to_string(PhaseLabel l) {
  switch (l) {
    case PhaseLabel::SingleStableOrigin: return "SingleStableOrigin";
    case PhaseLabel::Bistable: return "Bistable";
    case PhaseLabel::LineDegenerate: return "LineDegenerate";
    case PhaseLabel::NoFiniteAttractorInBall: return "NoFiniteAttractorInBall";
    case PhaseLabel::Unclassified: return "Unclassified";
  }
  return "?";
}

PhaseLabel classify_phase(const DissipativeTorsionParams& p) {
  const FixedPointSet fps = analytic_fixed_points(p);
  if (fps.gamma_zero) return PhaseLabel::Unclassified;
  if (fps.find(FixedPointKind::LineContinuum)) return PhaseLabel::LineDegenerate;
  const auto* plus = fps.find(FixedPointKind::Plus);
  const auto* minus = fps.find(FixedPointKind::Minus);
  if (plus && minus && plus->stable && minus->stable && plus->in_ball && minus->in_ball) return PhaseLabel::Bistable;
  if (fps.find(FixedPointKind::Origin)->stable) return PhaseLabel::SingleStableOrigin;
  // marginal origin at m^2 = gamma^2 with damping still attracts (polynomially)
  if (on_boundary(p.m_pump, p.gamma) && p.gamma > 0.0) return PhaseLabel::SingleStableOrigin;
  return PhaseLabel::NoFiniteAttractorInBall;
}

std::vector<double> Grid1D::values() const {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> v(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = lo + static_cast<double>(i) * step;
  v.back() = hi;
  return v;
}

PhaseDiagram phase_scan(const PhaseScanSpec& spec) {
  PhaseDiagram d;
  d.axes = spec.axes;
  d.param1 = spec.m.values();
  d.param2 = spec.second.values();
  for (double v : d.param1)
    if (!std::isfinite(v)) throw ValidationError("phase_scan: non-finite grid value");
  for (double v : d.param2)
    if (!std::isfinite(v)) throw ValidationError("phase_scan: non-finite grid value");
  if (!std::isfinite(spec.fixed)) throw ValidationError("phase_scan: non-finite fixed parameter");
  const std::size_t n1 = d.param1.size(), n2 = d.param2.size();
  d.cells.assign(n1 * n2, PhaseLabel::Unclassified);
  const long total = static_cast<long>(n1 * n2);
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / n2, j = static_cast<std::size_t>(idx) % n2;
    DissipativeTorsionParams p;
    p.m_pump = d.param1[i];
    if (spec.axes == ScanAxes::MGamma) {
      p.gamma = d.param2[j];
      p.g_torsion = spec.fixed;
    } else {
      p.gamma = spec.fixed;
      p.g_torsion = d.param2[j];
    }
    d.cells[static_cast<std::size_t>(idx)] = classify_phase(p);
  }
  return d;
}

std::string phase_csv(const PhaseDiagram& d) {
  std::string out = "param1,param2,label\n";
  for (std::size_t i = 0; i < d.param1.size(); ++i)
    for (std::size_t j = 0; j < d.param2.size(); ++j) {
      out += format_number(d.param1[i]);
      out += ',';
      out += format_number(d.param2[j]);
      out += ',';
      out += to_string(d.at(i, j));
      out += '\n';
    }
  return out;
}

}  // namespace ptpq::phase
