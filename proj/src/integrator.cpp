#include "ptpq/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptpq/errors.hpp"

namespace ptpq::dynamics {

std::string_view to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Running: return "Running";
    case TrajectoryStatus::Converged: return "Converged";
    case TrajectoryStatus::Unphysical: return "Unphysical";
    case TrajectoryStatus::MaxTime: return "MaxTime";
  }
  return "?";
}

std::string_view to_string(Method m) { return m == Method::RK4 ? "rk4" : "rk45"; }

namespace {

struct BlochTraits {
  static Vec3 bloch(const Vec3& y) { return y; }
  static double trace_error(const Vec3&) { return 0.0; }
  static void renormalize(Vec3&) {}
};

struct OperatorTraits {
  static Vec3 bloch(const ComplexMatrix& y) { return linalg::bloch_of(y); }
  static double trace_error(const ComplexMatrix& y) { return std::abs(y.trace() - Complex{1.0, 0.0}); }
  static void renormalize(ComplexMatrix& y) { y /= y.trace(); }
};

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double atol, double rtol) {
  const auto scale = atol + rtol * y0.cwiseAbs().array().max(y1.cwiseAbs().array());
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

void validate(const IntegratorOptions& o, double t_max) {
  auto fail = [](const char* what) { throw ValidationError(std::string("integrator options: ") + what); };
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) fail("t_max must be finite and >= 0");
  if (!(o.dt > 0.0) || !std::isfinite(o.dt)) fail("dt must be positive");
  if (!(o.convergence_tol > 0.0)) fail("convergence_tol must be positive");
  if (o.convergence_window < 1) fail("convergence_window must be >= 1");
  if (!(o.ball_tol >= 0.0)) fail("ball_tol must be >= 0");
  if (!(o.rel_tol > 0.0) || !(o.abs_tol > 0.0)) fail("RK45 tolerances must be positive");
  if (o.record_stride < 1) fail("record_stride must be >= 1");
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

template <class State, class Traits, class Rhs>
Trajectory run(const Rhs& rhs, State y, double t_max, const IntegratorOptions& opts, const StepObserver& observer) {
  validate(opts, t_max);
  Trajectory traj;
  auto record = [&](double t, const State& s) {
    traj.times.push_back(t);
    traj.states.push_back(BlochVector::from(Traits::bloch(s)));
    const double terr = Traits::trace_error(s);
    traj.trace_errors.push_back(terr);
    traj.trace_error_max = std::max(traj.trace_error_max, terr);
  };

  double t = 0.0;
  record(t, y);
  if (Traits::bloch(y).norm() > 1.0 + opts.ball_tol) throw ValidationError("integrate: initial state outside Bloch ball");

  State k1 = rhs(y);
  double h = opts.dt;
  std::size_t step = 0;
  int below = 0;
  bool recorded_last = true;
  TrajectoryStatus status = TrajectoryStatus::MaxTime;

  auto fail_nonfinite = [&](double last_good) {
    std::ostringstream os;
    os << "integrate: non-finite state encountered; last good time t = " << last_good;
    throw NumericalError(os.str());
  };

  while (t < t_max) {
    if (opts.stop_on_convergence) {
      below = Traits::bloch(k1).norm() < opts.convergence_tol ? below + 1 : 0;
      if (below >= opts.convergence_window) {
        status = TrajectoryStatus::Converged;
        break;
      }
    }

    State y_new;
    State k_next;
    double t_new;
    if (opts.method == Method::RK4) {
      const bool last = static_cast<double>(step + 1) * opts.dt >= t_max;
      t_new = last ? t_max : static_cast<double>(step + 1) * opts.dt;
      const double hs = t_new - t;
      const State k2 = rhs(State(y + (hs / 2.0) * k1));
      const State k3 = rhs(State(y + (hs / 2.0) * k2));
      const State k4 = rhs(State(y + hs * k3));
      y_new = y + (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!y_new.allFinite()) fail_nonfinite(t);
      if (opts.renormalize) Traits::renormalize(y_new);
      k_next = rhs(y_new);
    } else {
      const double hs = std::min(h, t_max - t);
      if (hs < 1e-14 * std::max(1.0, t)) throw NumericalError("integrate: RK45 step size underflow");
      const State k2 = rhs(State(y + hs * (a21 * k1)));
      const State k3 = rhs(State(y + hs * (a31 * k1 + a32 * k2)));
      const State k4 = rhs(State(y + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
      const State k5 = rhs(State(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      const State k6 = rhs(State(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      State candidate = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      if (!candidate.allFinite()) {
        h = hs / 4.0;
        if (h < 1e-14 * std::max(1.0, t)) fail_nonfinite(t);
        continue;
      }
      const State k7 = rhs(candidate);
      const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en = scaled_error(err, y, candidate, opts.abs_tol, opts.rel_tol);
      const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      if (!(en <= 1.0)) {
        h = hs * std::min(factor, 1.0);
        continue;
      }
      h = hs * factor;
      t_new = (t_max - (t + hs) <= 1e-12 * std::max(1.0, t_max)) ? t_max : t + hs;
      y_new = std::move(candidate);
      if (opts.renormalize) {
        Traits::renormalize(y_new);
        k_next = rhs(y_new);
      } else {
        k_next = k7;
      }
    }

    if (Traits::bloch(y_new).norm() > 1.0 + opts.ball_tol) {
      status = TrajectoryStatus::Unphysical;
      break;
    }
    t = t_new;
    y = std::move(y_new);
    k1 = std::move(k_next);
    if (!k1.allFinite()) fail_nonfinite(t);
    ++step;
    recorded_last = false;
    if (step % opts.record_stride == 0) {
      record(t, y);
      recorded_last = true;
    } else {
      traj.trace_error_max = std::max(traj.trace_error_max, Traits::trace_error(y));
    }
    if (observer && observer(t, Traits::bloch(y))) {
      status = TrajectoryStatus::Running;
      break;
    }
  }
  if (!recorded_last) record(t, y);
  traj.status = status;
  return traj;
}

}  // namespace

Trajectory integrate(const VectorField& field, const BlochVector& initial, double t_max, const IntegratorOptions& opts,
                     const StepObserver& observer) {
  return run<Vec3, BlochTraits>(field, initial.vec(), t_max, opts, observer);
}

Trajectory integrate(const OperatorRhs& rhs, const DensityMatrix& initial, double t_max, const IntegratorOptions& opts,
                     const StepObserver& observer) {
  if (initial.dim() != 2) throw ValidationError("integrate: operator-form integration is limited to qubits");
  return run<ComplexMatrix, OperatorTraits>(rhs, initial.matrix(), t_max, opts, observer);
}

Trajectory integrate(const NinoGeneratorSet& gens, const DensityMatrix& initial, double t_max,
                     const IntegratorOptions& opts, const StepObserver& observer) {
  if (gens.dim() != initial.dim()) throw ValidationError("integrate: generator and state dimensions differ");
  return integrate(OperatorRhs([&gens](const ComplexMatrix& x) { return nino_rhs(x, gens); }), initial, t_max, opts,
                   observer);
}

}  // namespace ptpq::dynamics
