#pragma once

// Fixed-step RK4 and embedded Dormand-Prince 5(4) integration of qubit flows,
// either in Bloch coordinates or on 2x2 operators, with early stopping on
// convergence and a Bloch-ball positivity guard.

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "ptpq/nino.hpp"
#include "ptpq/vector_field.hpp"

namespace ptpq::dynamics {

enum class Method { RK4, RK45 };

enum class TrajectoryStatus { Running, Converged, Unphysical, MaxTime };

std::string_view to_string(TrajectoryStatus s);
std::string_view to_string(Method m);

struct IntegratorOptions {
  double dt = 1e-3;  // RK4 step; initial trial step for RK45
  Method method = Method::RK4;
  double convergence_tol = 1e-10;  // |dr/dt| threshold
  int convergence_window = 10;     // consecutive steps below threshold
  bool stop_on_convergence = true;
  double ball_tol = linalg::kBallTol;
  bool renormalize = false;  // operator form only: rescale tr(X) to 1 after each step
  double rel_tol = 1e-9;     // RK45 only
  double abs_tol = 1e-12;    // RK45 only
  std::size_t record_stride = 1;  // keep every n-th accepted step (first and last always kept)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<BlochVector> states;
  std::vector<double> trace_errors;
  TrajectoryStatus status = TrajectoryStatus::Running;
  double trace_error_max = 0.0;

  const BlochVector& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

// Called after every accepted step with the new time and Bloch vector.
// Returning true halts the run; the trajectory keeps status Running.
using StepObserver = std::function<bool(double t, const Vec3& r)>;

using OperatorRhs = std::function<ComplexMatrix(const ComplexMatrix&)>;

// Throws ValidationError on bad options or an initial state outside the ball,
// NumericalError (with the last good time) when the state becomes non-finite.
Trajectory integrate(const VectorField& field, const BlochVector& initial, double t_max,
                     const IntegratorOptions& opts = {}, const StepObserver& observer = {});

Trajectory integrate(const OperatorRhs& rhs, const DensityMatrix& initial, double t_max,
                     const IntegratorOptions& opts = {}, const StepObserver& observer = {});

Trajectory integrate(const NinoGeneratorSet& gens, const DensityMatrix& initial, double t_max,
                     const IntegratorOptions& opts = {}, const StepObserver& observer = {});

}  // namespace ptpq::dynamics
