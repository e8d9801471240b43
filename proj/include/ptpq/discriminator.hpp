#pragma once

// Bistable state discrimination: two qubit states a trace distance 2^-k apart,
// placed on either side of the separatrix, flow to different fixed points of
// the dissipative torsion model.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptpq/integrator.hpp"
#include "ptpq/vector_field.hpp"

namespace ptpq::discrim {

using dynamics::DissipativeTorsionParams;
using dynamics::TrajectoryStatus;
using linalg::BlochVector;
using linalg::DensityMatrix;
using linalg::Vec3;

inline const Vec3 kXiPlusDirection = Vec3(1.0, 0.0, 1.0).normalized();

struct DiscriminateOptions {
  double decision_radius = 0.1;
  double t_max = 1000.0;
  dynamics::IntegratorOptions integrator = [] {
    dynamics::IntegratorOptions o;
    o.dt = 1e-2;
    o.record_stride = static_cast<std::size_t>(-1);
    o.stop_on_convergence = false;  // the prepared states start next to a fixed point
    return o;
  }();
};

struct DiscriminationTask {
  int k = 10;  // trace-distance separation 2^-k
  BlochVector midpoint{};
  Vec3 direction = kXiPlusDirection;
  DissipativeTorsionParams params{1.1, 1.0, 1.0};
  double noise_sigma = 0.0;
  std::size_t trials = 2;
  std::uint64_t seed = 0;
  DiscriminateOptions options{};
};

struct PreparedPair {
  DensityMatrix alpha;
  DensityMatrix beta;
};

// r_alpha/beta = midpoint +- (2^-k / 2) * direction/|direction|.
PreparedPair prepare_pair(const DiscriminationTask& task);

enum class Decision { Plus, Minus, Undecided };
std::string_view to_string(Decision d);

struct DiscriminationResult {
  Decision label = Decision::Undecided;
  double resolve_time = 0.0;  // first entry into the decision radius; t at stop otherwise
  // Running when stopped by a decision, otherwise the integrator's final status.
  TrajectoryStatus status = TrajectoryStatus::Running;
};

// Throws ValidationError("no discriminating phase") outside the bistable phase.
DiscriminationResult discriminate(const DensityMatrix& x, const DissipativeTorsionParams& params,
                                  const DiscriminateOptions& opts = {});

struct TrialRecord {
  Decision true_label = Decision::Undecided;
  Decision decided_label = Decision::Undecided;
  double resolve_time = 0.0;
  TrajectoryStatus status = TrajectoryStatus::Running;
};

struct DiscriminationReport {
  double success_rate = 0.0;
  double mean_resolve_time = 0.0;  // over trials that reached a decision; NaN if none did
  std::vector<TrialRecord> per_trial;
};

// Even trials prepare X_alpha, odd trials X_beta. Each trial draws its noise
// from its own stream seeded by (seed, trial index), so the report does not
// depend on the thread count.
DiscriminationReport run_task(const DiscriminationTask& task);

struct SweepRow {
  int k = 0;
  double success_rate = 0.0;
  double mean_resolve_time = 0.0;
};

// Runs the task once per k; the base task's noise, trials and seed are reused.
std::vector<SweepRow> sweep_k(std::span<const int> ks, const DiscriminationTask& base);

std::string report_json(const DiscriminationReport& r);
std::string sweep_csv(std::span<const SweepRow> rows);

}  // namespace ptpq::discrim
