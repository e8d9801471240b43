#pragma once

// TOML scenario files for the command-line front end.
//
//   kind = "simulate" | "fixed-points" | "phase-scan" | "discriminate" | "channel"
//   preset = "fig2" | "fig3"            (optional; fills model and ensemble)
//   [model]        m, gamma, g
//   [integrator]   method ("rk4"|"rk45"), dt, t_max, convergence_tol, convergence_window,
//                  ball_tol, rel_tol, abs_tol, renormalize
//   [ensemble]     count, seed, sampler ("uniform-in-ball"), capture_radius, initial = [[x,y,z], ...]
//   [output]       dir, stride
//   [scan]         axes ("m-gamma"|"m-g"), m = [lo, hi, n], second = [lo, hi, n], fixed
//   [discriminate] k (int or list), noise_sigma, trials, decision_radius, t_max, dt,
//                  direction = [x,y,z], midpoint = [x,y,z]
//   [channel]      map, p, samples
//
// Unknown keys are rejected. Errors name the offending field path.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptpq/discriminator.hpp"
#include "ptpq/integrator.hpp"
#include "ptpq/phase_analysis.hpp"

namespace ptpq::io {

enum class ScenarioKind { Simulate, FixedPoints, PhaseScan, Discriminate, ChannelAnalyze };
std::string_view to_string(ScenarioKind k);

struct EnsembleConfig {
  std::size_t count = 200;
  std::uint64_t seed = 0;
  double capture_radius = 1e-4;
  std::vector<linalg::BlochVector> initial;  // explicit starts; overrides sampling when non-empty
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  std::size_t stride = 1000;  // integrator steps per CSV row
};

struct DiscriminateConfig {
  std::vector<int> ks{10};
  discrim::DiscriminationTask task;
};

struct ChannelConfig {
  std::string map = "transpose";
  double p = 0.5;  // strength for depolarizing / amplitude_damping
  std::size_t samples = 64;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Simulate;
  std::optional<std::string> preset;
  dynamics::DissipativeTorsionParams model{0.9, 1.0, 1.0};
  dynamics::IntegratorOptions integrator{};
  double t_max = 200.0;
  EnsembleConfig ensemble;
  OutputConfig output;
  phase::PhaseScanSpec scan{phase::ScanAxes::MGamma, {0.5, 1.5, 11}, {0.5, 1.5, 11}, 1.0};
  DiscriminateConfig discriminate;
  ChannelConfig channel;
};

// Throws ValidationError with "line N" for syntax errors and the field path
// (e.g. "ensemble.count") for missing or invalid values.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// "fig2": gamma = 1, m = 0.9, g = 1; "fig3": gamma = 1, m = 1.1, g = 1.
// Both use 200 uniform-in-ball starts and t_max = 200.
Scenario preset_scenario(std::string_view name);

}  // namespace ptpq::io
