#pragma once

// Ensemble runs over seeded uniform-in-ball starts, and the channel analysis
// behind the `channel` subcommand.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ptpq/channel_algebra.hpp"
#include "ptpq/phase_analysis.hpp"
#include "ptpq/scenario.hpp"

namespace ptpq::io {

// Sets the OpenMP worker count; n <= 0 leaves the runtime default.
void set_threads(int n);

// Rejection sampling from the cube [-1, 1]^3 with a seeded mt19937_64.
std::vector<linalg::BlochVector> sample_uniform_ball(std::size_t count, std::uint64_t seed);

struct EnsembleMember {
  std::size_t index = 0;
  linalg::BlochVector initial;
  dynamics::Trajectory trajectory;
  phase::BasinLabel label = phase::BasinLabel::Undecided;
};

inline constexpr std::array<phase::BasinLabel, 5> kAllBasinLabels = {
    phase::BasinLabel::Plus, phase::BasinLabel::Minus, phase::BasinLabel::Origin, phase::BasinLabel::Unphysical,
    phase::BasinLabel::Undecided};

struct EnsembleResult {
  std::vector<EnsembleMember> members;
  std::array<std::size_t, 5> tallies{};  // indexed like kAllBasinLabels

  std::size_t tally(phase::BasinLabel l) const { return tallies[static_cast<std::size_t>(l)]; }
};

// Integrates every start of the scenario's ensemble under its dissipative
// torsion model; members are in sample order whatever the thread count.
EnsembleResult run_ensemble(const Scenario& sc);

struct ChannelAnalysis {
  std::string map;
  linalg::Index dim = 2;
  channel::ChannelClass cls = channel::ChannelClass::LinearTP;
  bool linear = true;
  std::size_t rank = 0;                 // linear maps only
  std::vector<double> choi_eigenvalues;  // linear maps only, descending
  channel::PositivityReport positivity;  // linear maps only
};

// Maps: identity, transpose, depolarizing, amplitude_damping (strength p) and
// the parameter-free nonlinear maps phi_plus, phi_minus, det_thermal.
ChannelAnalysis analyze_channel(const ChannelConfig& cfg, std::uint64_t seed);

}  // namespace ptpq::io
