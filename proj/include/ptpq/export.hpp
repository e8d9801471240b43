#pragma once

// Text renderings of results (CSV / JSON) and file output.

#include <filesystem>
#include <string>
#include <vector>

#include "ptpq/discriminator.hpp"
#include "ptpq/ensemble.hpp"
#include "ptpq/integrator.hpp"
#include "ptpq/phase_analysis.hpp"
#include "ptpq/scenario.hpp"

namespace ptpq::io {

// Header "t,x,y,z,trace_err,status"; every row but the last reports Running,
// the last carries the trajectory's final status.
std::string trajectory_csv(const dynamics::Trajectory& traj);

std::string trajectory_file_name(std::size_t index);

// Scenario echo, one record per trajectory, and label tallies.
std::string ensemble_summary_json(const EnsembleResult& res, const Scenario& sc);

std::string fixed_points_json(const phase::FixedPointSet& fps, const dynamics::DissipativeTorsionParams& p);

std::string channel_json(const ChannelAnalysis& a);

// Creates parent directories. Throws IoError naming the path.
void write_text(const std::filesystem::path& path, const std::string& text);

// Writes traj_NNNNN.csv per member and summary.json into dir.
void write_ensemble(const EnsembleResult& res, const Scenario& sc, const std::filesystem::path& dir);

}  // namespace ptpq::io
