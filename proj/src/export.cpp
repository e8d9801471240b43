#include "ptpq/export.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "ptpq/errors.hpp"
#include "ptpq/format.hpp"

namespace ptpq::io {

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json vec_json(const linalg::BlochVector& r) { return nlohmann::json::array({num(r.x), num(r.y), num(r.z)}); }

}  // namespace

std::string trajectory_csv(const dynamics::Trajectory& traj) {
  std::string out = "t,x,y,z,trace_err,status\n";
  const std::size_t n = traj.times.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = traj.states[i];
    for (double v : {traj.times[i], r.x, r.y, r.z, traj.trace_errors[i]}) {
      out += format_number(v);
      out += ',';
    }
    out += dynamics::to_string(i + 1 == n ? traj.status : dynamics::TrajectoryStatus::Running);
    out += '\n';
  }
  return out;
}

std::string trajectory_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "traj_%05zu.csv", index);
  return buf;
}

std::string ensemble_summary_json(const EnsembleResult& res, const Scenario& sc) {
  nlohmann::json j;
  j["scenario"] = {{"preset", sc.preset ? nlohmann::json(*sc.preset) : nlohmann::json(nullptr)},
                   {"m", num(sc.model.m_pump)},
                   {"gamma", num(sc.model.gamma)},
                   {"g", num(sc.model.g_torsion)},
                   {"t_max", num(sc.t_max)},
                   {"dt", num(sc.integrator.dt)},
                   {"method", std::string(dynamics::to_string(sc.integrator.method))},
                   {"count", res.members.size()},
                   {"seed", sc.ensemble.seed},
                   {"capture_radius", num(sc.ensemble.capture_radius)}};
  auto& list = j["trajectories"] = nlohmann::json::array();
  for (const auto& m : res.members) {
    list.push_back({{"index", m.index},
                    {"file", trajectory_file_name(m.index)},
                    {"initial", vec_json(m.initial)},
                    {"final", vec_json(m.trajectory.final_state())},
                    {"final_time", num(m.trajectory.final_time())},
                    {"status", std::string(dynamics::to_string(m.trajectory.status))},
                    {"label", std::string(phase::to_string(m.label))}});
  }
  auto& tallies = j["tallies"] = nlohmann::json::object();
  for (auto l : kAllBasinLabels) tallies[std::string(phase::to_string(l))] = res.tally(l);
  return j.dump(2) + "\n";
}

std::string fixed_points_json(const phase::FixedPointSet& fps, const dynamics::DissipativeTorsionParams& p) {
  nlohmann::json j;
  j["params"] = {{"m", num(p.m_pump)}, {"gamma", num(p.gamma)}, {"g", num(p.g_torsion)}};
  j["gamma_zero"] = fps.gamma_zero;
  j["phase"] = std::string(phase::to_string(phase::classify_phase(p)));
  if (p.m_pump * p.m_pump > p.gamma * p.gamma)
    j["g_min"] = num(phase::g_min(p.m_pump, p.gamma));
  else
    j["g_min"] = nullptr;
  auto& pts = j["fixed_points"] = nlohmann::json::array();
  for (const auto& fp : fps.points) {
    nlohmann::json e{{"kind", std::string(phase::to_string(fp.kind))},
                     {"location", vec_json(fp.location)},
                     {"stable", fp.stable},
                     {"in_ball", fp.in_ball}};
    auto& ev = e["eigenvalues"] = nlohmann::json::array();
    for (const auto& l : fp.eigenvalues) ev.push_back({num(l.real()), num(l.imag())});
    if (fp.kind == phase::FixedPointKind::LineContinuum) e["direction"] = vec_json(linalg::BlochVector::from(fp.line_direction));
    pts.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string channel_json(const ChannelAnalysis& a) {
  nlohmann::json j{{"map", a.map}, {"dim", a.dim}, {"class", std::string(channel::to_string(a.cls))},
                   {"class_number", static_cast<int>(a.cls)}, {"linear", a.linear}};
  if (a.linear) {
    j["rank"] = a.rank;
    auto& ev = j["choi_eigenvalues"] = nlohmann::json::array();
    for (double v : a.choi_eigenvalues) ev.push_back(num(v));
    j["is_cp"] = a.positivity.is_cp;
    j["negative_part_norm"] = num(a.positivity.negative_part_norm);
    j["p_violations"] = a.positivity.p_violations;
  }
  return j.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_ensemble(const EnsembleResult& res, const Scenario& sc, const std::filesystem::path& dir) {
  for (const auto& m : res.members) write_text(dir / trajectory_file_name(m.index), trajectory_csv(m.trajectory));
  write_text(dir / "summary.json", ensemble_summary_json(res, sc));
}

}  // namespace ptpq::io
