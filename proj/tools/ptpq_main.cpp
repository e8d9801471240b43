// Command-line front end: simulate, fixed-points, phase-scan, discriminate, channel.
// Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ptpq/discriminator.hpp"
#include "ptpq/ensemble.hpp"
#include "ptpq/errors.hpp"
#include "ptpq/export.hpp"
#include "ptpq/phase_analysis.hpp"
#include "ptpq/scenario.hpp"

namespace {

using namespace ptpq;

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int threads = 0;
};

struct ModelFlags {
  std::optional<std::string> preset;
  std::optional<double> m, gamma, g, t_max;
  std::optional<std::size_t> count;
};

io::Scenario build_scenario(const GlobalFlags& gf, const ModelFlags& mf, io::ScenarioKind kind) {
  io::Scenario sc;
  if (!gf.config.empty()) sc = io::load_scenario(gf.config);
  if (mf.preset) {
    io::Scenario p = io::preset_scenario(*mf.preset);
    sc.model = p.model;
    sc.ensemble.count = p.ensemble.count;
    sc.t_max = p.t_max;
    sc.preset = p.preset;
  }
  sc.kind = kind;
  if (mf.m) sc.model.m_pump = *mf.m;
  if (mf.gamma) sc.model.gamma = *mf.gamma;
  if (mf.g) sc.model.g_torsion = *mf.g;
  if (mf.t_max) {
    if (*mf.t_max < 0) throw ValidationError("--t-max must be >= 0");
    sc.t_max = *mf.t_max;
  }
  if (mf.count) sc.ensemble.count = *mf.count;
  if (gf.seed) sc.ensemble.seed = *gf.seed;
  if (gf.out_dir) sc.output.dir = *gf.out_dir;
  sc.discriminate.task.params = sc.model;
  sc.discriminate.task.seed = sc.ensemble.seed;
  return sc;
}

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
  cmd->add_option("--m", mf.m, "pump strength m");
  cmd->add_option("--gamma", mf.gamma, "damping gamma");
  cmd->add_option("--g", mf.g, "torsion strength g");
}

int run(const io::Scenario& sc) {
  const std::filesystem::path dir = sc.output.dir;
  switch (sc.kind) {
    case io::ScenarioKind::Simulate: {
      const auto res = io::run_ensemble(sc);
      io::write_ensemble(res, sc, dir);
      std::cout << "wrote " << res.members.size() << " trajectories to " << dir.string() << "\n";
      for (auto l : io::kAllBasinLabels) std::cout << "  " << phase::to_string(l) << ": " << res.tally(l) << "\n";
      return 0;
    }
    case io::ScenarioKind::FixedPoints: {
      const std::string text = io::fixed_points_json(phase::analytic_fixed_points(sc.model), sc.model);
      io::write_text(dir / "fixed_points.json", text);
      std::cout << text;
      return 0;
    }
    case io::ScenarioKind::PhaseScan: {
      const auto d = phase::phase_scan(sc.scan);
      io::write_text(dir / "phase.csv", phase::phase_csv(d));
      std::cout << "wrote " << d.cells.size() << " cells to " << (dir / "phase.csv").string() << "\n";
      return 0;
    }
    case io::ScenarioKind::Discriminate: {
      std::vector<discrim::SweepRow> rows;
      for (int k : sc.discriminate.ks) {
        auto task = sc.discriminate.task;
        task.k = k;
        const auto rep = discrim::run_task(task);
        io::write_text(dir / ("report_k" + std::to_string(k) + ".json"), discrim::report_json(rep));
        rows.push_back({k, rep.success_rate, rep.mean_resolve_time});
      }
      const std::string csv = discrim::sweep_csv(rows);
      io::write_text(dir / "sweep.csv", csv);
      std::cout << csv;
      return 0;
    }
    case io::ScenarioKind::ChannelAnalyze: {
      const std::string text = io::channel_json(io::analyze_channel(sc.channel, sc.ensemble.seed));
      io::write_text(dir / "channel.json", text);
      std::cout << text;
      return 0;
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear positive trace-preserving qubit channels"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags gf;
  app.add_option("--config", gf.config, "TOML scenario file")->check(CLI::ExistingFile);
  app.add_option("--seed", gf.seed, "master seed");
  app.add_option("--out-dir", gf.out_dir, "output directory");
  app.add_option("--threads", gf.threads, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

  ModelFlags mf;
  auto* sim = app.add_subcommand("simulate", "integrate an ensemble of trajectories");
  add_model_flags(sim, mf);
  sim->add_option("--preset", mf.preset, "fig2 or fig3");
  sim->add_option("--t-max", mf.t_max, "integration horizon");
  sim->add_option("--count", mf.count, "number of uniform-in-ball starts");
  auto* fp = app.add_subcommand("fixed-points", "closed-form fixed points and their stability");
  add_model_flags(fp, mf);
  auto* scan = app.add_subcommand("phase-scan", "phase labels over a parameter grid (from --config)");
  auto* dis = app.add_subcommand("discriminate", "state-discrimination sweep over k");
  add_model_flags(dis, mf);
  auto* ch = app.add_subcommand("channel", "Choi spectrum and class of a channel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  io::ScenarioKind kind = io::ScenarioKind::Simulate;
  if (*fp) kind = io::ScenarioKind::FixedPoints;
  else if (*scan) kind = io::ScenarioKind::PhaseScan;
  else if (*dis) kind = io::ScenarioKind::Discriminate;
  else if (*ch) kind = io::ScenarioKind::ChannelAnalyze;
  (void)sim;

  try {
    io::set_threads(gf.threads);
    return run(build_scenario(gf, mf, kind));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
