#include "ptpq/ensemble.hpp"

#include <algorithm>
#include <random>

#include <omp.h>

#include "ptpq/errors.hpp"

namespace ptpq::io {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

std::vector<linalg::BlochVector> sample_uniform_ball(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<linalg::BlochVector> out;
  out.reserve(count);
  while (out.size() < count) {
    const linalg::BlochVector r{u(rng), u(rng), u(rng)};
    if (r.vec().squaredNorm() <= 1.0) out.push_back(r);
  }
  return out;
}

EnsembleResult run_ensemble(const Scenario& sc) {
  const auto starts = sc.ensemble.initial.empty() ? sample_uniform_ball(sc.ensemble.count, sc.ensemble.seed)
                                                  : sc.ensemble.initial;
  phase::BasinOptions opts;
  opts.t_max = sc.t_max;
  opts.capture_radius = sc.ensemble.capture_radius;
  opts.integrator = sc.integrator;
  opts.integrator.record_stride = sc.output.stride;

  EnsembleResult res;
  res.members.resize(starts.size());
  const long n = static_cast<long>(starts.size());
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      auto out = phase::basin_trajectory(starts[idx], sc.model, opts);
      res.members[idx] = {idx, starts[idx], std::move(out.trajectory), out.label};
    } catch (const std::exception& e) {
#pragma omp critical
      if (failure.empty()) failure = "trajectory " + std::to_string(idx) + ": " + e.what();
    }
  }
  if (!failure.empty()) throw NumericalError("run_ensemble: " + failure);
  for (const auto& m : res.members) ++res.tallies[static_cast<std::size_t>(m.label)];
  return res;
}

namespace {

std::vector<linalg::DensityMatrix> sample_states(std::size_t count, std::uint64_t seed) {
  std::vector<linalg::DensityMatrix> out;
  out.reserve(count);
  for (const auto& r : sample_uniform_ball(count, seed)) out.push_back(linalg::from_bloch(r));
  return out;
}

channel::LinearMapAction linear_action(const ChannelConfig& cfg) {
  using linalg::ComplexMatrix;
  const double p = cfg.p;
  if (cfg.map == "identity") return channel::LinearMapAction::from_function(2, [](const ComplexMatrix& e) { return e; });
  if (cfg.map == "transpose")
    return channel::LinearMapAction::from_function(2, [](const ComplexMatrix& e) -> ComplexMatrix { return e.transpose(); });
  if (cfg.map == "depolarizing")
    return channel::LinearMapAction::from_function(2, [p](const ComplexMatrix& e) -> ComplexMatrix {
      return (1.0 - p) * e + p * e.trace() * linalg::identity(2) / 2.0;
    });
  if (cfg.map == "amplitude_damping") {
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 2), k1 = ComplexMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - p);
    k1(0, 1) = std::sqrt(p);
    const std::vector<channel::SignedOperator> terms{{1.0, k0}, {1.0, k1}};
    return channel::LinearMapAction::from_signed_kraus(2, terms);
  }
  throw ValidationError("scenario: channel.map: unknown map '" + cfg.map + "'");
}

}  // namespace

ChannelAnalysis analyze_channel(const ChannelConfig& cfg, std::uint64_t seed) {
  ChannelAnalysis a;
  a.map = cfg.map;
  const auto samples = sample_states(cfg.samples, seed);
  if (cfg.map == "phi_plus" || cfg.map == "phi_minus" || cfg.map == "det_thermal") {
    a.linear = false;
    a.cls = channel::classify(channel::NormalizedChannel(channel::builtin_map(cfg.map)), samples);
    return a;
  }
  const auto choi = channel::choi_of(linear_action(cfg));
  const Eigen::VectorXd ev = linalg::hermitian_eigenvalues(choi.matrix);
  a.choi_eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::reverse(a.choi_eigenvalues.begin(), a.choi_eigenvalues.end());
  auto rep = channel::operator_sum_from_choi(choi);
  a.rank = rep.rank();
  a.positivity = channel::positivity_report(rep, samples);
  a.cls = channel::classify(channel::NormalizedChannel(std::move(rep)), samples);
  return a;
}

}  // namespace ptpq::io
