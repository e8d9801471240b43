#include "ptpq/discriminator.hpp"

#include <cmath>
#include <random>

#include "json.hpp"

#include "ptpq/errors.hpp"
#include "ptpq/format.hpp"
#include "ptpq/phase_analysis.hpp"

namespace ptpq::discrim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct PairPoints {
  Vec3 alpha;
  Vec3 beta;
};

PairPoints pair_points(const DiscriminationTask& task) {
  if (task.k < 1) throw ValidationError("discriminate.k: must be a positive integer");
  const double len = task.direction.norm();
  if (!(len > 0.0) || !task.direction.allFinite()) throw ValidationError("discriminate.direction: must be nonzero");
  const Vec3 offset = std::ldexp(0.5, -task.k) * task.direction / len;
  const Vec3 mid = task.midpoint.vec();
  PairPoints p{mid + offset, mid - offset};
  if (p.alpha.norm() > 1.0 || p.beta.norm() > 1.0)
    throw ValidationError("prepare_pair: placement leaves the Bloch ball");
  return p;
}

void require_bistable(const DissipativeTorsionParams& p) {
  const double m = p.m_pump, gamma = p.gamma, g = p.g_torsion;
  if (gamma == 0.0 || !(m * m > gamma * gamma) || !(std::abs(g) > phase::g_min(m, gamma)))
    throw ValidationError("no discriminating phase (requires m^2 > gamma^2 and |g| > g_min)");
  if (phase::classify_phase(p) != phase::PhaseLabel::Bistable)
    throw ValidationError("no discriminating phase (fixed-point pair is not stable)");
}

Decision xi_sign_label(const Vec3& r, const Vec3& plus) {
  const double s = (r.x() + r.z()) * (plus.x() + plus.z());
  return s > 0.0 ? Decision::Plus : s < 0.0 ? Decision::Minus : Decision::Undecided;
}

}  // namespace

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Plus: return "Plus";
    case Decision::Minus: return "Minus";
    case Decision::Undecided: return "Undecided";
  }
  return "?";
}

PreparedPair prepare_pair(const DiscriminationTask& task) {
  const PairPoints p = pair_points(task);
  return {linalg::from_bloch(BlochVector::from(p.alpha)), linalg::from_bloch(BlochVector::from(p.beta))};
}

DiscriminationResult discriminate(const DensityMatrix& x, const DissipativeTorsionParams& params,
                                  const DiscriminateOptions& opts) {
  require_bistable(params);
  if (!(opts.decision_radius > 0.0)) throw ValidationError("discriminate.decision_radius: must be positive");
  const auto fps = phase::analytic_fixed_points(params);
  const Vec3 plus = fps.find(phase::FixedPointKind::Plus)->location.vec();
  const Vec3 minus = fps.find(phase::FixedPointKind::Minus)->location.vec();

  DiscriminationResult res;
  auto observer = [&](double t, const Vec3& r) {
    if ((r - plus).norm() < opts.decision_radius) {
      res.label = Decision::Plus;
    } else if ((r - minus).norm() < opts.decision_radius) {
      res.label = Decision::Minus;
    } else {
      return false;
    }
    res.resolve_time = t;
    return true;
  };
  const auto traj = dynamics::integrate(dynamics::dissipative_torsion_field(params), linalg::to_bloch(x), opts.t_max,
                                        opts.integrator, observer);
  res.status = traj.status;
  if (res.label == Decision::Undecided) res.resolve_time = traj.final_time();
  return res;
}

DiscriminationReport run_task(const DiscriminationTask& task) {
  require_bistable(task.params);
  if (!(task.noise_sigma >= 0.0) || !std::isfinite(task.noise_sigma))
    throw ValidationError("discriminate.noise_sigma: must be finite and >= 0");
  const PairPoints pts = pair_points(task);
  const Vec3 plus = phase::analytic_fixed_points(task.params).find(phase::FixedPointKind::Plus)->location.vec();

  DiscriminationReport rep;
  rep.per_trial.resize(task.trials);
  const long n = static_cast<long>(task.trials);
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const Vec3& prepared = (i % 2 == 0) ? pts.alpha : pts.beta;
      Vec3 r = prepared;
      if (task.noise_sigma > 0.0) {
        std::mt19937_64 rng(splitmix64(task.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
        std::normal_distribution<double> normal(0.0, task.noise_sigma);
        for (int a = 0; a < 3; ++a) r(a) += normal(rng);
        if (r.norm() > 1.0) r /= r.norm();
      }
      const auto out = discriminate(linalg::from_bloch(BlochVector::from(r)), task.params, task.options);
      auto& rec = rep.per_trial[static_cast<std::size_t>(i)];
      rec.true_label = xi_sign_label(prepared, plus);
      rec.decided_label = out.label;
      rec.resolve_time = out.resolve_time;
      rec.status = out.status;
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        failure = e.what();
      }
    }
  }
  if (failed) throw NumericalError("run_task: " + failure);

  std::size_t hits = 0, decided = 0;
  double time_sum = 0.0;
  for (const auto& t : rep.per_trial) {
    if (t.decided_label != Decision::Undecided) {
      ++decided;
      time_sum += t.resolve_time;
    }
    if (t.decided_label != Decision::Undecided && t.decided_label == t.true_label) ++hits;
  }
  rep.success_rate = task.trials ? static_cast<double>(hits) / static_cast<double>(task.trials) : 0.0;
  rep.mean_resolve_time = decided ? time_sum / static_cast<double>(decided) : std::nan("");
  return rep;
}

std::vector<SweepRow> sweep_k(std::span<const int> ks, const DiscriminationTask& base) {
  std::vector<SweepRow> rows;
  rows.reserve(ks.size());
  for (int k : ks) {
    DiscriminationTask t = base;
    t.k = k;
    const auto rep = run_task(t);
    rows.push_back({k, rep.success_rate, rep.mean_resolve_time});
  }
  return rows;
}

std::string report_json(const DiscriminationReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["success_rate"] = num(r.success_rate);
  j["mean_resolve_time"] = num(r.mean_resolve_time);
  j["per_trial"] = nlohmann::json::array();
  for (const auto& t : r.per_trial) {
    j["per_trial"].push_back({{"true_label", std::string(to_string(t.true_label))},
                              {"decided_label", std::string(to_string(t.decided_label))},
                              {"resolve_time", num(t.resolve_time)},
                              {"status", std::string(dynamics::to_string(t.status))}});
  }
  return j.dump(2) + "\n";
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "k,success_rate,mean_resolve_time\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += format_number(r.success_rate);
    out += ',';
    out += format_number(r.mean_resolve_time);
    out += '\n';
  }
  return out;
}

}  // namespace ptpq::discrim
