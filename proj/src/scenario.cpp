#include "ptpq/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "ptpq/errors.hpp"

namespace ptpq::io {

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Simulate: return "simulate";
    case ScenarioKind::FixedPoints: return "fixed-points";
    case ScenarioKind::PhaseScan: return "phase-scan";
    case ScenarioKind::Discriminate: return "discriminate";
    case ScenarioKind::ChannelAnalyze: return "channel";
  }
  return "?";
}

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ValidationError("scenario: " + path + ": " + what);
}

std::string line_of(const toml::node& n) {
  const auto& src = n.source();
  return src.begin ? " (line " + std::to_string(src.begin.line) + ")" : "";
}

// One TOML table plus its dotted path; remembers which keys were consumed.
class Section {
 public:
  Section(const toml::table* t, std::string path) : table_(t), path_(std::move(path)) {}

  bool present() const { return table_ != nullptr; }
  std::string key_path(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  const toml::node* get(std::string_view key) {
    used_.insert(std::string(key));
    return table_ ? table_->get(key) : nullptr;
  }

  std::optional<double> number(std::string_view key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    auto v = n->value<double>();
    if (!v || !(n->is_floating_point() || n->is_integer())) field_error(key_path(key), "expected a number" + line_of(*n));
    if (!std::isfinite(*v)) field_error(key_path(key), "must be finite" + line_of(*n));
    return v;
  }

  std::optional<std::int64_t> integer(std::string_view key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    if (!n->is_integer()) field_error(key_path(key), "expected an integer" + line_of(*n));
    return n->value<std::int64_t>();
  }

  std::optional<bool> boolean(std::string_view key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    if (!n->is_boolean()) field_error(key_path(key), "expected true or false" + line_of(*n));
    return n->value<bool>();
  }

  std::optional<std::string> string(std::string_view key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    if (!n->is_string()) field_error(key_path(key), "expected a string" + line_of(*n));
    return n->value<std::string>();
  }

  std::optional<std::vector<double>> numbers(std::string_view key) {
    const toml::node* n = get(key);
    if (!n) return std::nullopt;
    return as_numbers(*n, key_path(key));
  }

  void reject_unknown() const {
    if (!table_) return;
    for (auto&& [k, v] : *table_) {
      if (!used_.count(std::string(k.str()))) field_error(key_path(k.str()), "unknown key" + line_of(v));
    }
  }

  static std::vector<double> as_numbers(const toml::node& n, const std::string& path) {
    const toml::array* arr = n.as_array();
    if (!arr) field_error(path, "expected an array of numbers" + line_of(n));
    std::vector<double> out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const toml::node& e = *arr->get(i);
      auto v = e.value<double>();
      if (!v || !(e.is_integer() || e.is_floating_point()) || !std::isfinite(*v))
        field_error(path + "[" + std::to_string(i) + "]", "expected a finite number" + line_of(e));
      out.push_back(*v);
    }
    return out;
  }

 private:
  const toml::table* table_;
  std::string path_;
  std::set<std::string> used_;
};

linalg::BlochVector to_bloch3(const std::vector<double>& v, const std::string& path) {
  if (v.size() != 3) field_error(path, "expected 3 components");
  return {v[0], v[1], v[2]};
}

Section sub(std::string_view name, Section& top) {
  const toml::node* n = top.get(name);
  if (n && !n->is_table()) field_error(std::string(name), "expected a table" + line_of(*n));
  return Section(n ? n->as_table() : nullptr, std::string(name));
}

std::size_t non_negative_count(Section& s, std::string_view key, std::size_t fallback) {
  auto v = s.integer(key);
  if (!v) return fallback;
  if (*v < 0) field_error(s.key_path(key), "must be >= 0");
  return static_cast<std::size_t>(*v);
}

ScenarioKind parse_kind(const std::string& s) {
  if (s == "simulate") return ScenarioKind::Simulate;
  if (s == "fixed-points") return ScenarioKind::FixedPoints;
  if (s == "phase-scan") return ScenarioKind::PhaseScan;
  if (s == "discriminate") return ScenarioKind::Discriminate;
  if (s == "channel") return ScenarioKind::ChannelAnalyze;
  field_error("kind", "unknown kind '" + s + "'");
}

phase::Grid1D parse_grid(Section& s, std::string_view key, phase::Grid1D fallback) {
  auto v = s.numbers(key);
  if (!v) return fallback;
  if (v->size() != 3) field_error(s.key_path(key), "expected [lo, hi, count]");
  const double n = (*v)[2];
  if (n < 1 || n != std::floor(n)) field_error(s.key_path(key), "count must be a positive integer");
  return {(*v)[0], (*v)[1], static_cast<std::size_t>(n)};
}

void check_positive(double v, const std::string& path) {
  if (!(v > 0.0)) field_error(path, "must be positive");
}

}  // namespace

Scenario preset_scenario(std::string_view name) {
  Scenario s;
  s.kind = ScenarioKind::Simulate;
  s.preset = std::string(name);
  if (name == "fig2") {
    s.model = {0.9, 1.0, 1.0};
  } else if (name == "fig3") {
    s.model = {1.1, 1.0, 1.0};
  } else {
    throw ValidationError("scenario: preset: unknown preset '" + std::string(name) + "' (expected fig2 or fig3)");
  }
  s.ensemble.count = 200;
  s.t_max = 200.0;
  return s;
}

Scenario parse_scenario(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "scenario: syntax error at line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
       << e.description();
    throw ValidationError(os.str());
  }

  Section top(&root, "");
  Scenario sc;
  if (auto preset = top.string("preset")) sc = preset_scenario(*preset);
  auto kind = top.string("kind");
  if (kind) {
    sc.kind = parse_kind(*kind);
  } else if (!sc.preset) {
    field_error("kind", "missing required key");
  }

  Section model = sub("model", top);
  if (auto v = model.number("m")) sc.model.m_pump = *v;
  if (auto v = model.number("gamma")) sc.model.gamma = *v;
  if (auto v = model.number("g")) sc.model.g_torsion = *v;
  model.reject_unknown();

  Section integ = sub("integrator", top);
  if (auto v = integ.string("method")) {
    if (*v == "rk4") sc.integrator.method = dynamics::Method::RK4;
    else if (*v == "rk45") sc.integrator.method = dynamics::Method::RK45;
    else field_error("integrator.method", "expected \"rk4\" or \"rk45\"");
  }
  if (auto v = integ.number("dt")) check_positive(sc.integrator.dt = *v, "integrator.dt");
  if (auto v = integ.number("t_max")) {
    if (*v < 0) field_error("integrator.t_max", "must be >= 0");
    sc.t_max = *v;
  }
  if (auto v = integ.number("convergence_tol")) check_positive(sc.integrator.convergence_tol = *v, "integrator.convergence_tol");
  if (auto v = integ.integer("convergence_window")) {
    if (*v < 1) field_error("integrator.convergence_window", "must be >= 1");
    sc.integrator.convergence_window = static_cast<int>(*v);
  }
  if (auto v = integ.number("ball_tol")) {
    if (*v < 0) field_error("integrator.ball_tol", "must be >= 0");
    sc.integrator.ball_tol = *v;
  }
  if (auto v = integ.number("rel_tol")) check_positive(sc.integrator.rel_tol = *v, "integrator.rel_tol");
  if (auto v = integ.number("abs_tol")) check_positive(sc.integrator.abs_tol = *v, "integrator.abs_tol");
  if (auto v = integ.boolean("renormalize")) sc.integrator.renormalize = *v;
  integ.reject_unknown();

  Section ens = sub("ensemble", top);
  sc.ensemble.count = non_negative_count(ens, "count", sc.ensemble.count);
  if (auto v = ens.integer("seed")) {
    if (*v < 0) field_error("ensemble.seed", "must be >= 0");
    sc.ensemble.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = ens.string("sampler"); v && *v != "uniform-in-ball")
    field_error("ensemble.sampler", "only \"uniform-in-ball\" is supported");
  if (auto v = ens.number("capture_radius")) check_positive(sc.ensemble.capture_radius = *v, "ensemble.capture_radius");
  if (const toml::node* n = ens.get("initial")) {
    const toml::array* arr = n->as_array();
    if (!arr) field_error("ensemble.initial", "expected an array of [x, y, z]" + line_of(*n));
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string path = "ensemble.initial[" + std::to_string(i) + "]";
      const auto r = to_bloch3(Section::as_numbers(*arr->get(i), path), path);
      if (r.norm() > 1.0 + linalg::kBallTol) field_error(path, "outside the Bloch ball");
      sc.ensemble.initial.push_back(r);
    }
  }
  ens.reject_unknown();

  Section out = sub("output", top);
  if (auto v = out.string("dir")) sc.output.dir = *v;
  if (auto v = out.integer("stride")) {
    if (*v < 1) field_error("output.stride", "must be >= 1");
    sc.output.stride = static_cast<std::size_t>(*v);
  }
  out.reject_unknown();

  Section scan = sub("scan", top);
  if (auto v = scan.string("axes")) {
    if (*v == "m-gamma") sc.scan.axes = phase::ScanAxes::MGamma;
    else if (*v == "m-g") sc.scan.axes = phase::ScanAxes::MG;
    else field_error("scan.axes", "expected \"m-gamma\" or \"m-g\"");
  }
  sc.scan.m = parse_grid(scan, "m", sc.scan.m);
  sc.scan.second = parse_grid(scan, "second", sc.scan.second);
  if (auto v = scan.number("fixed")) sc.scan.fixed = *v;
  scan.reject_unknown();

  auto& task = sc.discriminate.task;
  task.params = sc.model;
  Section dis = sub("discriminate", top);
  if (const toml::node* n = dis.get("k")) {
    std::vector<double> ks;
    if (n->is_integer()) ks.push_back(static_cast<double>(*n->value<std::int64_t>()));
    else ks = Section::as_numbers(*n, "discriminate.k");
    sc.discriminate.ks.clear();
    for (double k : ks) {
      if (k < 1 || k != std::floor(k) || k > 1000) field_error("discriminate.k", "must be positive integers");
      sc.discriminate.ks.push_back(static_cast<int>(k));
    }
    if (sc.discriminate.ks.empty()) field_error("discriminate.k", "must not be empty");
  }
  if (auto v = dis.number("noise_sigma")) {
    if (*v < 0) field_error("discriminate.noise_sigma", "must be >= 0");
    task.noise_sigma = *v;
  }
  task.trials = non_negative_count(dis, "trials", task.trials);
  if (auto v = dis.number("decision_radius")) check_positive(task.options.decision_radius = *v, "discriminate.decision_radius");
  if (auto v = dis.number("t_max")) check_positive(task.options.t_max = *v, "discriminate.t_max");
  if (auto v = dis.number("dt")) check_positive(task.options.integrator.dt = *v, "discriminate.dt");
  if (auto v = dis.numbers("direction")) {
    const auto d = to_bloch3(*v, "discriminate.direction");
    if (d.norm() == 0.0) field_error("discriminate.direction", "must be nonzero");
    task.direction = d.vec();
  }
  if (auto v = dis.numbers("midpoint")) {
    task.midpoint = to_bloch3(*v, "discriminate.midpoint");
    if (task.midpoint.norm() > 1.0) field_error("discriminate.midpoint", "outside the Bloch ball");
  }
  task.seed = sc.ensemble.seed;
  dis.reject_unknown();

  Section ch = sub("channel", top);
  if (auto v = ch.string("map")) sc.channel.map = *v;
  if (auto v = ch.number("p")) {
    if (*v < 0 || *v > 1) field_error("channel.p", "must lie in [0, 1]");
    sc.channel.p = *v;
  }
  sc.channel.samples = non_negative_count(ch, "samples", sc.channel.samples);
  ch.reject_unknown();

  top.reject_unknown();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace ptpq::io
