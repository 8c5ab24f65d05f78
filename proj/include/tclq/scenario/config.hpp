#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tclq/error.hpp"
#include "tclq/scenario/io.hpp"

namespace tclq {

enum class ScenarioKind { classical_dephasing, quantum_pm };

inline const char* to_string(ScenarioKind k) {
  return k == ScenarioKind::classical_dephasing ? "classical-dephasing" : "quantum-pm";
}

inline const std::set<std::string>& solvers_for(ScenarioKind k) {
  static const std::set<std::string> classical{"mc", "novikov-laplace", "novikov-ode", "tl2", "tl3"};
  static const std::set<std::string> quantum{"pm-exact", "tcl2-q", "tcl3-q"};
  return k == ScenarioKind::classical_dephasing ? classical : quantum;
}

/// Acceptance check evaluated after all solvers ran. Deviations are
/// max-abs over the window, in `frame` ("rotating" or "lab").
///   max_deviation: dev(a, b) ≤ max
///   improvement:   dev(a, b) < dev(worse, b)
///   z_score:       fraction of points with error-aware z ≤ max is ≥ min_fraction
struct Threshold {
  std::string kind = "max_deviation";
  std::string a, b, worse;
  std::string component = "all";
  std::string frame = "rotating";
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  double max = 0.0;
  double min_fraction = 1.0;
};

/// Physical parameters in units of Ω. Classical scenarios use delta, drive,
/// phase, g, tau; quantum scenarios use drive, phase, drive_frequency,
/// eta, xi, gamma, n_max.
struct PhysicsParams {
  double omega = 1.0;
  double delta = 0.0;
  double drive = 0.0;
  double phase = 0.0;
  double g = 0.0;
  double tau = 0.1;
  double drive_frequency = 1.0;
  double eta = 0.0;
  double xi = 0.0;
  double gamma = 0.0;
  int n_max = 4;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ScenarioKind kind = ScenarioKind::classical_dephasing;
  std::vector<std::string> solvers;
  PhysicsParams physics;
  std::array<double, 3> initial_state{0.0, 0.0, 1.0};
  double t_max = 100.0;
  double dt_out = 1.0;
  std::size_t mc_trajectories = 1000;
  double mc_dt = 0.05;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::csv;
  std::vector<Threshold> thresholds;
};

class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& field, const std::string& msg) : InvalidArgument("config field '" + field + "': " + msg) {}
};

namespace detail {

template <class T>
T get_field(const nlohmann::json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + key, "has the wrong type");
  }
}

inline void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

}  // namespace detail

inline void validate(const ScenarioConfig& c) {
  using detail::require;
  require(!c.solvers.empty(), "solvers", "at least one solver is required");
  const auto& allowed = solvers_for(c.kind);
  for (const auto& s : c.solvers)
    require(allowed.count(s) == 1, "solvers", "solver '" + s + "' is not available for kind " + to_string(c.kind));
  const auto& p = c.physics;
  require(p.omega > 0 && std::isfinite(p.omega), "physics.omega", "must be > 0");
  require(p.drive >= 0 && std::isfinite(p.drive), "physics.drive", "must be >= 0");
  require(std::isfinite(p.phase), "physics.phase", "must be finite");
  if (c.kind == ScenarioKind::classical_dephasing) {
    require(p.g >= 0 && std::isfinite(p.g), "physics.g", "must be >= 0");
    require(p.tau > 0 && std::isfinite(p.tau), "physics.tau", "must be > 0");
    require(std::isfinite(p.delta), "physics.delta", "must be finite");
  } else {
    require(p.eta >= 0 && std::isfinite(p.eta), "physics.eta", "must be >= 0");
    require(p.gamma > 0 && std::isfinite(p.gamma), "physics.gamma", "must be > 0");
    require(std::isfinite(p.xi), "physics.xi", "must be finite");
    require(std::isfinite(p.drive_frequency), "physics.drive_frequency", "must be finite");
    require(p.n_max >= 1 && p.n_max <= 12, "physics.n_max", "must be in [1, 12]");
  }
  double n2 = 0;
  for (double v : c.initial_state) {
    require(std::isfinite(v), "initial_state", "must be finite");
    n2 += v * v;
  }
  require(n2 <= 1.0 + 1e-12, "initial_state", "must lie in the Bloch ball");
  require(c.t_max > 0 && std::isfinite(c.t_max), "grid.t_max", "must be > 0");
  require(c.dt_out > 0 && c.dt_out <= c.t_max, "grid.dt_out", "must be in (0, t_max]");
  require(c.mc_trajectories >= 1, "monte_carlo.n_traj", "must be >= 1");
  require(c.mc_dt > 0 && c.mc_dt <= c.dt_out, "monte_carlo.dt", "must be in (0, dt_out]");
  const double ratio = c.dt_out / c.mc_dt;
  require(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio, "monte_carlo.dt", "dt_out must be an integer multiple of it");
  for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
    const auto& t = c.thresholds[i];
    const std::string f = "thresholds[" + std::to_string(i) + "]";
    require(t.kind == "max_deviation" || t.kind == "improvement" || t.kind == "z_score", f + ".kind",
            "must be max_deviation, improvement or z_score");
    require(t.component == "all" || t.component == "x" || t.component == "y" || t.component == "z",
            f + ".component", "must be x, y, z or all");
    require(t.frame == "rotating" || t.frame == "lab", f + ".frame", "must be rotating or lab");
    require(!t.a.empty() && !t.b.empty(), f, "needs solvers a and b");
    if (t.kind == "improvement") require(!t.worse.empty(), f + ".worse", "is required for improvement thresholds");
    require(t.t_min <= t.t_max, f + ".window", "must be ordered");
  }
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  using detail::get_field;
  if (!j.is_object()) throw ConfigError("<root>", "must be a JSON object");
  ScenarioConfig c;
  c.name = get_field<std::string>(j, "name", "", c.name);
  const auto kind = get_field<std::string>(j, "kind", "", "classical-dephasing");
  if (kind == "classical-dephasing") c.kind = ScenarioKind::classical_dephasing;
  else if (kind == "quantum-pm") c.kind = ScenarioKind::quantum_pm;
  else throw ConfigError("kind", "must be classical-dephasing or quantum-pm");
  c.solvers = get_field<std::vector<std::string>>(j, "solvers", "", {});
  if (j.contains("physics")) {
    const auto& p = j["physics"];
    auto& q = c.physics;
    q.omega = get_field(p, "omega", "physics.", q.omega);
    q.delta = get_field(p, "delta", "physics.", q.delta);
    q.drive = get_field(p, "drive", "physics.", q.drive);
    q.phase = get_field(p, "phase", "physics.", q.phase);
    q.g = get_field(p, "g", "physics.", q.g);
    q.tau = get_field(p, "tau", "physics.", q.tau);
    q.drive_frequency = get_field(p, "drive_frequency", "physics.", q.omega);
    q.eta = get_field(p, "eta", "physics.", q.eta);
    q.xi = get_field(p, "xi", "physics.", q.xi);
    q.gamma = get_field(p, "gamma", "physics.", q.gamma);
    q.n_max = get_field(p, "n_max", "physics.", q.n_max);
  }
  if (j.contains("initial_state")) {
    const auto v = get_field<std::vector<double>>(j, "initial_state", "", {});
    if (v.size() != 3) throw ConfigError("initial_state", "must have three components");
    c.initial_state = {v[0], v[1], v[2]};
  }
  if (j.contains("grid")) {
    c.t_max = get_field(j["grid"], "t_max", "grid.", c.t_max);
    c.dt_out = get_field(j["grid"], "dt_out", "grid.", c.dt_out);
  }
  if (j.contains("monte_carlo")) {
    c.mc_trajectories = get_field<std::size_t>(j["monte_carlo"], "n_traj", "monte_carlo.", c.mc_trajectories);
    c.mc_dt = get_field(j["monte_carlo"], "dt", "monte_carlo.", c.mc_dt);
  }
  c.seed = get_field<std::uint64_t>(j, "seed", "", c.seed);
  c.threads = get_field<unsigned>(j, "threads", "", c.threads);
  if (j.contains("output")) {
    c.out_dir = get_field<std::string>(j["output"], "dir", "output.", c.out_dir);
    const auto fmt = get_field<std::string>(j["output"], "format", "output.", "csv");
    try {
      c.format = format_from_string(fmt);
    } catch (const InvalidArgument&) {
      throw ConfigError("output.format", "must be csv or json");
    }
  }
  if (j.contains("thresholds")) {
    if (!j["thresholds"].is_array()) throw ConfigError("thresholds", "must be an array");
    std::size_t i = 0;
    for (const auto& t : j["thresholds"]) {
      const std::string f = "thresholds[" + std::to_string(i++) + "].";
      Threshold th;
      th.kind = get_field<std::string>(t, "kind", f, th.kind);
      th.a = get_field<std::string>(t, "a", f, "");
      th.b = get_field<std::string>(t, "b", f, "");
      th.worse = get_field<std::string>(t, "worse", f, "");
      th.component = get_field<std::string>(t, "component", f, th.component);
      th.frame = get_field<std::string>(t, "frame", f, th.frame);
      th.max = get_field(t, "max", f, th.max);
      th.min_fraction = get_field(t, "min_fraction", f, th.min_fraction);
      if (t.contains("window")) {
        const auto w = get_field<std::vector<double>>(t, "window", f, {});
        if (w.size() != 2) throw ConfigError(f + "window", "must be [t_min, t_max]");
        th.t_min = w[0];
        th.t_max = w[1];
      }
      c.thresholds.push_back(th);
    }
  }
  validate(c);
  return c;
}

inline nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  j["solvers"] = c.solvers;
  const auto& p = c.physics;
  auto& ph = j["physics"];
  ph["omega"] = p.omega;
  ph["drive"] = p.drive;
  ph["phase"] = p.phase;
  if (c.kind == ScenarioKind::classical_dephasing) {
    ph["delta"] = p.delta;
    ph["g"] = p.g;
    ph["tau"] = p.tau;
  } else {
    ph["drive_frequency"] = p.drive_frequency;
    ph["eta"] = p.eta;
    ph["xi"] = p.xi;
    ph["gamma"] = p.gamma;
    ph["n_max"] = p.n_max;
  }
  j["initial_state"] = c.initial_state;
  j["grid"] = {{"t_max", c.t_max}, {"dt_out", c.dt_out}};
  j["monte_carlo"] = {{"n_traj", c.mc_trajectories}, {"dt", c.mc_dt}};
  j["seed"] = c.seed;
  j["output"] = {{"dir", c.out_dir}, {"format", c.format == OutputFormat::csv ? "csv" : "json"}};
  auto& th = j["thresholds"];
  th = nlohmann::ordered_json::array();
  for (const auto& t : c.thresholds) {
    nlohmann::ordered_json e;
    e["kind"] = t.kind;
    e["a"] = t.a;
    e["b"] = t.b;
    if (!t.worse.empty()) e["worse"] = t.worse;
    e["component"] = t.component;
    e["frame"] = t.frame;
    if (std::isfinite(t.t_min) || std::isfinite(t.t_max)) e["window"] = {t.t_min, t.t_max};
    if (t.kind != "improvement") e["max"] = t.max;
    if (t.kind == "z_score") e["min_fraction"] = t.min_fraction;
    th.push_back(e);
  }
  return j;
}

/// Built-in parameter sets.
namespace presets {

inline constexpr double fig2_phase = std::numbers::pi / 4;
inline constexpr double fig2_tau = 0.1;
inline constexpr double fig2_drive = 1e-2;
inline constexpr double fig2_g = 4e-3;
inline constexpr double fig3_drive = 5e-2;
inline constexpr double fig3_g = 4e-3;
inline constexpr double fig3_tau = 0.1;
inline constexpr double fig5_eta = 0.035;
inline constexpr double fig5_xi = 0.75;
inline constexpr double fig5_gamma = 0.02;
inline constexpr double fig5_drive = 0.04;

/// Comparison windows. The fig5 short window is the first beat of the
/// lab-frame r_x envelope, which closes at t = π/D.
inline constexpr double fig3_long_t0 = 500.0;
inline constexpr double fig5_long_t0 = 200.0;
inline constexpr double fig5_t_max = 400.0;
inline constexpr double fig5_short_t1 = std::numbers::pi / fig5_drive;

inline ScenarioConfig fig2() {
  ScenarioConfig c;
  c.name = "fig2";
  c.kind = ScenarioKind::classical_dephasing;
  c.solvers = {"novikov-laplace", "tl2", "mc"};
  c.physics.phase = fig2_phase;
  c.physics.tau = fig2_tau;
  c.physics.drive = fig2_drive;
  c.physics.g = fig2_g;
  c.t_max = 1000.0;
  c.dt_out = 1.0;
  c.mc_trajectories = 10000;
  c.mc_dt = 0.05;
  c.seed = 20240101;
  Threshold tl2{"max_deviation", "tl2", "novikov-laplace", "", "z"};
  tl2.max = 2e-2;
  Threshold mc{"z_score", "mc", "novikov-laplace", "", "all"};
  mc.max = 3.0;
  mc.min_fraction = 0.99;
  c.thresholds = {tl2, mc};
  return c;
}

inline ScenarioConfig fig3() {
  ScenarioConfig c;
  c.name = "fig3";
  c.kind = ScenarioKind::classical_dephasing;
  c.solvers = {"novikov-laplace", "tl2", "tl3"};
  c.physics.phase = fig2_phase;
  c.physics.tau = fig3_tau;
  c.physics.drive = fig3_drive;
  c.physics.g = fig3_g;
  c.t_max = 1000.0;
  c.dt_out = 1.0;
  for (const char* comp : {"x", "z"}) {
    Threshold t{"improvement", "tl3", "novikov-laplace", "tl2", comp};
    t.t_min = fig3_long_t0;
    t.t_max = c.t_max;
    c.thresholds.push_back(t);
  }
  return c;
}

inline ScenarioConfig fig5() {
  ScenarioConfig c;
  c.name = "fig5";
  c.kind = ScenarioKind::quantum_pm;
  c.solvers = {"pm-exact", "tcl2-q", "tcl3-q"};
  c.physics.eta = fig5_eta;
  c.physics.xi = fig5_xi;
  c.physics.gamma = fig5_gamma;
  c.physics.drive = fig5_drive;
  c.physics.drive_frequency = c.physics.omega;
  c.physics.n_max = 4;
  // Qubit starts in its ground state, like the bath.
  c.initial_state = {0.0, 0.0, -1.0};
  c.t_max = fig5_t_max;
  c.dt_out = 0.1;
  Threshold imp{"improvement", "tcl3-q", "pm-exact", "tcl2-q", "x"};
  imp.t_min = fig5_long_t0;
  imp.t_max = fig5_t_max;
  imp.frame = "lab";
  c.thresholds.push_back(imp);
  for (const char* s : {"tcl2-q", "tcl3-q"}) {
    Threshold sh{"max_deviation", s, "pm-exact", "", "x"};
    sh.t_min = 0.0;
    sh.t_max = fig5_short_t1;
    sh.max = 0.05;
    sh.frame = "lab";
    c.thresholds.push_back(sh);
  }
  return c;
}

inline ScenarioConfig by_name(const std::string& name) {
  if (name == "fig2") return fig2();
  if (name == "fig3") return fig3();
  if (name == "fig5") return fig5();
  throw InvalidArgument("unknown preset '" + name + "' (expected fig2, fig3 or fig5)");
}

}  // namespace presets

}  // namespace tclq
