#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tclq/laplace/novikov.hpp"
#include "tclq/noise/monte_carlo.hpp"
#include "tclq/pseudomode/lindblad.hpp"
#include "tclq/pseudomode/tcl.hpp"
#include "tclq/scenario/compare.hpp"
#include "tclq/scenario/config.hpp"
#include "tclq/tcl/propagate.hpp"

#ifndef TCLQ_VERSION
#define TCLQ_VERSION "0.0.0"
#endif

namespace tclq {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitThreshold = 2;

struct ThresholdOutcome {
  Threshold spec;
  bool passed = false;
  double value = 0.0;
  double reference = 0.0;
  std::string message;
};

struct ScenarioResult {
  /// Rotating-frame series per solver.
  std::map<std::string, TimeSeries> series;
  /// The same series mapped to the lab frame.
  std::map<std::string, TimeSeries> lab_series;
  std::map<std::string, std::string> failures;
  std::vector<std::filesystem::path> files;
  nlohmann::ordered_json summary;
  std::vector<ThresholdOutcome> thresholds;
  int exit_code = kExitOk;
};

namespace detail {

inline TimeSeries make_series(const std::string& solver, const BlochTrajectory& traj, const std::string& frame) {
  TimeSeries ts;
  ts.solver = solver;
  ts.frame = frame;
  ts.t = traj.t;
  ts.r = traj.r;
  return ts;
}

inline BlochTrajectory as_trajectory(const TimeSeries& ts) { return {ts.t, ts.r}; }

/// Runs one solver and returns its rotating-frame series.
inline TimeSeries run_solver(const ScenarioConfig& c, const std::string& solver) {
  const auto grid = ode::uniform_grid(c.t_max, c.dt_out);
  const auto& p = c.physics;
  const BlochVector r0(c.initial_state[0], c.initial_state[1], c.initial_state[2]);
  if (c.kind == ScenarioKind::classical_dephasing) {
    const LaplaceParams lp{p.delta, p.drive, p.phase, p.g, p.tau};
    const OUNoiseParams noise{p.g, p.tau};
    const SystemSpec sys{p.omega};
    const DriveSpec drive = DriveSpec::monochromatic(p.drive, p.omega - p.delta, p.phase);
    if (solver == "novikov-laplace") return make_series(solver, invert_resolvent(lp, r0, grid), "rotating");
    if (solver == "novikov-ode") return make_series(solver, novikov_extended_ode(lp, r0, grid), "rotating");
    if (solver == "tl2" || solver == "tl3") {
      std::vector<TLGenerator> gens{k1_generator(sys, drive, Frame::rotating),
                                    k2_generator(sys, noise, Frame::rotating)};
      if (solver == "tl3") gens.push_back(k3_dephasing_bloch(sys, drive, noise, Frame::rotating));
      return make_series(solver, propagate(std::span<const TLGenerator>(gens), r0, grid), "rotating");
    }
    if (solver == "mc") {
      MonteCarloOptions mo;
      mo.dt = c.mc_dt;
      mo.t_max = c.t_max;
      mo.dt_out = c.dt_out;
      mo.n_traj = c.mc_trajectories;
      mo.seed = c.seed;
      mo.threads = c.threads;
      mo.r0 = r0;
      // Rotating frame: H₀ = Δ/2 σ_z and a static drive.
      const auto res = mc_ensemble_average(0.5 * p.delta * pauli::z(), DriveSpec::monochromatic(p.drive, 0.0, p.phase),
                                           pauli::z(), noise, mo);
      auto ts = make_series(solver, res.mean, "rotating");
      ts.se = res.std_error;
      ts.meta["n_traj"] = res.n_traj;
      ts.meta["max_norm_drift"] = res.max_norm_drift;
      return ts;
    }
  } else {
    auto bath = PseudoModeBath::single(p.eta, p.xi, p.gamma, p.n_max);
    const DriveSpec drive = DriveSpec::monochromatic(p.drive, p.drive_frequency, p.phase);
    BlochTrajectory lab;
    TimeSeries ts;
    if (solver == "pm-exact") {
      const auto res = pm_lindblad_propagate(bath, p.omega, drive, r0, grid);
      lab = res.reduced;
      ts.meta["max_trace_drift"] = res.max_trace_drift;
      ts.meta["min_eigenvalue"] = res.min_eigenvalue;
    } else {
      lab = tcl3_bloch_propagate(bath, p.omega, drive, solver == "tcl3-q" ? 3 : 2, r0, grid);
    }
    auto rot = rotating_frame_map(lab, p.drive_frequency, FrameDirection::to_rotating);
    auto out = make_series(solver, rot, "rotating");
    out.meta = ts.meta;
    return out;
  }
  throw InvalidArgument("unknown solver '" + solver + "'");
}

inline double window_deviation(const TimeSeries& a, const TimeSeries& b, const Threshold& t) {
  CompareOptions o;
  o.t_min = t.t_min;
  o.t_max = t.t_max;
  const auto rep = compare_solvers(a, b, o);
  if (t.component == "x") return rep.max_abs_component.x();
  if (t.component == "y") return rep.max_abs_component.y();
  if (t.component == "z") return rep.max_abs_component.z();
  return rep.max_abs;
}

inline ThresholdOutcome evaluate(const Threshold& t, const std::map<std::string, TimeSeries>& s) {
  // `s` must already be in t.frame.
  ThresholdOutcome out{t};
  auto find = [&](const std::string& name) -> const TimeSeries* {
    auto it = s.find(name);
    return it == s.end() ? nullptr : &it->second;
  };
  const TimeSeries* a = find(t.a);
  const TimeSeries* b = find(t.b);
  if (!a || !b) {
    out.message = "solver output missing";
    return out;
  }
  if (t.kind == "max_deviation") {
    out.value = window_deviation(*a, *b, t);
    out.reference = t.max;
    out.passed = out.value <= t.max;
  } else if (t.kind == "improvement") {
    const TimeSeries* w = find(t.worse);
    if (!w) {
      out.message = "solver output missing";
      return out;
    }
    out.value = window_deviation(*a, *b, t);
    out.reference = window_deviation(*w, *b, t);
    out.passed = out.value < out.reference;
  } else {
    CompareOptions o;
    o.error_aware = true;
    o.t_min = t.t_min;
    o.t_max = t.t_max;
    // z-scores against max; component selection is not applied here.
    const auto rep = compare_solvers(*a, *b, o);
    if (!rep.fraction_within_3se) {
      out.message = "no standard errors available";
      return out;
    }
    std::size_t within = 0, n = 0;
    for (std::size_t k = 0; k < a->size(); ++k) {
      if (a->t[k] < t.t_min || a->t[k] > t.t_max) continue;
      ++n;
      double zk = 0.0;
      for (int i = 0; i < 3; ++i) {
        double var = 0.0;
        if (a->se) var += (*a->se)[k](i) * (*a->se)[k](i);
        if (b->se) var += (*b->se)[k](i) * (*b->se)[k](i);
        const double d = std::abs(a->r[k](i) - b->r[k](i));
        zk = std::max(zk, var > 0 ? d / std::sqrt(var) : (d > 0 ? std::numeric_limits<double>::infinity() : 0.0));
      }
      if (zk <= t.max) ++within;
    }
    out.value = n ? static_cast<double>(within) / static_cast<double>(n) : 1.0;
    out.reference = t.min_fraction;
    out.passed = out.value >= t.min_fraction;
  }
  return out;
}

inline nlohmann::ordered_json series_meta(const ScenarioConfig& c, const std::string& solver) {
  nlohmann::ordered_json m;
  m["version"] = TCLQ_VERSION;
  m["scenario"] = c.name;
  m["solver"] = solver;
  auto cfg = to_json(c);
  cfg.erase("output");
  cfg.erase("thresholds");
  m["config"] = cfg;
  return m;
}

}  // namespace detail

/// Executes every configured solver on a common grid, writes one lab-frame
/// and one rotating-frame file per solver plus summary.json, and evaluates
/// the thresholds. A failing solver is recorded and the others still run.
inline ScenarioResult run_scenario(const ScenarioConfig& c, bool write_files = true) {
  validate(c);
  ScenarioResult res;
  const std::filesystem::path dir(c.out_dir);
  const double frame_omega =
      c.kind == ScenarioKind::classical_dephasing ? c.physics.omega - c.physics.delta : c.physics.drive_frequency;
  for (const auto& s : c.solvers) {
    try {
      auto rot = detail::run_solver(c, s);
      auto meta = detail::series_meta(c, s);
      for (const auto& [k, v] : rot.meta.items()) meta[k] = v;
      rot.meta = meta;
      TimeSeries lab = rot;
      const auto lab_traj = rotating_frame_map(detail::as_trajectory(rot), frame_omega, FrameDirection::to_lab);
      lab.r = lab_traj.r;
      lab.frame = "lab";
      if (rot.se) {
        // Standard errors of the transverse components mix under the
        // frame rotation; report the larger of the two.
        for (std::size_t k = 0; k < lab.size(); ++k) {
          const double m = std::max((*rot.se)[k].x(), (*rot.se)[k].y());
          (*lab.se)[k] = Vec3(m, m, (*rot.se)[k].z());
        }
      }
      if (write_files) {
        for (const TimeSeries* ts : {&lab, &rot}) {
          const auto path = dir / (c.name + "_" + s + "_" + ts->frame + extension(c.format));
          emit_timeseries(*ts, path, c.format);
          res.files.push_back(path);
        }
      }
      res.lab_series.emplace(s, std::move(lab));
      res.series.emplace(s, std::move(rot));
    } catch (const std::exception& e) {
      res.failures.emplace(s, e.what());
    }
  }

  auto& sum = res.summary;
  sum["version"] = TCLQ_VERSION;
  sum["scenario"] = c.name;
  sum["config"] = to_json(c);
  auto& pairs = sum["comparisons"];
  pairs = nlohmann::ordered_json::array();
  for (auto i = res.series.begin(); i != res.series.end(); ++i)
    for (auto j = std::next(i); j != res.series.end(); ++j) {
      CompareOptions o;
      o.error_aware = true;
      nlohmann::ordered_json e;
      e["a"] = i->first;
      e["b"] = j->first;
      e["report"] = compare_solvers(i->second, j->second, o).to_json();
      pairs.push_back(e);
    }
  auto& th = sum["thresholds"];
  th = nlohmann::ordered_json::array();
  bool violated = false;
  for (const auto& t : c.thresholds) {
    auto out = detail::evaluate(t, t.frame == "lab" ? res.lab_series : res.series);
    violated |= !out.passed;
    nlohmann::ordered_json e;
    e["kind"] = t.kind;
    e["a"] = t.a;
    e["b"] = t.b;
    if (!t.worse.empty()) e["worse"] = t.worse;
    e["component"] = t.component;
    e["frame"] = t.frame;
    e["value"] = out.value;
    e["reference"] = out.reference;
    e["passed"] = out.passed;
    if (!out.message.empty()) e["message"] = out.message;
    th.push_back(e);
    res.thresholds.push_back(std::move(out));
  }
  auto& fails = sum["failures"];
  fails = nlohmann::ordered_json::object();
  for (const auto& [k, v] : res.failures) fails[k] = v;
  res.exit_code = !res.failures.empty() ? kExitError : (violated ? kExitThreshold : kExitOk);
  sum["exit_code"] = res.exit_code;
  if (write_files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / (c.name + "_summary.json");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << sum.dump(2) << '\n';
    res.files.push_back(path);
  }
  return res;
}

}  // namespace tclq
