#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include <json.hpp>

#include "tclq/scenario/io.hpp"

namespace tclq {

struct DeviationReport {
  std::size_t points = 0;
  double max_abs = 0.0;
  double rms = 0.0;
  Vec3 max_abs_component = Vec3::Zero();
  Vec3 rms_component = Vec3::Zero();
  /// Error-aware mode: |a − b| / √(se_a² + se_b²) per component.
  std::optional<double> max_z;
  std::optional<double> fraction_within_3se;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["points"] = points;
    j["max_abs"] = max_abs;
    j["rms"] = rms;
    j["max_abs_x"] = max_abs_component.x();
    j["max_abs_y"] = max_abs_component.y();
    j["max_abs_z"] = max_abs_component.z();
    j["rms_x"] = rms_component.x();
    j["rms_y"] = rms_component.y();
    j["rms_z"] = rms_component.z();
    if (max_z) j["max_z_score"] = *max_z;
    if (fraction_within_3se) j["fraction_within_3se"] = *fraction_within_3se;
    return j;
  }
};

struct CompareOptions {
  bool error_aware = false;
  /// Restrict to t in [t_min, t_max].
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  double grid_tol = 1e-9;
};

inline DeviationReport compare_solvers(const TimeSeries& a, const TimeSeries& b, const CompareOptions& opt = {}) {
  if (a.size() != b.size()) throw InvalidArgument("compare_solvers: time grids have different lengths");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a.t[k] - b.t[k]) > opt.grid_tol * std::max(1.0, std::abs(a.t[k])))
      throw InvalidArgument("compare_solvers: time grids differ at index " + std::to_string(k));
  const bool aware = opt.error_aware && (a.se || b.se);
  DeviationReport rep;
  Vec3 sq = Vec3::Zero();
  std::size_t within = 0;
  double max_z = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.t[k] < opt.t_min || a.t[k] > opt.t_max) continue;
    const Vec3 d = (a.r[k] - b.r[k]).cwiseAbs();
    rep.max_abs_component = rep.max_abs_component.cwiseMax(d);
    sq += d.cwiseProduct(d);
    ++rep.points;
    if (aware) {
      Vec3 var = Vec3::Zero();
      if (a.se) var += (*a.se)[k].cwiseProduct((*a.se)[k]);
      if (b.se) var += (*b.se)[k].cwiseProduct((*b.se)[k]);
      double zk = 0.0;
      for (int i = 0; i < 3; ++i) {
        if (var(i) > 0) zk = std::max(zk, d(i) / std::sqrt(var(i)));
        else if (d(i) > 0) zk = std::numeric_limits<double>::infinity();
      }
      max_z = std::max(max_z, zk);
      if (zk <= 3.0) ++within;
    }
  }
  if (rep.points > 0) {
    rep.rms_component = (sq / static_cast<double>(rep.points)).cwiseSqrt();
    rep.rms = std::sqrt(sq.sum() / (3.0 * static_cast<double>(rep.points)));
  }
  rep.max_abs = rep.max_abs_component.maxCoeff();
  if (aware) {
    rep.max_z = max_z;
    rep.fraction_within_3se = rep.points ? static_cast<double>(within) / static_cast<double>(rep.points) : 1.0;
  }
  return rep;
}

}  // namespace tclq
