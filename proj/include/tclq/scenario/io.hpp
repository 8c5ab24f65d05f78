#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "tclq/core/types.hpp"
#include "tclq/error.hpp"

namespace tclq {

enum class OutputFormat { csv, json };

inline OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw InvalidArgument("unknown output format '" + s + "' (expected csv or json)");
}

inline const char* extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

/// A Bloch trajectory with its provenance. `se` holds per-component
/// standard errors for stochastic solvers.
struct TimeSeries {
  std::string solver;
  std::string frame = "rotating";
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<double> t;
  std::vector<Vec3> r;
  std::optional<std::vector<Vec3>> se;

  std::size_t size() const { return t.size(); }
};

/// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError(context + ": cannot parse number '" + std::string(s) + "'");
  return v;
}

inline void write_csv(const TimeSeries& ts, std::ostream& os) {
  os << "# solver: " << ts.solver << '\n';
  os << "# frame: " << ts.frame << '\n';
  os << "# meta: " << ts.meta.dump() << '\n';
  os << "t,r_x,r_y,r_z,frame";
  if (ts.se) os << ",se_x,se_y,se_z";
  os << '\n';
  for (std::size_t k = 0; k < ts.size(); ++k) {
    os << format_double(ts.t[k]);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(ts.r[k](i));
    os << ',' << ts.frame;
    if (ts.se)
      for (int i = 0; i < 3; ++i) os << ',' << format_double((*ts.se)[k](i));
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const TimeSeries& ts) {
  nlohmann::ordered_json j;
  j["solver"] = ts.solver;
  j["frame"] = ts.frame;
  j["meta"] = ts.meta;
  j["t"] = ts.t;
  const char* names[3] = {"r_x", "r_y", "r_z"};
  const char* se_names[3] = {"se_x", "se_y", "se_z"};
  for (int i = 0; i < 3; ++i) {
    std::vector<double> c;
    c.reserve(ts.size());
    for (const auto& v : ts.r) c.push_back(v(i));
    j[names[i]] = c;
  }
  if (ts.se)
    for (int i = 0; i < 3; ++i) {
      std::vector<double> c;
      for (const auto& v : *ts.se) c.push_back(v(i));
      j[se_names[i]] = c;
    }
  return j;
}

inline void emit_timeseries(const TimeSeries& ts, const std::filesystem::path& path, OutputFormat fmt) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  if (fmt == OutputFormat::csv)
    write_csv(ts, os);
  else
    os << to_json(ts).dump(1) << '\n';
  if (!os) throw IoError("write failed for " + path.string());
}

inline TimeSeries read_csv(std::istream& is, const std::string& name) {
  TimeSeries ts;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# solver: ", 0) == 0) ts.solver = line.substr(10);
      else if (line.rfind("# frame: ", 0) == 0) ts.frame = line.substr(9);
      else if (line.rfind("# meta: ", 0) == 0) ts.meta = nlohmann::ordered_json::parse(line.substr(8), nullptr, false);
      continue;
    }
    std::vector<std::string_view> f;
    std::string_view sv(line);
    for (std::size_t pos = 0;;) {
      const auto c = sv.find(',', pos);
      f.push_back(sv.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
      if (c == std::string_view::npos) break;
      pos = c + 1;
    }
    if (!header) {
      if (f.size() < 4 || f[0] != "t") throw IoError(name + ": missing CSV header");
      header = true;
      if (f.size() >= 8) ts.se.emplace();
      continue;
    }
    const std::string ctx = name + ":" + std::to_string(line_no);
    if (f.size() < 4) throw IoError(ctx + ": too few columns");
    ts.t.push_back(parse_double(f[0], ctx));
    ts.r.emplace_back(parse_double(f[1], ctx), parse_double(f[2], ctx), parse_double(f[3], ctx));
    if (f.size() >= 5) ts.frame = std::string(f[4]);
    if (ts.se) {
      if (f.size() < 8) throw IoError(ctx + ": missing standard-error columns");
      ts.se->emplace_back(parse_double(f[5], ctx), parse_double(f[6], ctx), parse_double(f[7], ctx));
    }
  }
  if (!header) throw IoError(name + ": missing CSV header");
  return ts;
}

inline TimeSeries from_json(const nlohmann::ordered_json& j) {
  TimeSeries ts;
  ts.solver = j.value("solver", "");
  ts.frame = j.value("frame", "rotating");
  if (j.contains("meta")) ts.meta = j["meta"];
  ts.t = j.at("t").get<std::vector<double>>();
  const auto x = j.at("r_x").get<std::vector<double>>();
  const auto y = j.at("r_y").get<std::vector<double>>();
  const auto z = j.at("r_z").get<std::vector<double>>();
  if (x.size() != ts.t.size() || y.size() != ts.t.size() || z.size() != ts.t.size())
    throw IoError("JSON time series columns have different lengths");
  for (std::size_t k = 0; k < ts.t.size(); ++k) ts.r.emplace_back(x[k], y[k], z[k]);
  if (j.contains("se_x")) {
    const auto a = j.at("se_x").get<std::vector<double>>();
    const auto b = j.at("se_y").get<std::vector<double>>();
    const auto c = j.at("se_z").get<std::vector<double>>();
    ts.se.emplace();
    for (std::size_t k = 0; k < a.size(); ++k) ts.se->emplace_back(a[k], b[k], c[k]);
  }
  return ts;
}

/// Reads a series written by emit_timeseries; the format follows the
/// file extension.
inline TimeSeries read_timeseries(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  if (path.extension() == ".json") {
    try {
      return from_json(nlohmann::ordered_json::parse(is));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return read_csv(is, path.string());
}

}  // namespace tclq
