#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tclq/tclq.hpp"

namespace {

struct CommonFlags {
  std::optional<std::string> format;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out-dir", f.out_dir, "Output directory");
  app->add_option("--threads", f.threads, "Worker threads for Monte Carlo (0 = all cores)");
  app->add_option("--seed", f.seed, "Master random seed");
}

void apply(tclq::ScenarioConfig& c, const CommonFlags& f) {
  if (f.format) c.format = tclq::format_from_string(*f.format);
  if (f.out_dir) c.out_dir = *f.out_dir;
  if (f.threads) c.threads = *f.threads;
  if (f.seed) c.seed = *f.seed;
}

int execute(const tclq::ScenarioConfig& c) {
  const auto res = tclq::run_scenario(c);
  for (const auto& [solver, msg] : res.failures) std::cerr << "solver " << solver << " failed: " << msg << '\n';
  for (const auto& t : res.thresholds) {
    std::cout << (t.passed ? "ok    " : "FAIL  ") << t.spec.kind << ' ' << t.spec.a << " vs " << t.spec.b;
    if (!t.spec.worse.empty()) std::cout << " (worse: " << t.spec.worse << ')';
    std::cout << " [" << t.spec.component << ", " << t.spec.frame << "] value=" << t.value << " reference=" << t.reference;
    if (!t.message.empty()) std::cout << " (" << t.message << ')';
    std::cout << '\n';
  }
  for (const auto& p : res.files) std::cout << "wrote " << p.string() << '\n';
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-local master equation benchmarks for driven dissipative qubits"};
  app.set_version_flag("--version", std::string(TCLQ_VERSION));
  app.require_subcommand(1);

  CommonFlags run_flags, preset_flags;
  std::string config_path, preset_name, cmp_a, cmp_b;
  bool print_config = false, error_aware = false;
  std::optional<double> cmp_max;
  std::vector<double> cmp_window;

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON configuration file");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  add_common(run, run_flags);

  auto* preset = app.add_subcommand("preset", "Run a built-in figure scenario");
  preset->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember({"fig2", "fig3", "fig5"}));
  preset->add_flag("--print-config", print_config, "Print the preset configuration and exit");
  add_common(preset, preset_flags);

  auto* cmp = app.add_subcommand("compare", "Compare two emitted time series");
  cmp->add_option("a", cmp_a, "First series")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", cmp_b, "Second series")->required()->check(CLI::ExistingFile);
  cmp->add_flag("--error-aware", error_aware, "Divide deviations by the combined standard errors");
  cmp->add_option("--max", cmp_max, "Fail with exit code 2 if the max-abs deviation exceeds this");
  cmp->add_option("--window", cmp_window, "Restrict to t_min t_max")->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tclq::kExitError;
  }

  try {
    if (*run) {
      std::ifstream is(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << '\n';
        return tclq::kExitError;
      }
      auto c = tclq::config_from_json(j);
      apply(c, run_flags);
      return execute(c);
    }
    if (*preset) {
      auto c = tclq::presets::by_name(preset_name);
      apply(c, preset_flags);
      if (print_config) {
        std::cout << tclq::to_json(c).dump(2) << '\n';
        return tclq::kExitOk;
      }
      return execute(c);
    }
    if (*cmp) {
      const auto a = tclq::read_timeseries(cmp_a);
      const auto b = tclq::read_timeseries(cmp_b);
      tclq::CompareOptions o;
      o.error_aware = error_aware;
      if (cmp_window.size() == 2) {
        o.t_min = cmp_window[0];
        o.t_max = cmp_window[1];
      }
      const auto rep = tclq::compare_solvers(a, b, o);
      std::cout << rep.to_json().dump(2) << '\n';
      if (cmp_max && rep.max_abs > *cmp_max) return tclq::kExitThreshold;
      return tclq::kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tclq::kExitError;
  }
  return tclq::kExitError;
}
