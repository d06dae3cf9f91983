#include <CLI11.hpp>
#include <iostream>

#include "glqlab/runner.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  double dt = 0.0;
  double epsilon = 0.0;
  int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "run configuration file")->required();
  cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
  cmd->add_option("--dt", flags.dt, "integration step (overrides config)");
  cmd->add_option("--epsilon", flags.epsilon, "turnpike threshold (overrides config)");
  cmd->add_option("--seed", flags.seed, "seed for randomized runs (overrides config)");
}

glqlab::RunConfig resolve(const CommonFlags& flags) {
  glqlab::RunConfig cfg = glqlab::load_config(flags.config_path);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.dt > 0.0) cfg.dt = flags.dt;
  if (flags.epsilon > 0.0) cfg.epsilon = flags.epsilon;
  if (flags.seed >= 0) cfg.seed = static_cast<uint64_t>(flags.seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "glqlab: linear-quadratic optimal control laboratory.\n"
      "Exit codes: 0 ok, 2 config parse failure, 3 singular stationarity system,\n"
      "4 trajectory blow-up, 5 unreliable eigensolve."};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string heat_demo;

  CLI::App* steady = app.add_subcommand("steady", "optimal steady state and adjoint");
  add_common(steady, flags);
  CLI::App* solve = app.add_subcommand("solve", "closed-loop trajectory for one horizon");
  add_common(solve, flags);
  CLI::App* scan = app.add_subcommand("scan", "turnpike diagnostics over a horizon list");
  add_common(scan, flags);
  CLI::App* hautus = app.add_subcommand("hautus", "stabilizability/detectability report");
  add_common(hautus, flags);
  CLI::App* heat = app.add_subcommand("heat", "heat-equation demos");
  add_common(heat, flags);
  heat->add_option("--demo", heat_demo, "stable | counterexample | truncation");

  CLI11_PARSE(app, argc, argv);

  try {
    glqlab::RunConfig cfg = resolve(flags);
    if (!heat_demo.empty()) cfg.heat_demo = heat_demo;
    if (steady->parsed()) return glqlab::cmd_steady(cfg, std::cout);
    if (solve->parsed()) return glqlab::cmd_solve(cfg, std::cout);
    if (scan->parsed()) return glqlab::cmd_scan(cfg, std::cout);
    if (hautus->parsed()) return glqlab::cmd_hautus(cfg, std::cout);
    if (heat->parsed()) return glqlab::cmd_heat(cfg, std::cout);
  } catch (const glqlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return glqlab::kExitParse;
  } catch (const glqlab::KktSingular& e) {
    std::cerr << e.what() << '\n';
    return glqlab::kExitKkt;
  } catch (const glqlab::NonFiniteState& e) {
    std::cerr << e.what() << " (last finite time " << e.last_finite_time << ")\n";
    return glqlab::kExitBlowup;
  } catch (const glqlab::SpectralUnreliable& e) {
    std::cerr << e.what() << '\n';
    return glqlab::kExitSpectral;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
