#pragma once

#include <map>
#include <optional>
#include <string>

#include "glqlab/heat_demo.hpp"

namespace glqlab {

/// Parse failure with the offending line number; the CLI maps it to exit 2.
struct ConfigError : std::runtime_error {
  int line;
  ConfigError(const std::string& what, int line_number)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
};

/// Flat key-value run description; matrices are bracketed row lists, e.g.
///   A = [[-1, 0], [0, -2]]
///   horizons = [5, 10, 20, 40]
struct RunConfig {
  enum class Source { Inline, Heat };
  Source source = Source::Inline;

  // Inline problem data.
  Matrix A, B, C, K;
  Vec z, v;

  Vec x0;                          // empty: decaying preset for heat problems
  std::vector<double> horizons{10.0};
  double T = 0.0;                  // single-solve horizon; 0 = horizons.front()
  double dt = 1e-3;
  double epsilon = 0.1;
  uint64_t seed = 1;
  std::string out_dir = ".";

  HeatConfig heat;
  std::string heat_demo = "stable";      // stable | counterexample | truncation
  std::vector<int> n_list{4, 8, 16};

  double solve_horizon() const { return T > 0.0 ? T : horizons.front(); }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

/// Emits a config that re-parses to the same problem (round-trip format).
std::string emit_config(const RunConfig& cfg);

/// Builds the problem a run refers to (inline matrices or the heat model).
GlqProblem problem_from_config(const RunConfig& cfg);

/// The run's initial state: explicit x0, or the 1/k preset for heat problems.
Vec initial_state_from_config(const RunConfig& cfg, const GlqProblem& pb);

}  // namespace glqlab
