#pragma once

#include "glqlab/glq.hpp"

namespace glqlab {

/// Piecewise-constant control parameterization with exact per-segment
/// propagation through the matrix exponential. Shares no integrator with the
/// feedback solver, so agreement between the two is a genuine certificate.
struct TranscribedProblem {
  GlqProblem problem;
  Vec x0;
  double T = 0.0;
  int segments = 0;            // N >= 2, segment length T/N
  std::vector<Vec> controls;   // N piecewise-constant m-vectors
  int substeps = 10;           // even; quadrature subgrid per segment
};

struct SimulationResult {
  std::vector<Vec> knots;  // states at segment boundaries, N+1 entries
  double cost = 0.0;
};

SimulationResult simulate(const TranscribedProblem& tp);

/// Exact gradient of the discretized cost with respect to each segment
/// control, by backward adjoint recursion.
std::vector<Vec> gradient(const TranscribedProblem& tp);

enum class OptimizeStatus { Converged, BudgetExhausted };

struct OptimizeResult {
  OptimizeStatus status = OptimizeStatus::Converged;
  std::vector<Vec> controls;
  double cost = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;
};

/// Conjugate-gradient minimization of the convex quadratic discretized cost.
OptimizeResult optimize(const TranscribedProblem& tp, int max_iter, double tol);

}  // namespace glqlab
