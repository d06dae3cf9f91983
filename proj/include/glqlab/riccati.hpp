#pragma once

#include "glqlab/glq.hpp"

namespace glqlab {

/// Forward solution of dP/dt = A*P + PA - PB(K*K)^{-1}B*P + C*C, P(0) = 0,
/// stored on a uniform grid. Consumers index backward as P(T - t).
struct RiccatiSolution {
  double dt = 0.0;
  std::vector<Matrix> values;          // P(i * dt)
  double symmetrization_drift = 0.0;   // max |P - P^T| seen before re-symmetrizing

  double t_max() const { return dt * static_cast<double>(values.size() - 1); }
  int index_of(double t) const;        // exact grid lookup; throws off-grid
  const Matrix& at_time(double t) const { return values[static_cast<size_t>(index_of(t))]; }
};

/// RK4 integration with per-step symmetrization. Throws NonFiniteState on
/// blow-up (possible only for pathological step sizes).
RiccatiSolution integrate_dre(const GlqProblem& problem, double horizon, double dt);

/// Residual of the variation-of-constants form of the solution at time t:
/// || P(t)x0 - int_0^t e^{sA*}C*C e^{sA}x0 ds
///          + int_0^t e^{(t-s)A*}P(s)B(K*K)^{-1}B*P(s)e^{(t-s)A}x0 ds ||.
double mild_residual(const GlqProblem& problem, const RiccatiSolution& sol, double t,
                     const Vec& x0);

enum class DreLimitStatus { Converged, NotConverged, Diverged };

struct DreLimit {
  DreLimitStatus status = DreLimitStatus::NotConverged;
  Matrix value;          // last (finite) iterate; the limit when Converged
  double t_reached = 0.0;
  double last_delta = 0.0;  // ||P(t) - P(t-1)||_max at the final check
};

/// Integrates until ||P(t+1) - P(t)|| < tol or t_max is reached; divergence
/// (non-finite growth) is flagged rather than thrown.
DreLimit dre_limit(const GlqProblem& problem, double dt, double tol, double t_max);

}  // namespace glqlab
