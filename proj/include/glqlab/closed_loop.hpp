#pragma once

#include "glqlab/riccati.hpp"
#include "glqlab/steady_state.hpp"

namespace glqlab {

/// Forward arc of dp/dt = (A* - P(t)B(K*K)^{-1}B*) p, p(0) = w. Consumers
/// index backward as p(T - t); this equals the adjoint evolution-operator
/// action that enters the feedback law, so one integration serves all t.
struct AdjointArc {
  double dt = 0.0;
  std::vector<Vec> values;  // p(i * dt)

  int index_of(double t) const;
  const Vec& at_time(double t) const { return values[static_cast<size_t>(index_of(t))]; }
};

struct Trajectory {
  double dt = 0.0;
  std::vector<double> grid;      // sample times 0, dt, ..., T
  std::vector<Vec> states;       // x*(t_i)
  std::vector<Vec> controls;     // u*(t_i), from the feedback formula
  double cost = 0.0;             // +inf when not finite
  SteadyStateResult reference;
  AdjointArc adjoint;            // integrated once per solve, kept for consumers
  bool finite = true;
  double last_finite_time = 0.0;
};

AdjointArc integrate_adjoint(const GlqProblem& problem, const RiccatiSolution& riccati,
                             const Vec& w, double T, double dt);

/// Synthesizes the optimal pair by the Riccati feedback law
///   u(t) = u_e - (K*K)^{-1}B*[ P(T-t)(x(t)-x_e) + p(T-t) ].
/// Blow-up is returned as a truncated trajectory with finite=false.
Trajectory solve_glq(const GlqProblem& problem, const Vec& x0, double T, double dt);

/// solve_glq against shared resources: `riccati` must cover [0, T] on a grid
/// aligned with dt/4 (one Riccati solve can serve many horizons).
Trajectory solve_glq_shared(const GlqProblem& problem, const Vec& x0, double T, double dt,
                            const SteadyStateResult& steady, const RiccatiSolution& riccati);

/// The z = v = 0 specialization: x_e = u_e = 0, w = 0, p = 0, and the feedback
/// reduces to u = -(K*K)^{-1}B*P(T-t)x.
Trajectory solve_lq(const GlqProblem& problem, const Vec& x0, double T, double dt);

/// Residual of the cost decomposition of the LQ functional,
///   J_T(x0,u) = int ||K(u + (K*K)^{-1}B*P(T-t)x)||^2 dt + <P(T)x0, x0>,
/// evaluated for an arbitrary control arc; relative to 1 + |J_T|.
double cost_identity_residual(const GlqProblem& problem, const Vec& x0,
                              const std::function<Vec(double)>& control, double T, double dt);

}  // namespace glqlab
