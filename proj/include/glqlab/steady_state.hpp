#pragma once

#include "glqlab/glq.hpp"

namespace glqlab {

struct KktSingular : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Optimal steady state (x_e, u_e) of the constrained problem
/// min l(x,u) s.t. Ax + Bu = 0, with adjoint steady state w satisfying
/// A*w = z + C*C x_e and B*w = v + K*K u_e.
struct SteadyStateResult {
  Vec x_e;
  Vec u_e;
  Vec w;
  double kkt_residual = 0.0;
  bool unique = true;
  bool kkt_singular = false;  // direct solve failed; ridge fallback was used
};

/// Assembles and solves the (2n+m) x (2n+m) stationarity system
///   C*C x - A* w = -z,  K*K u - B* w = -v,  A x + B u = 0.
/// When the system is numerically singular, falls back to a ridge-regularized
/// least-squares solve and reports unique=false via check_uniqueness.
SteadyStateResult solve_steady(const GlqProblem& problem);

/// True iff the stacked matrix [A; C] has trivial numerical kernel.
bool check_uniqueness(const GlqProblem& problem, double tol = 1e-9);

struct ProjectedSteadyForm {
  int dim = 0;                  // dimension of V = ker [A B]
  double min_eigenvalue = 0.0;  // smallest eigenvalue of the projected form (0 when trivial)
};

/// Smallest eigenvalue of Q* diag(C*C, K*K) Q with Q an orthonormal basis of
/// the steady manifold V = ker [A B].
ProjectedSteadyForm projected_operator_spectrum(const GlqProblem& problem, double tol = 1e-9);

}  // namespace glqlab
