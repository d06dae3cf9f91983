#pragma once

#include "glqlab/numlin.hpp"

namespace glqlab {

struct NotCoercive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Data of the generalized LQ problem: dynamics x' = Ax + Bu and running cost
/// l(x,u) = |Cx|^2 + |Ku|^2 + 2<z,x> + 2<v,u>. Inner products are real; the
/// complex Hilbert setting is exercised only through spectra.
struct GlqProblem {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Matrix C;  // p x n
  Matrix K;  // m x m, coercive
  Vec z;     // n
  Vec v;     // m
  double coercivity = 0.0;  // smallest eigenvalue of K*K, stamped by validate()

  int n() const { return A.rows(); }
  int m() const { return B.cols(); }
  int p() const { return C.rows(); }
};

struct CostBreakdown {
  double quadratic_state = 0.0;
  double quadratic_control = 0.0;
  double linear_state = 0.0;
  double linear_control = 0.0;
  double total = 0.0;
};

/// Checks dimensions and coercivity of K; returns the smallest eigenvalue of
/// K*K and stamps it on the problem. Throws NotCoercive when it is <= 1e-12.
double validate(GlqProblem& problem);

/// Convenience constructor that validates.
GlqProblem make_problem(Matrix A, Matrix B, Matrix C, Matrix K, Vec z, Vec v);

/// The problem with z and v zeroed (same dynamics and weights).
GlqProblem lq_reduction(const GlqProblem& problem);

CostBreakdown running_cost(const GlqProblem& problem, const Vec& x, const Vec& u);

/// Composite Simpson quadrature of the running cost along uniformly sampled
/// state/control arcs.
double total_cost(const GlqProblem& problem, const std::vector<Vec>& states,
                  const std::vector<Vec>& controls, double dt);

/// |Ax + Bu|
double steady_residual(const GlqProblem& problem, const Vec& x, const Vec& u);

}  // namespace glqlab
