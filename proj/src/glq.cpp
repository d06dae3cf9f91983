#include "glqlab/glq.hpp"

#include <cmath>

namespace glqlab {

double validate(GlqProblem& problem) {
  const int n = problem.A.rows();
  const int m = problem.B.cols();
  const int p = problem.C.rows();
  if (!problem.A.square()) throw DimensionMismatch("validate: A must be square");
  if (problem.B.rows() != n) throw DimensionMismatch("validate: B row count != n");
  if (problem.C.cols() != n) throw DimensionMismatch("validate: C column count != n");
  if (problem.K.rows() != m || problem.K.cols() != m)
    throw DimensionMismatch("validate: K must be m x m");
  if (static_cast<int>(problem.z.size()) != n) throw DimensionMismatch("validate: z size != n");
  if (static_cast<int>(problem.v.size()) != m) throw DimensionMismatch("validate: v size != m");
  if (!problem.A.all_finite() || !problem.B.all_finite() || !problem.C.all_finite() ||
      !problem.K.all_finite() || !all_finite(problem.z) || !all_finite(problem.v))
    throw DimensionMismatch("validate: non-finite entries");
  (void)p;

  const Matrix ktk = problem.K.transpose() * problem.K;
  const double m_coerc = symmetric_min_eigenvalue(ktk);
  if (m_coerc <= 1e-12) throw NotCoercive("validate: smallest eigenvalue of K*K <= 1e-12");
  problem.coercivity = m_coerc;
  return m_coerc;
}

GlqProblem make_problem(Matrix A, Matrix B, Matrix C, Matrix K, Vec z, Vec v) {
  GlqProblem p{std::move(A), std::move(B), std::move(C), std::move(K), std::move(z), std::move(v), 0.0};
  validate(p);
  return p;
}

GlqProblem lq_reduction(const GlqProblem& problem) {
  GlqProblem lq = problem;
  lq.z.assign(lq.z.size(), 0.0);
  lq.v.assign(lq.v.size(), 0.0);
  return lq;
}

CostBreakdown running_cost(const GlqProblem& problem, const Vec& x, const Vec& u) {
  if (static_cast<int>(x.size()) != problem.n() || static_cast<int>(u.size()) != problem.m())
    throw DimensionMismatch("running_cost: state or control size mismatch");
  CostBreakdown c;
  const Vec cx = problem.C * x;
  const Vec ku = problem.K * u;
  c.quadratic_state = dot(cx, cx);
  c.quadratic_control = dot(ku, ku);
  c.linear_state = 2.0 * dot(problem.z, x);
  c.linear_control = 2.0 * dot(problem.v, u);
  c.total = c.quadratic_state + c.quadratic_control + c.linear_state + c.linear_control;
  return c;
}

double total_cost(const GlqProblem& problem, const std::vector<Vec>& states,
                  const std::vector<Vec>& controls, double dt) {
  if (states.size() != controls.size() || states.size() < 2)
    throw std::invalid_argument("total_cost: need matching arcs with >= 2 samples");
  std::vector<double> ell(states.size());
  for (size_t i = 0; i < states.size(); ++i)
    ell[i] = running_cost(problem, states[i], controls[i]).total;
  return simpson_integrate(ell, dt);
}

double steady_residual(const GlqProblem& problem, const Vec& x, const Vec& u) {
  if (static_cast<int>(x.size()) != problem.n() || static_cast<int>(u.size()) != problem.m())
    throw DimensionMismatch("steady_residual: state or control size mismatch");
  return norm2(vec_add(problem.A * x, problem.B * u));
}

}  // namespace glqlab
