#include "glqlab/steady_state.hpp"

#include <cmath>

namespace glqlab {

namespace {

Matrix assemble_kkt(const GlqProblem& pb) {
  const int n = pb.n();
  const int m = pb.m();
  const Matrix ctc = pb.C.transpose() * pb.C;
  const Matrix ktk = pb.K.transpose() * pb.K;
  Matrix kkt(2 * n + m, 2 * n + m);
  // Rows 0..n-1:        C*C x            - A^T w = -z
  // Rows n..n+m-1:               K*K u   - B^T w = -v
  // Rows n+m..2n+m-1:   A x   + B u              = 0
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      kkt(i, j) = ctc(i, j);
      kkt(i, n + m + j) = -pb.A(j, i);
      kkt(n + m + i, j) = pb.A(i, j);
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) kkt(n + i, n + j) = ktk(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) kkt(n + i, n + m + j) = -pb.B(j, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) kkt(n + m + i, n + j) = pb.B(i, j);
  return kkt;
}

Vec assemble_rhs(const GlqProblem& pb) {
  const int n = pb.n();
  const int m = pb.m();
  Vec rhs(2 * n + m, 0.0);
  for (int i = 0; i < n; ++i) rhs[i] = -pb.z[i];
  for (int i = 0; i < m; ++i) rhs[n + i] = -pb.v[i];
  return rhs;
}

}  // namespace

SteadyStateResult solve_steady(const GlqProblem& pb) {
  const int n = pb.n();
  const int m = pb.m();
  const Matrix kkt = assemble_kkt(pb);
  const Vec rhs = assemble_rhs(pb);

  Vec sol;
  bool singular = false;
  try {
    sol = solve_linear(kkt, rhs);
  } catch (const SingularMatrix&) {
    // Ridge-regularized normal equations: degrade gracefully when the steady
    // manifold carries a flat cost direction or [A B] loses rank.
    singular = true;
    const Matrix kt = kkt.transpose();
    Matrix normal = kt * kkt;
    // Relative ridge, kept two orders above the LU rejection threshold.
    const double ridge = 1e-10 * std::max(1.0, normal.max_abs());
    for (int i = 0; i < normal.rows(); ++i) normal(i, i) += ridge;
    try {
      sol = solve_linear(normal, kt * rhs);
    } catch (const SingularMatrix&) {
      throw KktSingular("solve_steady: stationarity system singular beyond the ridge fallback");
    }
  }

  SteadyStateResult res;
  res.kkt_singular = singular;
  res.x_e.assign(sol.begin(), sol.begin() + n);
  res.u_e.assign(sol.begin() + n, sol.begin() + n + m);
  res.w.assign(sol.begin() + n + m, sol.end());
  res.unique = check_uniqueness(pb);

  // Residual as the sum of block norms, so each optimality relation of the
  // adjoint characterization is individually dominated by it.
  const Vec full = vec_sub(kkt * sol, rhs);
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  for (int i = 0; i < n; ++i) r1 += full[i] * full[i];
  for (int i = 0; i < m; ++i) r2 += full[n + i] * full[n + i];
  for (int i = 0; i < n; ++i) r3 += full[n + m + i] * full[n + m + i];
  res.kkt_residual = std::sqrt(r1) + std::sqrt(r2) + std::sqrt(r3);
  return res;
}

bool check_uniqueness(const GlqProblem& pb, double tol) {
  const int n = pb.n();
  const int p = pb.p();
  Matrix stacked(n + p, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) stacked(i, j) = pb.A(i, j);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n; ++j) stacked(n + i, j) = pb.C(i, j);
  return kernel_basis(stacked, tol).empty();
}

ProjectedSteadyForm projected_operator_spectrum(const GlqProblem& pb, double tol) {
  const int n = pb.n();
  const int m = pb.m();
  Matrix ab(n, n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ab(i, j) = pb.A(i, j);
    for (int j = 0; j < m; ++j) ab(i, n + j) = pb.B(i, j);
  }
  const std::vector<Vec> basis = kernel_basis(ab, tol);

  ProjectedSteadyForm out;
  out.dim = static_cast<int>(basis.size());
  if (basis.empty()) return out;  // trivial steady manifold, flagged by dim == 0

  const Matrix ctc = pb.C.transpose() * pb.C;
  const Matrix ktk = pb.K.transpose() * pb.K;
  const int k = out.dim;
  Matrix form(k, k);
  for (int a = 0; a < k; ++a) {
    const Vec xa(basis[a].begin(), basis[a].begin() + n);
    const Vec ua(basis[a].begin() + n, basis[a].end());
    const Vec cx = ctc * xa;
    const Vec ku = ktk * ua;
    for (int b = 0; b < k; ++b) {
      const Vec xb(basis[b].begin(), basis[b].begin() + n);
      const Vec ub(basis[b].begin() + n, basis[b].end());
      form(a, b) = dot(cx, xb) + dot(ku, ub);
    }
  }
  out.min_eigenvalue = symmetric_min_eigenvalue(form);
  return out;
}

}  // namespace glqlab
