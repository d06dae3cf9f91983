#include "glqlab/oracle.hpp"

#include <cmath>

namespace glqlab {

namespace {

// Exact propagators for one segment and its quadrature subgrid:
// x(h) = E x(0) + F u for constant u, via expm of the block [[A, B], [0, 0]].
void variation_of_constants(const Matrix& a, const Matrix& b, double h, Matrix& e, Matrix& f) {
  const int n = a.rows();
  const int m = b.cols();
  Matrix block(n + m, n + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) block(i, j) = a(i, j);
    for (int j = 0; j < m; ++j) block(i, n + j) = b(i, j);
  }
  const Matrix eb = expm(block, h);
  e = Matrix(n, n);
  f = Matrix(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) e(i, j) = eb(i, j);
    for (int j = 0; j < m; ++j) f(i, j) = eb(i, n + j);
  }
}

struct SegmentScheme {
  Matrix e_seg, f_seg;
  Matrix e_seg_t, f_seg_t;
  std::vector<Matrix> e_pow, g;      // x_{k,j} = e_pow[j] x_k + g[j] u_k
  std::vector<Matrix> e_pow_t, g_t;
  Matrix ctc2, ktk2;                 // 2 C^T C, 2 K^T K
  Vec z2, v2;
  std::vector<double> wq;            // Simpson weights on the subgrid

  SegmentScheme(const GlqProblem& pb, double T, int segments, int substeps) {
    if (segments < 2) throw std::invalid_argument("oracle: need at least 2 segments");
    if (substeps < 2 || substeps % 2 != 0)
      throw std::invalid_argument("oracle: substeps must be even and >= 2");
    const double h_seg = T / segments;
    const double h_sub = h_seg / substeps;
    Matrix e_sub, f_sub;
    variation_of_constants(pb.A, pb.B, h_sub, e_sub, f_sub);

    e_pow.push_back(Matrix::identity(pb.n()));
    g.push_back(Matrix(pb.n(), pb.m()));
    for (int j = 1; j <= substeps; ++j) {
      e_pow.push_back(e_sub * e_pow[j - 1]);
      g.push_back(e_sub * g[j - 1] + f_sub);
    }
    e_seg = e_pow.back();
    f_seg = g.back();
    e_seg_t = e_seg.transpose();
    f_seg_t = f_seg.transpose();
    for (int j = 0; j <= substeps; ++j) {
      e_pow_t.push_back(e_pow[j].transpose());
      g_t.push_back(g[j].transpose());
    }

    ctc2 = 2.0 * (pb.C.transpose() * pb.C);
    ktk2 = 2.0 * (pb.K.transpose() * pb.K);
    z2 = vec_scale(2.0, pb.z);
    v2 = vec_scale(2.0, pb.v);

    wq.assign(substeps + 1, 0.0);
    for (int j = 0; j <= substeps; ++j) {
      double w = (j == 0 || j == substeps) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      wq[j] = w * h_sub / 3.0;
    }
  }
};

double segment_cost(const SegmentScheme& s, const GlqProblem& pb, const Vec& xk, const Vec& uk) {
  double total = 0.0;
  for (size_t j = 0; j < s.e_pow.size(); ++j) {
    const Vec xj = vec_add(s.e_pow[j] * xk, s.g[j] * uk);
    total += s.wq[j] * running_cost(pb, xj, uk).total;
  }
  return total;
}

}  // namespace

SimulationResult simulate(const TranscribedProblem& tp) {
  if (static_cast<int>(tp.controls.size()) != tp.segments)
    throw std::invalid_argument("oracle: control count != segments");
  const SegmentScheme s(tp.problem, tp.T, tp.segments, tp.substeps);
  SimulationResult out;
  out.knots.reserve(tp.segments + 1);
  out.knots.push_back(tp.x0);
  Vec x = tp.x0;
  for (int k = 0; k < tp.segments; ++k) {
    out.cost += segment_cost(s, tp.problem, x, tp.controls[k]);
    x = vec_add(s.e_seg * x, s.f_seg * tp.controls[k]);
    out.knots.push_back(x);
  }
  return out;
}

std::vector<Vec> gradient(const TranscribedProblem& tp) {
  if (static_cast<int>(tp.controls.size()) != tp.segments)
    throw std::invalid_argument("oracle: control count != segments");
  const SegmentScheme s(tp.problem, tp.T, tp.segments, tp.substeps);
  const int n = tp.problem.n();
  const int nsub = tp.substeps;

  std::vector<Vec> knots(tp.segments + 1);
  knots[0] = tp.x0;
  for (int k = 0; k < tp.segments; ++k)
    knots[k + 1] = vec_add(s.e_seg * knots[k], s.f_seg * tp.controls[k]);

  std::vector<Vec> grad(tp.segments);
  Vec lambda(n, 0.0);  // dJ/dx at the right end of the current segment
  for (int k = tp.segments - 1; k >= 0; --k) {
    const Vec& xk = knots[k];
    const Vec& uk = tp.controls[k];
    Vec dqdx(n, 0.0);
    Vec dqdu(tp.problem.m(), 0.0);
    double wsum = 0.0;
    for (int j = 0; j <= nsub; ++j) {
      const Vec xj = vec_add(s.e_pow[j] * xk, s.g[j] * uk);
      Vec lx = vec_add(s.ctc2 * xj, s.z2);  // d l / d x at the subpoint
      vec_axpy(s.wq[j], s.e_pow_t[j] * lx, dqdx);
      vec_axpy(s.wq[j], s.g_t[j] * lx, dqdu);
      wsum += s.wq[j];
    }
    vec_axpy(wsum, vec_add(s.ktk2 * uk, s.v2), dqdu);
    grad[k] = vec_add(dqdu, s.f_seg_t * lambda);
    lambda = vec_add(dqdx, s.e_seg_t * lambda);
  }
  return grad;
}

OptimizeResult optimize(const TranscribedProblem& tp, int max_iter, double tol) {
  if (max_iter < 1) throw std::invalid_argument("oracle: max_iter must be >= 1");
  const int m = tp.problem.m();
  const int dim = tp.segments * m;

  auto flatten = [&](const std::vector<Vec>& per_segment) {
    Vec flat(dim);
    for (int k = 0; k < tp.segments; ++k)
      for (int j = 0; j < m; ++j) flat[k * m + j] = per_segment[k][j];
    return flat;
  };
  auto unflatten = [&](const Vec& flat) {
    std::vector<Vec> per(tp.segments, Vec(m));
    for (int k = 0; k < tp.segments; ++k)
      for (int j = 0; j < m; ++j) per[k][j] = flat[k * m + j];
    return per;
  };
  auto grad_at = [&](const Vec& flat) {
    TranscribedProblem probe = tp;
    probe.controls = unflatten(flat);
    return flatten(gradient(probe));
  };
  auto cost_at = [&](const Vec& flat) {
    TranscribedProblem probe = tp;
    probe.controls = unflatten(flat);
    return simulate(probe).cost;
  };

  // The discretized cost is an exact quadratic; H p is recovered without
  // cancellation as grad(p) - grad(0).
  const Vec b = grad_at(Vec(dim, 0.0));

  Vec u = flatten(tp.controls);
  Vec g = grad_at(u);
  Vec r = vec_scale(-1.0, g);
  Vec p = r;
  double rr = dot(r, r);

  OptimizeResult out;
  out.cost_history.push_back(cost_at(u));
  int it = 0;
  while (it < max_iter && std::sqrt(rr) > tol) {
    const Vec hp = vec_sub(grad_at(p), b);
    const double php = dot(p, hp);
    if (php <= 0.0) break;  // flat or indefinite direction: quadratic is minimal along p
    const double alpha = rr / php;
    vec_axpy(alpha, p, u);
    vec_axpy(-alpha, hp, r);
    const double rr_new = dot(r, r);
    p = vec_add(r, vec_scale(rr_new / rr, p));
    rr = rr_new;
    ++it;
    out.cost_history.push_back(cost_at(u));
  }
  out.iterations = it;
  out.gradient_norm = std::sqrt(rr);
  out.controls = unflatten(u);
  out.cost = out.cost_history.back();
  out.status = out.gradient_norm <= tol ? OptimizeStatus::Converged : OptimizeStatus::BudgetExhausted;
  return out;
}

}  // namespace glqlab
