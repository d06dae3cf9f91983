#include "glqlab/riccati.hpp"

#include <cmath>

namespace glqlab {

namespace {

struct DreOperator {
  Matrix at;  // A^T
  Matrix a;
  Matrix s;  // B (K*K)^{-1} B^T
  Matrix q;  // C^T C

  explicit DreOperator(const GlqProblem& pb)
      : at(pb.A.transpose()),
        a(pb.A),
        q(pb.C.transpose() * pb.C) {
    const Matrix ktk = pb.K.transpose() * pb.K;
    const Matrix ktk_inv = solve_linear_many(ktk, Matrix::identity(pb.m()));
    s = pb.B * ktk_inv * pb.B.transpose();
  }

  Matrix rhs(const Matrix& p) const { return at * p + p * a - p * s * p + q; }
};

double asymmetry(const Matrix& p) {
  double m = 0.0;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = i + 1; j < p.cols(); ++j) m = std::max(m, std::fabs(p(i, j) - p(j, i)));
  return m;
}

void symmetrize(Matrix& p) {
  for (int i = 0; i < p.rows(); ++i)
    for (int j = i + 1; j < p.cols(); ++j) {
      const double avg = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = avg;
      p(j, i) = avg;
    }
}

// One RK4 step of the matrix Riccati flow, symmetrized; returns the asymmetry
// removed by the projection.
double dre_step(const DreOperator& op, Matrix& p, double h) {
  const Matrix k1 = op.rhs(p);
  const Matrix k2 = op.rhs(p + (0.5 * h) * k1);
  const Matrix k3 = op.rhs(p + (0.5 * h) * k2);
  const Matrix k4 = op.rhs(p + h * k3);
  p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  const double drift = asymmetry(p);
  symmetrize(p);
  return drift;
}

}  // namespace

int RiccatiSolution::index_of(double t) const {
  const long idx = std::lround(t / dt);
  if (idx < 0 || idx >= static_cast<long>(values.size()) ||
      std::fabs(t - static_cast<double>(idx) * dt) > 1e-9 * std::max(1.0, std::fabs(t)))
    throw std::invalid_argument("RiccatiSolution: time not on the stored grid");
  return static_cast<int>(idx);
}

RiccatiSolution integrate_dre(const GlqProblem& pb, double horizon, double dt) {
  if (horizon <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("integrate_dre: need horizon > 0 and dt > 0");
  const DreOperator op(pb);
  const long steps = std::lround(horizon / dt);
  if (steps < 1 || std::fabs(steps * dt - horizon) > 1e-9 * std::max(1.0, horizon))
    throw std::invalid_argument("integrate_dre: horizon must be a multiple of dt");

  RiccatiSolution sol;
  sol.dt = dt;
  sol.values.reserve(static_cast<size_t>(steps) + 1);
  Matrix p(pb.n(), pb.n());
  sol.values.push_back(p);
  for (long k = 0; k < steps; ++k) {
    const double drift = dre_step(op, p, dt);
    if (!p.all_finite())
      throw NonFiniteState("integrate_dre: Riccati flow blew up", static_cast<double>(k) * dt);
    sol.symmetrization_drift = std::max(sol.symmetrization_drift, drift);
    sol.values.push_back(p);
  }
  return sol;
}

double mild_residual(const GlqProblem& pb, const RiccatiSolution& sol, double t, const Vec& x0) {
  const int n = pb.n();
  const int k = sol.index_of(t);
  if (k == 0) return norm2(sol.values[0] * x0);  // P(0) = 0 against empty integrals

  const DreOperator op(pb);
  const Matrix e = expm(pb.A, sol.dt);
  std::vector<Matrix> powers(static_cast<size_t>(k) + 1, Matrix::identity(n));
  for (int i = 1; i <= k; ++i) powers[i] = e * powers[i - 1];

  std::vector<Vec> f1(static_cast<size_t>(k) + 1), f2(static_cast<size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    const Matrix& ei = powers[i];
    const Matrix& eki = powers[k - i];
    f1[i] = ei.transpose() * (op.q * (ei * x0));
    const Matrix& pi = sol.values[i];
    f2[i] = eki.transpose() * (pi * (op.s * (pi * (eki * x0))));
  }

  Vec lhs = sol.values[k] * x0;
  std::vector<double> comp(static_cast<size_t>(k) + 1);
  for (int d = 0; d < n; ++d) {
    for (int i = 0; i <= k; ++i) comp[i] = f1[i][d];
    lhs[d] -= simpson_integrate(comp, sol.dt);
    for (int i = 0; i <= k; ++i) comp[i] = f2[i][d];
    lhs[d] += simpson_integrate(comp, sol.dt);
  }
  return norm2(lhs);
}

DreLimit dre_limit(const GlqProblem& pb, double dt, double tol, double t_max) {
  if (tol <= 0.0 || dt <= 0.0) throw std::invalid_argument("dre_limit: need tol > 0 and dt > 0");
  const DreOperator op(pb);
  const long per_unit = std::max(1L, std::lround(1.0 / dt));
  const double h = 1.0 / static_cast<double>(per_unit);

  DreLimit out;
  Matrix p(pb.n(), pb.n());
  Matrix prev = p;
  double t = 0.0;
  while (t < t_max - 1e-9) {
    for (long k = 0; k < per_unit; ++k) {
      dre_step(op, p, h);
      if (!p.all_finite()) {
        out.status = DreLimitStatus::Diverged;
        out.value = prev;
        out.t_reached = t;
        return out;
      }
    }
    t += 1.0;
    out.last_delta = (p - prev).max_abs();
    prev = p;
    if (out.last_delta < tol) {
      out.status = DreLimitStatus::Converged;
      out.value = p;
      out.t_reached = t;
      return out;
    }
  }
  out.status = DreLimitStatus::NotConverged;
  out.value = p;
  out.t_reached = t;
  return out;
}

}  // namespace glqlab
