#include "glqlab/closed_loop.hpp"

#include <cmath>
#include <limits>

namespace glqlab {

namespace {

long aligned_steps(double span, double dt, const char* who) {
  const long steps = std::lround(span / dt);
  if (steps < 1 || std::fabs(static_cast<double>(steps) * dt - span) > 1e-9 * std::max(1.0, span))
    throw std::invalid_argument(std::string(who) + ": horizon must be a positive multiple of dt");
  return steps;
}

Matrix control_gain(const GlqProblem& pb) {
  const Matrix ktk = pb.K.transpose() * pb.K;
  return solve_linear_many(ktk, pb.B.transpose());  // (K*K)^{-1} B^T
}

}  // namespace

int AdjointArc::index_of(double t) const {
  const long idx = std::lround(t / dt);
  if (idx < 0 || idx >= static_cast<long>(values.size()) ||
      std::fabs(t - static_cast<double>(idx) * dt) > 1e-9 * std::max(1.0, std::fabs(t)))
    throw std::invalid_argument("AdjointArc: time not on the stored grid");
  return static_cast<int>(idx);
}

AdjointArc integrate_adjoint(const GlqProblem& pb, const RiccatiSolution& riccati, const Vec& w,
                             double T, double dt) {
  const long steps = aligned_steps(T, dt, "integrate_adjoint");
  if (riccati.t_max() < T - 1e-9)
    throw std::invalid_argument("integrate_adjoint: Riccati solution does not cover [0, T]");
  const double half_ratio = 0.5 * dt / riccati.dt;
  if (std::fabs(half_ratio - std::lround(half_ratio)) > 1e-9)
    throw std::invalid_argument("integrate_adjoint: Riccati grid does not contain RK4 stage times");

  const Matrix at = pb.A.transpose();
  const Matrix gain = control_gain(pb);
  const Matrix bg = pb.B * gain;  // B (K*K)^{-1} B^T
  auto field = [&](double t, const Vec& p) {
    const Matrix& pt = riccati.at_time(t);
    return vec_sub(at * p, pt * (bg * p));
  };

  AdjointArc arc;
  arc.dt = dt;
  arc.values.reserve(static_cast<size_t>(steps) + 1);
  arc.values.push_back(w);
  Vec p = w;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    Vec k1 = field(t, p);
    Vec y = p;
    vec_axpy(0.5 * dt, k1, y);
    Vec k2 = field(t + 0.5 * dt, y);
    y = p;
    vec_axpy(0.5 * dt, k2, y);
    Vec k3 = field(t + 0.5 * dt, y);
    y = p;
    vec_axpy(dt, k3, y);
    Vec k4 = field(t + dt, y);
    for (size_t i = 0; i < p.size(); ++i)
      p[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!all_finite(p)) throw NonFiniteState("integrate_adjoint: blow-up", t);
    arc.values.push_back(p);
  }
  return arc;
}

Trajectory solve_glq_shared(const GlqProblem& pb, const Vec& x0, double T, double dt,
                            const SteadyStateResult& steady, const RiccatiSolution& riccati) {
  if (static_cast<int>(x0.size()) != pb.n())
    throw DimensionMismatch("solve_glq: x0 size mismatch");
  const long steps = aligned_steps(T, dt, "solve_glq");

  const AdjointArc adjoint = integrate_adjoint(pb, riccati, steady.w, T, 0.5 * dt);
  const Matrix gain = control_gain(pb);

  auto control_at = [&](double t, const Vec& x) {
    // u_e - (K*K)^{-1} B^T [ P(T-t)(x - x_e) + p(T-t) ]
    const double back = T - t;
    Vec arg = riccati.at_time(back) * vec_sub(x, steady.x_e);
    arg = vec_add(arg, adjoint.at_time(back));
    return vec_sub(steady.u_e, gain * arg);
  };
  auto field = [&](double t, const Vec& x) {
    return vec_add(pb.A * x, pb.B * control_at(t, x));
  };

  Trajectory traj;
  traj.dt = dt;
  traj.reference = steady;
  traj.adjoint = adjoint;
  traj.grid.push_back(0.0);
  traj.states.push_back(x0);
  traj.controls.push_back(control_at(0.0, x0));
  traj.last_finite_time = 0.0;

  Vec x = x0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    Vec k1 = field(t, x);
    Vec y = x;
    vec_axpy(0.5 * dt, k1, y);
    Vec k2 = field(t + 0.5 * dt, y);
    y = x;
    vec_axpy(0.5 * dt, k2, y);
    Vec k3 = field(t + 0.5 * dt, y);
    y = x;
    vec_axpy(dt, k3, y);
    Vec k4 = field(t + dt, y);
    for (size_t i = 0; i < x.size(); ++i)
      x[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double tn = static_cast<double>(k + 1) * dt;
    if (!all_finite(x)) {
      traj.finite = false;
      traj.cost = std::numeric_limits<double>::infinity();
      return traj;
    }
    traj.grid.push_back(tn);
    traj.states.push_back(x);
    traj.controls.push_back(control_at(tn, x));
    traj.last_finite_time = tn;
  }
  traj.cost = total_cost(pb, traj.states, traj.controls, dt);
  return traj;
}

Trajectory solve_glq(const GlqProblem& pb, const Vec& x0, double T, double dt) {
  const SteadyStateResult steady = solve_steady(pb);
  const RiccatiSolution riccati = integrate_dre(pb, T, 0.25 * dt);
  return solve_glq_shared(pb, x0, T, dt, steady, riccati);
}

Trajectory solve_lq(const GlqProblem& pb, const Vec& x0, double T, double dt) {
  return solve_glq(lq_reduction(pb), x0, T, dt);
}

double cost_identity_residual(const GlqProblem& problem, const Vec& x0,
                              const std::function<Vec(double)>& control, double T, double dt) {
  const GlqProblem pb = lq_reduction(problem);
  aligned_steps(T, dt, "cost_identity_residual");
  const RiccatiSolution riccati = integrate_dre(pb, T, 0.25 * dt);
  const Matrix gain = control_gain(pb);

  auto field = [&](double t, const Vec& x) { return vec_add(pb.A * x, pb.B * control(t)); };
  OdeArc arc = rk4_integrate(field, x0, 0.0, T, dt);
  if (!arc.finite) throw NonFiniteState("cost_identity_residual: open-loop blow-up", arc.last_finite_time);

  std::vector<Vec> us(arc.states.size());
  std::vector<double> completion(arc.states.size());
  for (size_t i = 0; i < arc.states.size(); ++i) {
    const double t = static_cast<double>(i) * dt;
    us[i] = control(t);
    // ||K(u + (K*K)^{-1} B^T P(T-t) x)||^2
    const Vec shift = gain * (riccati.at_time(T - t) * arc.states[i]);
    const Vec ku = pb.K * vec_add(us[i], shift);
    completion[i] = dot(ku, ku);
  }

  const double j = total_cost(pb, arc.states, us, dt);
  const double square_term = simpson_integrate(completion, dt);
  const Matrix& pT = riccati.values.back();
  const double quad = dot(pT * x0, x0);
  return std::fabs(j - square_term - quad) / (1.0 + std::fabs(j));
}

}  // namespace glqlab
