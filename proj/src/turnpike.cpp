#include "glqlab/turnpike.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glqlab/structure.hpp"

namespace glqlab {

std::vector<double> deviation_curve(const Trajectory& traj, const SteadyStateResult& ref) {
  std::vector<double> d(traj.states.size());
  for (size_t i = 0; i < traj.states.size(); ++i)
    d[i] = norm2(vec_sub(traj.states[i], ref.x_e)) + norm2(vec_sub(traj.controls[i], ref.u_e));
  return d;
}

double measure_outside(const std::vector<double>& d, double dt, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("measure_outside: epsilon must be positive");
  long count = 0;
  for (size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i] > epsilon) ++count;
  return dt * static_cast<double>(count);
}

ExpFit fit_exponential(const std::vector<double>& d, double dt, double T) {
  if (T <= 4.0) throw std::invalid_argument("fit_exponential: needs T > 4 for an interior window");
  ExpFit fit;
  fit.status = ExpFit::Status::Ok;
  const size_t lo = static_cast<size_t>(std::ceil(0.10 * T / dt));
  const size_t hi = std::min(d.size() - 1, static_cast<size_t>(std::floor(0.45 * T / dt)));

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  size_t count = 0;
  for (size_t i = lo; i <= hi; ++i) {
    if (d[i] < 1e-14) {
      fit.status = ExpFit::Status::Underflow;  // decayed faster than measurable
      fit.rate = std::numeric_limits<double>::infinity();
      fit.amplitude = 0.0;
      return fit;
    }
    const double t = static_cast<double>(i) * dt;
    const double y = std::log(d[i]);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  const double slope = (count * sxy - sx * sy) / denom;
  fit.rate = -slope;

  double m = 0.0;
  for (size_t i = 0; i < d.size(); ++i) {
    const double t = static_cast<double>(i) * dt;
    const double envelope = std::exp(-fit.rate * t) + std::exp(-fit.rate * (T - t));
    if (envelope > 0.0) m = std::max(m, d[i] / envelope);
  }
  fit.amplitude = m;
  return fit;
}

TurnpikeReport horizon_scan(const GlqProblem& pb, const Vec& x0,
                            const std::vector<double>& horizons, double dt, double epsilon) {
  if (horizons.empty() || !std::is_sorted(horizons.begin(), horizons.end()))
    throw std::invalid_argument("horizon_scan: horizons must be nonempty and increasing");
  TurnpikeReport report;
  report.horizons = horizons;
  report.epsilon = epsilon;
  report.dt = dt;

  SteadyStateResult steady;
  RiccatiSolution riccati;
  try {
    steady = solve_steady(pb);
    riccati = integrate_dre(pb, horizons.back(), 0.25 * dt);
  } catch (const std::exception& e) {
    for (double T : horizons) {
      HorizonEntry entry;
      entry.T = T;
      entry.failure = e.what();
      report.entries.push_back(std::move(entry));
    }
    return report;
  }

  for (double T : horizons) {
    HorizonEntry entry;
    entry.T = T;
    try {
      const Trajectory traj = solve_glq_shared(pb, x0, T, dt, steady, riccati);
      if (!traj.finite) {
        entry.failure = "trajectory blew up at t = " + std::to_string(traj.last_finite_time);
      } else {
        entry.solved = true;
        entry.deviations = deviation_curve(traj, steady);
        entry.measure_outside = measure_outside(entry.deviations, dt, epsilon);
        const size_t mid = entry.deviations.size() / 2;
        entry.midpoint_deviation = entry.deviations[mid];
        if (T > 4.0) entry.fit = fit_exponential(entry.deviations, dt, T);
      }
    } catch (const std::exception& e) {
      entry.failure = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

double unobservable_scaling_invariance(const GlqProblem& pb, const Vec& x0,
                               const std::vector<double>& gammas, double T, double dt) {
  const ObservabilityData obs = unobservable_subspace(pb.A, pb.C);
  Vec projected(x0.size(), 0.0);
  for (const Vec& q : obs.unobservable_basis) vec_axpy(dot(q, x0), q, projected);
  if (norm2(vec_sub(x0, projected)) > 1e-8 * std::max(1.0, norm2(x0)))
    throw std::invalid_argument("unobservable_scaling_invariance: x0 is not in the unobservable subspace");

  const SteadyStateResult steady = solve_steady(pb);
  const RiccatiSolution riccati = integrate_dre(pb, T, 0.25 * dt);
  const Trajectory base = solve_glq_shared(pb, x0, T, dt, steady, riccati);

  double worst = 0.0;
  for (double gamma : gammas) {
    const Trajectory scaled = solve_glq_shared(pb, vec_scale(gamma, x0), T, dt, steady, riccati);
    for (size_t i = 0; i < base.controls.size(); ++i)
      worst = std::max(worst, norm2(vec_sub(scaled.controls[i], base.controls[i])));
  }
  return worst;
}

double trajectory_difference_residual(const GlqProblem& pb, const Vec& x0, double T, double dt) {
  const SteadyStateResult steady = solve_steady(pb);
  const RiccatiSolution riccati = integrate_dre(pb, T, 0.25 * dt);
  const Trajectory two = solve_glq_shared(pb, vec_add(steady.x_e, vec_scale(2.0, x0)), T, dt,
                                          steady, riccati);
  const Trajectory one = solve_glq_shared(pb, vec_add(steady.x_e, x0), T, dt, steady, riccati);

  const GlqProblem lq = lq_reduction(pb);
  const SteadyStateResult lq_steady = solve_steady(lq);
  const Trajectory ref = solve_glq_shared(lq, x0, T, dt, lq_steady, riccati);

  double worst = 0.0;
  for (size_t i = 0; i < ref.states.size(); ++i) {
    const Vec diff = vec_sub(two.states[i], one.states[i]);
    worst = std::max(worst, norm2(vec_sub(diff, ref.states[i])));
  }
  return worst;
}

}  // namespace glqlab
