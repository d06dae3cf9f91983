#pragma once

#include "glqlab/closed_loop.hpp"

namespace glqlab {

/// d(t_i) = |x*(t_i) - x_e| + |u*(t_i) - u_e|
std::vector<double> deviation_curve(const Trajectory& traj, const SteadyStateResult& ref);

/// Lebesgue measure estimate of {t : d(t) > epsilon}, left-endpoint rule.
double measure_outside(const std::vector<double>& d, double dt, double epsilon);

struct ExpFit {
  enum class Status { NotComputed, Ok, Underflow } status = Status::NotComputed;
  double amplitude = 0.0;  // M = max_t d(t) / (e^{-kt} + e^{-k(T-t)})
  double rate = 0.0;       // k; +inf sentinel when the window underflows
};

/// Least-squares line fit of log d on the window [0.1 T, 0.45 T]; the window
/// avoids the entry layer and the exit layer where e^{-k(T-t)} dominates.
ExpFit fit_exponential(const std::vector<double>& d, double dt, double T);

struct HorizonEntry {
  double T = 0.0;
  bool solved = false;
  std::string failure;  // set when !solved
  double measure_outside = 0.0;
  double midpoint_deviation = 0.0;
  ExpFit fit;
  std::vector<double> deviations;  // full curve, sample step dt
};

struct TurnpikeReport {
  std::vector<double> horizons;
  double epsilon = 0.0;
  double dt = 0.0;
  std::vector<HorizonEntry> entries;
};

/// Runs the feedback solver per horizon (one shared steady state and Riccati
/// solution) and assembles the diagnostics. Per-horizon failures are recorded
/// as entries; the scan continues.
TurnpikeReport horizon_scan(const GlqProblem& problem, const Vec& x0,
                            const std::vector<double>& horizons, double dt, double epsilon);

/// Max sup-norm discrepancy between u*(., gamma x0) and u*(., x0) for x0 in
/// the unobservable subspace (verified to residual 1e-8 before solving).
double unobservable_scaling_invariance(const GlqProblem& problem, const Vec& x0,
                               const std::vector<double>& gammas, double T, double dt);

/// max_t | [x*(t, x_e + 2 x0) - x*(t, x_e + x0)] - x_lq(t, x0) |
double trajectory_difference_residual(const GlqProblem& problem, const Vec& x0, double T, double dt);

}  // namespace glqlab
