#include "glqlab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace glqlab {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/" + name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

void write_scan_csv(const RunConfig& cfg, const TurnpikeReport& report,
                    const std::string& report_name, const std::string& curve_name) {
  std::ofstream rep = open_out(cfg, report_name);
  rep << "T,measure_outside,k,M,midpoint_deviation,status\n";
  for (const HorizonEntry& e : report.entries) {
    if (e.solved) {
      std::string rate = fmt(e.fit.rate), amp = fmt(e.fit.amplitude);
      if (e.fit.status == ExpFit::Status::Underflow) rate = "inf";
      if (e.fit.status == ExpFit::Status::NotComputed) rate = amp = "";
      rep << fmt(e.T) << ',' << fmt(e.measure_outside) << ',' << rate << ',' << amp << ','
          << fmt(e.midpoint_deviation) << ",ok\n";
    } else {
      rep << fmt(e.T) << ",,,,," << "failed\n";
    }
  }
  std::ofstream curves = open_out(cfg, curve_name);
  curves << "T,t,d\n";
  for (const HorizonEntry& e : report.entries) {
    if (!e.solved) continue;
    for (size_t i = 0; i < e.deviations.size(); ++i)
      curves << fmt(e.T) << ',' << fmt(static_cast<double>(i) * report.dt) << ','
             << fmt(e.deviations[i]) << '\n';
  }
}

std::string complex_str(const Complex& c) {
  return fmt(c.real()) + (c.imag() >= 0 ? "+" : "") + fmt(c.imag()) + "i";
}

}  // namespace

int cmd_steady(const RunConfig& cfg, std::ostream& out) {
  const GlqProblem pb = problem_from_config(cfg);
  const SteadyStateResult res = solve_steady(pb);

  std::ofstream csv = open_out(cfg, "steady.csv");
  csv << "component,index,value\n";
  for (size_t i = 0; i < res.x_e.size(); ++i) csv << "x_e," << i << ',' << fmt(res.x_e[i]) << '\n';
  for (size_t i = 0; i < res.u_e.size(); ++i) csv << "u_e," << i << ',' << fmt(res.u_e[i]) << '\n';
  for (size_t i = 0; i < res.w.size(); ++i) csv << "w," << i << ',' << fmt(res.w[i]) << '\n';
  csv << "kkt_residual,0," << fmt(res.kkt_residual) << '\n';
  csv << "unique,0," << (res.unique ? 1 : 0) << '\n';

  out << "x_e =";
  for (double x : res.x_e) out << ' ' << fmt(x);
  out << "\nu_e =";
  for (double u : res.u_e) out << ' ' << fmt(u);
  out << "\nw   =";
  for (double w : res.w) out << ' ' << fmt(w);
  out << "\nkkt_residual = " << fmt(res.kkt_residual) << "\nunique = " << (res.unique ? "yes" : "no")
      << '\n';
  return res.kkt_singular ? kExitKkt : kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const GlqProblem pb = problem_from_config(cfg);
  const Vec x0 = initial_state_from_config(cfg, pb);
  const double T = cfg.solve_horizon();
  Trajectory traj;
  try {
    traj = solve_glq(pb, x0, T, cfg.dt);
  } catch (const NonFiniteState& e) {
    out << "blow-up before reaching the horizon; last finite time " << fmt(e.last_finite_time)
        << '\n';
    return kExitBlowup;
  }

  std::ofstream csv = open_out(cfg, "trajectory.csv");
  csv << "t";
  for (int i = 0; i < pb.n(); ++i) csv << ",x" << (i + 1);
  for (int i = 0; i < pb.m(); ++i) csv << ",u" << (i + 1);
  csv << ",d\n";
  const std::vector<double> d = deviation_curve(traj, traj.reference);
  for (size_t i = 0; i < traj.states.size(); ++i) {
    csv << fmt(traj.grid[i]);
    for (double x : traj.states[i]) csv << ',' << fmt(x);
    for (double u : traj.controls[i]) csv << ',' << fmt(u);
    csv << ',' << fmt(d[i]) << '\n';
  }

  if (!traj.finite) {
    out << "trajectory blew up at t = " << fmt(traj.last_finite_time)
        << "; partial arc written\n";
    return kExitBlowup;
  }
  out << "cost = " << fmt(traj.cost) << '\n';
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const GlqProblem pb = problem_from_config(cfg);
  const Vec x0 = initial_state_from_config(cfg, pb);
  const TurnpikeReport report = horizon_scan(pb, x0, cfg.horizons, cfg.dt, cfg.epsilon);
  write_scan_csv(cfg, report, "report.csv", "deviations.csv");
  for (const HorizonEntry& e : report.entries) {
    out << "T = " << fmt(e.T) << ": ";
    if (e.solved)
      out << "measure_outside = " << fmt(e.measure_outside)
          << ", k = " << fmt(e.fit.rate) << ", d(T/2) = " << fmt(e.midpoint_deviation) << '\n';
    else
      out << "failed (" << e.failure << ")\n";
  }
  return kExitOk;
}

int cmd_hautus(const RunConfig& cfg, std::ostream& out) {
  const GlqProblem pb = problem_from_config(cfg);
  try {
    const HautusResult stab = hautus_stabilizable(pb.A, pb.B);
    const HautusResult det = hautus_detectable(pb.A, pb.C);
    const ObservabilityData obs = unobservable_subspace(pb.A, pb.C);
    out << "stabilizable = " << (stab.ok ? "yes" : "no");
    if (!stab.ok) out << " (witness s = " << complex_str(stab.witness_eigenvalue) << ')';
    out << "\ndetectable = " << (det.ok ? "yes" : "no");
    if (!det.ok) out << " (witness s = " << complex_str(det.witness_eigenvalue) << ')';
    out << "\nunobservable_dim = " << obs.unobservable_basis.size();
    out << "\nstable_on_unobservable = " << (obs.stable_on_unobservable ? "yes" : "no") << '\n';
  } catch (const SpectralUnreliable& e) {
    out << "eigensolve unreliable: " << e.what() << '\n';
    return kExitSpectral;
  }
  return kExitOk;
}

int cmd_heat(const RunConfig& cfg, std::ostream& out) {
  if (cfg.heat_demo == "counterexample") {
    const CounterexampleReport rep = demo_counterexample(cfg.heat.n_modes, cfg.horizons, cfg.dt);
    write_scan_csv(cfg, rep.scan, "counterexample_report.csv", "counterexample_deviations.csv");
    out << "b2(mode 2) = " << fmt(rep.b2_mode2) << '\n';
    out << "stabilizable = " << (rep.stabilizable.ok ? "yes" : "no");
    if (!rep.stabilizable.ok)
      out << " (witness s = " << complex_str(rep.stabilizable.witness_eigenvalue) << ')';
    out << '\n';
    out << "mode-2 growth ratio at t = " << fmt(rep.t_probe) << ": "
        << fmt(rep.mode2_growth_ratio) << " (free evolution = 1)\n";
    for (const HorizonEntry& e : rep.scan.entries)
      out << "T = " << fmt(e.T) << ": measure_outside = "
          << (e.solved ? fmt(e.measure_outside) : std::string("failed: ") + e.failure) << '\n';
    return kExitOk;
  }
  if (cfg.heat_demo == "truncation") {
    HeatConfig base = cfg.heat;
    const TruncationReport rep = truncation_study(base, cfg.n_list, cfg.solve_horizon(), cfg.dt);
    std::ofstream csv = open_out(cfg, "truncation.csv");
    csv << "n_modes,midpoint_deviation,k,status\n";
    for (const TruncationEntry& e : rep.entries) {
      if (e.solved)
        csv << e.n_modes << ',' << fmt(e.midpoint_deviation) << ',' << fmt(e.fitted_rate)
            << ",ok\n";
      else
        csv << e.n_modes << ",,,failed\n";
      out << "n = " << e.n_modes << ": "
          << (e.solved ? "d(T/2) = " + fmt(e.midpoint_deviation) + ", k = " + fmt(e.fitted_rate)
                       : "failed (" + e.failure + ")")
          << '\n';
    }
    out << "stabilized across n: midpoints " << (rep.midpoints_stabilized ? "yes" : "no")
        << ", rates " << (rep.rates_stabilized ? "yes" : "no") << '\n';
    return kExitOk;
  }
  if (cfg.heat_demo == "stable") {
    const StableReport rep = demo_stable(cfg.heat.n_modes, cfg.horizons, cfg.dt, cfg.seed);
    write_scan_csv(cfg, rep.scan, "stable_report.csv", "stable_deviations.csv");
    out << "B1 stabilizable = " << (rep.b1_stabilizable.ok ? "yes" : "no")
        << ", detectable = " << (rep.b1_detectable.ok ? "yes" : "no")
        << ", unobservable_dim = " << rep.b1_unobservable_dim << '\n';
    out << "B2 stabilizable = " << (rep.b2_stabilizable.ok ? "yes" : "no")
        << ", detectable = " << (rep.b2_detectable.ok ? "yes" : "no") << '\n';
    for (const HorizonEntry& e : rep.scan.entries)
      out << "T = " << fmt(e.T) << ": k = " << (e.solved ? fmt(e.fit.rate) : "failed")
          << ", measure_outside = " << (e.solved ? fmt(e.measure_outside) : "-")
          << ", d(T/2) = " << (e.solved ? fmt(e.midpoint_deviation) : "-") << '\n';
    return kExitOk;
  }
  out << "unknown heat demo '" << cfg.heat_demo << "' (expected stable|counterexample|truncation)\n";
  return kExitParse;
}

}  // namespace glqlab
