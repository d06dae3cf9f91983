#include "glqlab/heat_demo.hpp"

#include <cmath>

namespace glqlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) { return std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// int_a^b cos(w x + phi) dx, exact and stable through w -> 0.
double cosine_integral(double w, double phi, double a, double b) {
  const double half = 0.5 * (b - a);
  return (b - a) * sinc(w * half) * std::cos(w * 0.5 * (a + b) + phi);
}

Vec resized(const Vec& src, int n, double fill = 0.0) {
  Vec out(n, fill);
  for (int i = 0; i < n && i < static_cast<int>(src.size()); ++i) out[i] = src[i];
  return out;
}

}  // namespace

Vec b2_column(double a, double b, int n_modes) {
  Vec col(n_modes);
  const double scale = std::sqrt(2.0 / kPi);
  for (int k = 1; k <= n_modes; ++k)
    col[k - 1] = scale * (std::cos(k * a) - std::cos(k * b)) / k;
  return col;
}

GlqProblem build_system(const HeatConfig& cfg) {
  if (!(0.0 < cfg.omega_a && cfg.omega_a < cfg.omega_b && cfg.omega_b < kPi))
    throw std::invalid_argument("build_system: need 0 < a < b < pi");
  if (cfg.n_modes < 1) throw std::invalid_argument("build_system: n_modes must be >= 1");
  if (cfg.kappa <= 0.0) throw std::invalid_argument("build_system: kappa must be positive");
  const int n = cfg.n_modes;

  Vec diag(n);
  for (int k = 1; k <= n; ++k) diag[k - 1] = cfg.c - static_cast<double>(k) * k;
  Matrix a = Matrix::diagonal(diag);

  Matrix b;
  if (cfg.op == HeatOperator::B2) {
    const Vec col = b2_column(cfg.omega_a, cfg.omega_b, n);
    b = Matrix(n, 1);
    for (int i = 0; i < n; ++i) b(i, 0) = col[i];
  } else {
    // Control space: first n sine modes of L^2(omega), extended by zero.
    // Entries <psi_k, 1_omega phi_j> via product-to-sum, exact integrals.
    const double len = cfg.omega_b - cfg.omega_a;
    const double scale = std::sqrt(2.0 / kPi) * std::sqrt(2.0 / len);
    b = Matrix(n, n);
    for (int k = 1; k <= n; ++k)
      for (int j = 1; j <= n; ++j) {
        const double beta = j * kPi / len;
        const double plus = cosine_integral(k - beta, beta * cfg.omega_a, cfg.omega_a, cfg.omega_b);
        const double minus =
            cosine_integral(k + beta, -beta * cfg.omega_a, cfg.omega_a, cfg.omega_b);
        b(k - 1, j - 1) = scale * 0.5 * (plus - minus);
      }
  }

  const int m = b.cols();
  Matrix c = b.transpose();  // C = B^* in both configurations
  Matrix kmat = cfg.kappa * Matrix::identity(m);
  return make_problem(std::move(a), std::move(b), std::move(c), std::move(kmat),
                      resized(cfg.z_coeffs, n), resized(cfg.v_coeffs, m));
}

CounterexampleReport demo_counterexample(int n_modes, const std::vector<double>& T_list,
                                         double dt) {
  CounterexampleReport rep;
  rep.config.c = 5.0;
  rep.config.n_modes = std::max(2, n_modes);
  rep.config.omega_a = kPi / 4.0;
  rep.config.omega_b = 3.0 * kPi / 4.0;
  rep.config.op = HeatOperator::B2;
  rep.config.kappa = 1.0;
  rep.config.z_coeffs.resize(rep.config.n_modes);
  for (int k = 1; k <= rep.config.n_modes; ++k)
    rep.config.z_coeffs[k - 1] = 0.3 / (static_cast<double>(k) * k);
  rep.config.v_coeffs = {0.2};

  const GlqProblem pb = build_system(rep.config);
  rep.b2_mode2 = pb.B(1, 0);
  rep.stabilizable = hautus_stabilizable(pb.A, pb.B);

  Vec x0(rep.config.n_modes);
  for (int k = 1; k <= rep.config.n_modes; ++k) x0[k - 1] = 0.8 / k;

  rep.scan = horizon_scan(pb, x0, T_list, dt, 0.1);

  // Mode 2 is unreachable and unobserved: free evolution x_2(t) = e^t x_2(0).
  const double probe_T = T_list.front();
  rep.t_probe = probe_T >= 4.0 ? 3.0 : 0.5 * probe_T;
  const Trajectory traj = solve_glq(pb, x0, probe_T, dt);
  if (traj.finite) {
    const long idx = std::lround(rep.t_probe / dt);
    const double x2 = std::fabs(traj.states[static_cast<size_t>(idx)][1]);
    rep.mode2_growth_ratio = x2 / (std::exp(rep.t_probe) * std::fabs(x0[1]));
  }
  return rep;
}

StableReport demo_stable(int n_modes, const std::vector<double>& T_list, double dt,
                         uint64_t seed) {
  StableReport rep;
  Rng rng(seed);

  HeatConfig base;
  base.c = 0.0;
  base.n_modes = n_modes;
  base.omega_a = 0.5;
  base.omega_b = 2.0;
  base.kappa = 1.0;
  base.z_coeffs = rng.uniform_vec(n_modes, -0.3, 0.3);

  rep.config_b1 = base;
  rep.config_b1.op = HeatOperator::B1;
  rep.config_b1.v_coeffs = rng.uniform_vec(n_modes, -0.3, 0.3);
  rep.config_b2 = base;
  rep.config_b2.op = HeatOperator::B2;
  rep.config_b2.v_coeffs = {rng.uniform(-0.3, 0.3)};

  const GlqProblem pb1 = build_system(rep.config_b1);
  const GlqProblem pb2 = build_system(rep.config_b2);
  rep.b1_stabilizable = hautus_stabilizable(pb1.A, pb1.B);
  rep.b1_detectable = hautus_detectable(pb1.A, pb1.C);
  rep.b2_stabilizable = hautus_stabilizable(pb2.A, pb2.B);
  rep.b2_detectable = hautus_detectable(pb2.A, pb2.C);
  rep.b1_unobservable_dim =
      static_cast<int>(unobservable_subspace(pb1.A, pb1.C).unobservable_basis.size());

  Vec x0(n_modes);
  for (int k = 1; k <= n_modes; ++k) x0[k - 1] = 1.0 / k;
  rep.scan = horizon_scan(pb2, x0, T_list, dt, 0.1);
  return rep;
}

TruncationReport truncation_study(const HeatConfig& base, const std::vector<int>& n_list,
                                  double T, double dt) {
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw std::invalid_argument("truncation_study: n_list must be increasing");
  TruncationReport rep;
  for (int n : n_list) {
    TruncationEntry entry;
    entry.n_modes = n;
    try {
      HeatConfig cfg = base;
      cfg.n_modes = n;
      const GlqProblem pb = build_system(cfg);
      Vec x0(n);
      for (int k = 1; k <= n; ++k) x0[k - 1] = 0.8 / (static_cast<double>(k) * k);
      const TurnpikeReport scan = horizon_scan(pb, x0, {T}, dt, 0.1);
      const HorizonEntry& h = scan.entries.front();
      if (h.solved) {
        entry.solved = true;
        entry.midpoint_deviation = h.midpoint_deviation;
        entry.fitted_rate = h.fit.rate;
      } else {
        entry.failure = h.failure;
      }
    } catch (const std::exception& e) {
      entry.failure = e.what();
    }
    rep.entries.push_back(std::move(entry));
  }

  auto three_digits = [](double a, double b) {
    return std::fabs(a - b) <= std::max(5e-3 * std::max(std::fabs(a), std::fabs(b)), 1e-3);
  };
  rep.midpoints_stabilized = rep.entries.size() >= 2;
  rep.rates_stabilized = rep.entries.size() >= 2;
  for (size_t i = 1; i < rep.entries.size(); ++i) {
    const TruncationEntry& a = rep.entries[i - 1];
    const TruncationEntry& b = rep.entries[i];
    if (!a.solved || !b.solved) {
      rep.midpoints_stabilized = rep.rates_stabilized = false;
      break;
    }
    rep.midpoints_stabilized =
        rep.midpoints_stabilized && three_digits(a.midpoint_deviation, b.midpoint_deviation);
    rep.rates_stabilized = rep.rates_stabilized && three_digits(a.fitted_rate, b.fitted_rate);
  }
  return rep;
}

}  // namespace glqlab
