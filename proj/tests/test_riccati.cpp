#include <doctest.h>

#include <cmath>

#include "glqlab/riccati.hpp"

using namespace glqlab;

namespace {

GlqProblem scalar_problem(double a, double b, double c, double k) {
  return make_problem(Matrix(1, 1, {a}), Matrix(1, 1, {b}), Matrix(1, 1, {c}),
                      Matrix(1, 1, {k}), Vec{0.0}, Vec{0.0});
}

GlqProblem random_stable_problem(Rng& rng, int n, int m, int p) {
  Matrix a = rng.uniform_matrix(n, n, -0.6, 0.6);
  for (int i = 0; i < n; ++i) a(i, i) -= 1.2;
  return make_problem(std::move(a), rng.uniform_matrix(n, m, -1.0, 1.0),
                      rng.uniform_matrix(p, n, -1.0, 1.0), Matrix::identity(m),
                      Vec(n, 0.0), Vec(m, 0.0));
}

}  // namespace

TEST_CASE("zero observation keeps P identically zero") {
  GlqProblem pb = scalar_problem(0.7, 1.0, 0.0, 1.0);
  const RiccatiSolution sol = integrate_dre(pb, 2.0, 1e-3);
  for (const Matrix& p : sol.values) CHECK(p.max_abs() == 0.0);
  CHECK(mild_residual(pb, sol, 1.0, {1.0}) == 0.0);
}

TEST_CASE("scalar Riccati flow follows tanh") {
  GlqProblem pb = scalar_problem(0.0, 1.0, 1.0, 1.0);
  const RiccatiSolution sol = integrate_dre(pb, 6.0, 1e-3);
  double worst = 0.0;
  for (size_t i = 0; i < sol.values.size(); ++i) {
    const double t = static_cast<double>(i) * sol.dt;
    worst = std::max(worst, std::fabs(sol.values[i](0, 0) - std::tanh(t)));
  }
  CHECK(worst <= 1e-6);
  CHECK(sol.values[0](0, 0) == 0.0);
}

TEST_CASE("scalar flow approaches the stationary point a + sqrt(a^2+1)") {
  const double a = 0.8;
  GlqProblem pb = scalar_problem(a, 1.0, 1.0, 1.0);
  const RiccatiSolution sol = integrate_dre(pb, 25.0, 1e-3);
  CHECK(sol.values.back()(0, 0) == doctest::Approx(a + std::sqrt(a * a + 1.0)).epsilon(1e-8));
}

TEST_CASE("integration order: halving dt gains a factor of 16 against tanh") {
  GlqProblem pb = scalar_problem(0.0, 1.0, 1.0, 1.0);
  auto err = [&](double dt) {
    const RiccatiSolution sol = integrate_dre(pb, 2.0, dt);
    double worst = 0.0;
    for (size_t i = 0; i < sol.values.size(); ++i)
      worst = std::max(worst,
                       std::fabs(sol.values[i](0, 0) - std::tanh(static_cast<double>(i) * dt)));
    return worst;
  };
  CHECK(err(0.02) / err(0.01) >= 12.0);
}

TEST_CASE("mild form residual on the tanh solution") {
  GlqProblem pb = scalar_problem(0.0, 1.0, 1.0, 1.0);
  const RiccatiSolution sol = integrate_dre(pb, 3.0, 1e-3);
  CHECK(mild_residual(pb, sol, 1.0, {1.0}) <= 1e-5);
  CHECK(mild_residual(pb, sol, 3.0, {1.0}) <= 1e-5);
}

TEST_CASE("mild form residual on a random stable system") {
  Rng rng(53);
  const GlqProblem pb = random_stable_problem(rng, 3, 2, 2);
  const RiccatiSolution sol = integrate_dre(pb, 0.5, 1e-3);
  const Vec x0 = rng.uniform_vec(3, -1.0, 1.0);
  CHECK(mild_residual(pb, sol, 0.5, x0) <= 1e-5 * (1.0 + norm2(x0)));
}

TEST_CASE("monotonicity: longer horizons dominate") {
  Rng rng(59);
  const GlqProblem pb = random_stable_problem(rng, 3, 1, 2);
  const RiccatiSolution sol = integrate_dre(pb, 4.0, 1e-3);
  const size_t step = 400;
  for (size_t i = step; i < sol.values.size(); i += step) {
    const Matrix diff = sol.values[i] - sol.values[i - step];
    CHECK(symmetric_min_eigenvalue(diff) >= -1e-8);
  }
}

TEST_CASE("every iterate is symmetric positive semidefinite") {
  Rng rng(61);
  const GlqProblem pb = random_stable_problem(rng, 3, 2, 1);
  const RiccatiSolution sol = integrate_dre(pb, 3.0, 1e-3);
  CHECK(sol.symmetrization_drift <= 1e-10);
  for (size_t i = 0; i < sol.values.size(); i += 500) {
    const Matrix& p = sol.values[i];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) CHECK(p(r, c) == p(c, r));
    CHECK(symmetric_min_eigenvalue(p) >= -1e-8);
  }
}

TEST_CASE("dre_limit on the scalar flows") {
  GlqProblem off = scalar_problem(0.4, 1.0, 0.0, 1.0);
  const DreLimit zero = dre_limit(off, 1e-3, 1e-10, 10.0);
  CHECK(zero.status == DreLimitStatus::Converged);
  CHECK(zero.value.max_abs() == 0.0);

  GlqProblem pb = scalar_problem(0.0, 1.0, 1.0, 1.0);
  const DreLimit lim = dre_limit(pb, 1e-3, 1e-9, 40.0);
  CHECK(lim.status == DreLimitStatus::Converged);
  CHECK(lim.value(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("dre_limit flags unbounded growth on an unstabilizable observed mode") {
  // Unstable, unreachable, observed: P' = 2P + 1 grows without bound.
  GlqProblem pb = scalar_problem(1.0, 0.0, 1.0, 1.0);
  const DreLimit lim = dre_limit(pb, 1e-3, 1e-9, 12.0);
  CHECK(lim.status != DreLimitStatus::Converged);
  CHECK(lim.last_delta > 1.0);
}

TEST_CASE("off-grid time lookups are rejected") {
  GlqProblem pb = scalar_problem(0.0, 1.0, 1.0, 1.0);
  const RiccatiSolution sol = integrate_dre(pb, 1.0, 1e-3);
  CHECK_THROWS_AS(sol.index_of(0.00037), std::invalid_argument);
  CHECK(sol.index_of(0.5) == 500);
}
