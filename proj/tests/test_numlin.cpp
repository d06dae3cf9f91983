#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "glqlab/numlin.hpp"

using namespace glqlab;

namespace {

Matrix random_diagonalizable(Rng& rng, int n, Vec& eigenvalues_out) {
  // V D V^{-1} with separated real spectrum and a moderately conditioned V.
  eigenvalues_out.resize(n);
  for (int i = 0; i < n; ++i) eigenvalues_out[i] = -2.0 + 1.3 * i + rng.uniform(-0.1, 0.1);
  Matrix v = rng.uniform_matrix(n, n, -1.0, 1.0);
  for (int i = 0; i < n; ++i) v(i, i) += 2.0;
  return v * Matrix::diagonal(eigenvalues_out) * inverse(v);
}

}  // namespace

TEST_CASE("solve_linear identity and diagonal") {
  Matrix id3 = Matrix::identity(3);
  Vec b{1.0, 2.0, 3.0};
  Vec y = solve_linear(id3, b);
  for (int i = 0; i < 3; ++i) CHECK(y[i] == doctest::Approx(b[i]).epsilon(1e-14));

  Matrix d = Matrix::diagonal({2.0, 4.0});
  Vec y2 = solve_linear(d, {2.0, 4.0});
  CHECK(y2[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(y2[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve_linear residual on random well-conditioned systems") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix m = rng.uniform_matrix(5, 5, -1.0, 1.0);
    for (int i = 0; i < 5; ++i) m(i, i) += 4.0;
    Vec b = rng.uniform_vec(5, -2.0, 2.0);
    Vec y = solve_linear(m, b);
    const double res = norm2(vec_sub(m * y, b));
    CHECK(res <= 1e-10 * (1.0 + norm2(b)));
  }
}

TEST_CASE("solve_linear rejects singular matrices") {
  Matrix s(2, 2, {1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(solve_linear(s, {1.0, 2.0}), SingularMatrix);
  Matrix z(3, 3);
  CHECK_THROWS_AS(solve_linear(z, {1.0, 0.0, 0.0}), SingularMatrix);
}

TEST_CASE("kernel_basis full rank, zero matrix, rank-one") {
  CHECK(kernel_basis(Matrix::identity(2)).empty());

  auto full = kernel_basis(Matrix(2, 2));
  REQUIRE(full.size() == 2);
  CHECK(std::fabs(dot(full[0], full[1])) < 1e-12);
  CHECK(norm2(full[0]) == doctest::Approx(1.0));
  CHECK(norm2(full[1]) == doctest::Approx(1.0));

  Matrix ones(2, 2, {1.0, 1.0, 1.0, 1.0});
  auto k = kernel_basis(ones);
  REQUIRE(k.size() == 1);
  CHECK(norm2(k[0]) == doctest::Approx(1.0));
  CHECK(std::fabs(k[0][0] + k[0][1]) < 1e-12);                   // proportional to (1,-1)
  CHECK(std::fabs(std::fabs(k[0][0]) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("kernel_basis on rectangular matrices") {
  // 1x3 row: two-dimensional kernel orthogonal to the row.
  Matrix row(1, 3, {1.0, 2.0, 2.0});
  auto k = kernel_basis(row);
  REQUIRE(k.size() == 2);
  for (const auto& q : k) {
    CHECK(norm2(row * q) < 1e-12);
    CHECK(norm2(q) == doctest::Approx(1.0));
  }
  CHECK(std::fabs(dot(k[0], k[1])) < 1e-12);
}

TEST_CASE("eigen on diagonal and rotation matrices") {
  auto d = eigen(Matrix::diagonal({1.0, -2.0}));
  REQUIRE(d.converged);
  std::vector<double> re{d.eigenvalues[0].real(), d.eigenvalues[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(re[1] == doctest::Approx(1.0).epsilon(1e-12));

  Matrix rot(2, 2, {0.0, 1.0, -1.0, 0.0});
  auto r = eigen(rot);
  REQUIRE(r.converged);
  std::vector<double> im{r.eigenvalues[0].imag(), r.eigenvalues[1].imag()};
  std::sort(im.begin(), im.end());
  CHECK(im[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(im[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(r.eigenvalues[0].real()) < 1e-12);
  for (double res : r.residuals) CHECK(res < 1e-10);
}

TEST_CASE("eigen matches the four-mode reaction-diffusion spectrum") {
  // diag(c - k^2) with c = 5, four modes.
  Matrix a = Matrix::diagonal({4.0, 1.0, -4.0, -11.0});
  auto d = eigen(a);
  REQUIRE(d.converged);
  std::vector<double> re;
  for (auto ev : d.eigenvalues) {
    CHECK(std::fabs(ev.imag()) < 1e-12);
    re.push_back(ev.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re == std::vector<double>{-11.0, -4.0, 1.0, 4.0});
}

TEST_CASE("eigen residuals on random diagonalizable matrices") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform(0.0, 4.999));
    Vec evs;
    Matrix m = random_diagonalizable(rng, n, evs);
    auto d = eigen(m);
    REQUIRE(d.converged);
    double total = 0.0;
    for (double r : d.residuals) total += r;
    CHECK(total <= 1e-8 * std::max(1.0, m.frobenius_norm()));

    std::vector<double> got;
    for (auto ev : d.eigenvalues) got.push_back(ev.real());
    std::sort(got.begin(), got.end());
    std::sort(evs.begin(), evs.end());
    for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(evs[i]).epsilon(1e-8));
  }
}

TEST_CASE("eigen on unstructured random matrices") {
  Rng rng(211);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 5;  // 2..6
    const Matrix m = rng.uniform_matrix(n, n, -2.0, 2.0);
    const auto d = eigen(m);
    REQUIRE(d.converged);
    const double scale = std::max(1.0, m.inf_norm());

    for (double r : d.residuals) CHECK(r <= 1e-7 * scale);

    // Spectrum closed under conjugation and summing to the trace.
    Complex sum = 0.0;
    for (const Complex& ev : d.eigenvalues) {
      sum += ev;
      if (std::fabs(ev.imag()) > 1e-9 * scale) {
        bool partner = false;
        for (const Complex& other : d.eigenvalues)
          if (std::abs(other - std::conj(ev)) <= 1e-7 * scale) partner = true;
        CHECK(partner);
      }
    }
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += m(i, i);
    CHECK(std::fabs(sum.real() - trace) <= 1e-8 * scale);
    CHECK(std::fabs(sum.imag()) <= 1e-8 * scale);
  }
}

TEST_CASE("kernel_basis dimension on random rank-deficient products") {
  Rng rng(223);
  for (int rep = 0; rep < 30; ++rep) {
    const int rows = 3 + rep % 3;
    const int cols = 3 + (rep / 2) % 4;
    const int rank = 1 + rep % std::min(rows, cols);
    const Matrix m = rng.uniform_matrix(rows, rank, -1.0, 1.0) *
                     rng.uniform_matrix(rank, cols, -1.0, 1.0);
    const auto basis = kernel_basis(m);
    CHECK(static_cast<int>(basis.size()) == cols - rank);
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK(norm2(m * basis[i]) <= 1e-8 * std::max(1.0, m.max_abs()));
      for (size_t j = i + 1; j < basis.size(); ++j)
        CHECK(std::fabs(dot(basis[i], basis[j])) <= 1e-12);
    }
  }
}

TEST_CASE("eigen handles repeated eigenvalues of the identity") {
  auto d = eigen(Matrix::identity(3));
  REQUIRE(d.converged);
  for (auto ev : d.eigenvalues) CHECK(std::abs(ev - Complex(1.0, 0.0)) < 1e-12);
  // Eigenvectors span the space: pairwise near-orthogonal after cluster handling.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(std::abs(cdot(d.eigenvectors[i], d.eigenvectors[j])) < 1e-8);
  for (double r : d.residuals) CHECK(r < 1e-12);
}

TEST_CASE("expm identity, diagonal, semigroup") {
  Rng rng(3);
  Matrix m = rng.uniform_matrix(3, 3, -1.0, 1.0);
  Matrix e0 = expm(m, 0.0);
  CHECK((e0 - Matrix::identity(3)).max_abs() < 1e-14);

  Matrix d = expm(Matrix::diagonal({0.5, -1.0}), 2.0);
  CHECK(d(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(d(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(std::fabs(d(0, 1)) < 1e-14);

  Matrix ab = expm(m, 0.7 + 1.9);
  Matrix a_then_b = expm(m, 0.7) * expm(m, 1.9);
  CHECK((ab - a_then_b).max_abs() < 1e-9);
}

TEST_CASE("expm under heavy scaling and on nilpotent input") {
  // Rotation by 37 radians: norm forces many squarings.
  Matrix rot(2, 2, {0.0, 1.0, -1.0, 0.0});
  Matrix e = expm(rot, 37.0);
  CHECK(e(0, 0) == doctest::Approx(std::cos(37.0)).epsilon(1e-10));
  CHECK(e(0, 1) == doctest::Approx(std::sin(37.0)).epsilon(1e-10));
  CHECK(e(1, 0) == doctest::Approx(-std::sin(37.0)).epsilon(1e-10));

  Matrix nil(2, 2, {0.0, 100.0, 0.0, 0.0});
  Matrix en = expm(nil, 1.0);  // I + N exactly
  CHECK(en(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(en(0, 1) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(std::fabs(en(1, 0)) < 1e-12);
}

TEST_CASE("rk4 zero field and analytic exponential") {
  auto zero_field = [](double, const Vec& y) { return Vec(y.size(), 0.0); };
  OdeArc arc = rk4_integrate(zero_field, {1.0, -2.0}, 0.0, 1.0, 0.1);
  REQUIRE(arc.finite);
  for (const auto& s : arc.states) {
    CHECK(s[0] == 1.0);
    CHECK(s[1] == -2.0);
  }

  auto decay = [](double, const Vec& y) { return Vec{-y[0]}; };
  OdeArc e = rk4_integrate(decay, {1.0}, 0.0, 1.0, 1e-3);
  REQUIRE(e.finite);
  CHECK(std::fabs(e.states.back()[0] - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("rk4 against expm on a linear system") {
  Rng rng(5);
  Matrix a = rng.uniform_matrix(3, 3, -1.0, 1.0);
  Vec y0 = rng.uniform_vec(3, -1.0, 1.0);
  auto field = [&](double, const Vec& y) { return a * y; };
  OdeArc arc = rk4_integrate(field, y0, 0.0, 1.5, 1e-3);
  REQUIRE(arc.finite);
  Vec ref = expm(a, 1.5) * y0;
  CHECK(norm2(vec_sub(arc.states.back(), ref)) < 1e-8);
}

TEST_CASE("rk4 is fourth order on the exponential test") {
  auto decay = [](double, const Vec& y) { return Vec{-y[0]}; };
  auto err = [&](double dt) {
    OdeArc arc = rk4_integrate(decay, {1.0}, 0.0, 1.0, dt);
    return std::fabs(arc.states.back()[0] - std::exp(-1.0));
  };
  const double e1 = err(0.02);
  const double e2 = err(0.01);
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("rk4 shortens the final partial step") {
  auto decay = [](double, const Vec& y) { return Vec{-y[0]}; };
  OdeArc arc = rk4_integrate(decay, {1.0}, 0.0, 0.55, 0.1);
  REQUIRE(arc.finite);
  CHECK(arc.times.back() == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(std::fabs(arc.states.back()[0] - std::exp(-0.55)) < 1e-5);
}

TEST_CASE("rk4 flags non-finite blow-up") {
  auto explode = [](double, const Vec& y) { return Vec{y[0] * y[0]}; };
  OdeArc arc = rk4_integrate(explode, {10.0}, 0.0, 10.0, 0.1);
  CHECK_FALSE(arc.finite);
  CHECK(arc.last_finite_time < 10.0);
  for (const auto& s : arc.states) CHECK(std::isfinite(s[0]));
}

TEST_CASE("simpson integrates cubics exactly and handles even sample counts") {
  // f(t) = t^3 on [0,1], 11 samples.
  std::vector<double> vals;
  for (int i = 0; i <= 10; ++i) {
    const double t = i / 10.0;
    vals.push_back(t * t * t);
  }
  CHECK(simpson_integrate(vals, 0.1) == doctest::Approx(0.25).epsilon(1e-14));

  std::vector<double> sine;
  const int n = 1000;  // even sample count -> trapezoid tail
  for (int i = 0; i < n; ++i) sine.push_back(std::sin(i * (M_PI / (n - 1))));
  CHECK(simpson_integrate(sine, M_PI / (n - 1)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("rng is deterministic") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42);
  const double u = c.uniform(0.0, 1.0);
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
}
