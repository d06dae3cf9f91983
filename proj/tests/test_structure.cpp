#include <doctest.h>

#include <cmath>

#include "glqlab/structure.hpp"

using namespace glqlab;

TEST_CASE("full observation leaves no unobservable subspace") {
  Rng rng(127);
  const Matrix a = rng.uniform_matrix(3, 3, -1.0, 1.0);
  const ObservabilityData obs = unobservable_subspace(a, Matrix::identity(3));
  CHECK(obs.unobservable_basis.empty());
  CHECK(obs.stable_on_unobservable);
}

TEST_CASE("hidden modes are found and classified by stability") {
  const Matrix c(1, 2, {1.0, 0.0});

  const ObservabilityData bad = unobservable_subspace(Matrix::diagonal({-1.0, 2.0}), c);
  REQUIRE(bad.unobservable_basis.size() == 1);
  CHECK(std::fabs(std::fabs(bad.unobservable_basis[0][1]) - 1.0) < 1e-12);
  CHECK(bad.restricted_eigenvalues[0].real() == doctest::Approx(2.0));
  CHECK_FALSE(bad.stable_on_unobservable);

  const ObservabilityData good = unobservable_subspace(Matrix::diagonal({-1.0, -2.0}), c);
  REQUIRE(good.unobservable_basis.size() == 1);
  CHECK(good.stable_on_unobservable);
}

TEST_CASE("unobservable directions produce no output along the semigroup") {
  // Non-diagonal case: rotate a hidden subspace into general position.
  Rng rng(131);
  Matrix v = rng.uniform_matrix(3, 3, -1.0, 1.0);
  for (int i = 0; i < 3; ++i) v(i, i) += 2.0;
  const Matrix a = v * Matrix::diagonal({-1.0, -2.0, -0.5}) * inverse(v);
  Matrix c(1, 3);
  // Observe only the first eigencoordinate: rows of v^{-1} are left eigenvectors.
  const Matrix vinv = inverse(v);
  for (int j = 0; j < 3; ++j) c(0, j) = vinv(0, j);

  const ObservabilityData obs = unobservable_subspace(a, c);
  REQUIRE(obs.unobservable_basis.size() == 2);
  for (const Vec& q : obs.unobservable_basis)
    for (double t : {0.0, 0.5, 1.0, 2.0}) CHECK(norm2(c * (expm(a, t) * q)) <= 1e-7);
  CHECK(obs.stable_on_unobservable);
}

TEST_CASE("Hautus detectability on hand examples") {
  CHECK(hautus_detectable(-1.0 * Matrix::identity(2), Matrix(1, 2, {0.0, 1.0})).ok);

  const HautusResult bad = hautus_detectable(Matrix::diagonal({1.0, -1.0}), Matrix(1, 2, {0.0, 1.0}));
  CHECK_FALSE(bad.ok);
  CHECK(bad.witness_eigenvalue.real() == doctest::Approx(1.0));
  CHECK(std::fabs(bad.witness_eigenvalue.imag()) < 1e-12);
  CHECK(std::abs(bad.witness_vector[0]) == doctest::Approx(1.0));
  CHECK(std::abs(bad.witness_vector[1]) < 1e-9);
}

TEST_CASE("Hautus stabilizability on hand examples") {
  Rng rng(137);
  Matrix b = rng.uniform_matrix(3, 3, -1.0, 1.0);
  for (int i = 0; i < 3; ++i) b(i, i) += 2.0;
  CHECK(hautus_stabilizable(rng.uniform_matrix(3, 3, -1.0, 1.0), b).ok);

  const HautusResult bad = hautus_stabilizable(Matrix::diagonal({1.0, -1.0}), Matrix(2, 1, {0.0, 1.0}));
  CHECK_FALSE(bad.ok);
  CHECK(bad.witness_eigenvalue.real() == doctest::Approx(1.0));
}

TEST_CASE("Hautus handles complex unstable pairs") {
  // Spiral source observed through one coordinate: detectable.
  Matrix a(2, 2, {0.3, 1.0, -1.0, 0.3});
  CHECK(hautus_detectable(a, Matrix(1, 2, {1.0, 0.0})).ok);

  // Decoupled spiral source with no observation of it: not detectable.
  Matrix a4(4, 4);
  a4(0, 0) = 0.3; a4(0, 1) = 1.0; a4(1, 0) = -1.0; a4(1, 1) = 0.3;
  a4(2, 2) = -1.0; a4(3, 3) = -2.0;
  Matrix c(1, 4, {0.0, 0.0, 1.0, 1.0});
  const HautusResult res = hautus_detectable(a4, c);
  CHECK_FALSE(res.ok);
  CHECK(res.witness_eigenvalue.real() == doctest::Approx(0.3));
  CHECK(std::fabs(res.witness_eigenvalue.imag()) == doctest::Approx(1.0));
}

TEST_CASE("spectral split on sign-definite and mixed spectra") {
  const SpectralSplit all_neg = spectral_split(Matrix::diagonal({-1.0, -2.0}));
  CHECK(all_neg.negative.eigenvalues.size() == 2);
  CHECK(all_neg.zero.eigenvalues.empty());
  CHECK(all_neg.positive.eigenvalues.empty());

  const SpectralSplit heat = spectral_split(Matrix::diagonal({4.0, 1.0, -4.0, -11.0}));
  CHECK(heat.positive.eigenvalues.size() == 2);
  CHECK(heat.negative.eigenvalues.size() == 2);
  CHECK(heat.zero.eigenvalues.empty());

  const SpectralSplit rot = spectral_split(Matrix(2, 2, {0.0, 1.0, -1.0, 0.0}));
  CHECK(rot.zero.eigenvalues.size() == 2);
}

TEST_CASE("spectral split rejects boundary-straddling eigenvalues") {
  CHECK_THROWS_AS(spectral_split(Matrix::diagonal({1e-7, -1.0}), 1e-7), GapViolation);
}

TEST_CASE("spectral projectors are idempotent, commute with A, and sum to I") {
  Rng rng(139);
  Matrix v = rng.uniform_matrix(4, 4, -1.0, 1.0);
  for (int i = 0; i < 4; ++i) v(i, i) += 2.0;
  const Matrix a = v * Matrix::diagonal({-2.0, -0.7, 0.4, 1.1}) * inverse(v);
  const SpectralSplit split = spectral_split(a);
  CHECK(split.negative.eigenvalues.size() == 2);
  CHECK(split.positive.eigenvalues.size() == 2);

  for (const SpectralGroup* g : {&split.negative, &split.positive}) {
    CHECK((g->projector * g->projector - g->projector).max_abs() <= 1e-9);
    CHECK((a * g->projector - g->projector * a).max_abs() <= 1e-8);
  }
  const Matrix total = split.negative.projector + split.zero.projector + split.positive.projector;
  CHECK((total - Matrix::identity(4)).max_abs() <= 1e-9);
}

TEST_CASE("defective matrices are flagged as spectrally unreliable") {
  Matrix j(4, 4);
  for (int i = 0; i < 3; ++i) j(i, i + 1) = 1.0;
  CHECK_THROWS_AS(hautus_detectable(j, Matrix(1, 4, {1.0, 0.0, 0.0, 0.0})), SpectralUnreliable);
  CHECK_THROWS_AS(spectral_split(j), SpectralUnreliable);
}

TEST_CASE("semigroup decay constants are reported for the stable subspace") {
  Rng rng(141);
  Matrix v = rng.uniform_matrix(3, 3, -1.0, 1.0);
  for (int i = 0; i < 3; ++i) v(i, i) += 2.0;
  const Matrix a = v * Matrix::diagonal({-0.8, -2.0, 1.5}) * inverse(v);
  const SpectralSplit split = spectral_split(a);
  std::vector<double> samples;
  for (int i = 0; i <= 32; ++i) samples.push_back(0.25 * i);
  const DecayEstimate est = semigroup_decay_estimate(a, split, samples);
  CHECK(est.epsilon == doctest::Approx(0.8).epsilon(1e-8));
  CHECK(est.amplitude >= 1.0);
  // The reported pair bounds the decay between samples up to modest slack.
  for (double t : {0.37, 0.81, 3.1, 6.2}) {
    const Matrix op = expm(a, t) * split.negative.projector;
    CHECK(op.frobenius_norm() <= 1.5 * est.amplitude * std::exp(-est.epsilon * t));
  }
}

TEST_CASE("stabilizing feedback: already-stable system with no actuation") {
  const Matrix a = Matrix::diagonal({-1.0, -2.0});
  const FeedbackResult res = stabilizing_feedback(a, Matrix(2, 1), 1e-3, 1e-9, 60.0);
  CHECK(res.status == FeedbackStatus::Ok);
  CHECK(res.F.max_abs() == 0.0);
  CHECK(res.closed_loop_abscissa == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("stabilizing feedback reflects the scalar unstable mode") {
  const FeedbackResult res =
      stabilizing_feedback(Matrix(1, 1, {1.0}), Matrix(1, 1, {1.0}), 1e-3, 1e-10, 60.0);
  CHECK(res.status == FeedbackStatus::Ok);
  CHECK(res.F(0, 0) == doctest::Approx(-(1.0 + std::sqrt(2.0))).epsilon(1e-7));
  CHECK(res.closed_loop_abscissa == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("stabilizing feedback refuses unstabilizable pairs") {
  const FeedbackResult res =
      stabilizing_feedback(Matrix::diagonal({1.0, -1.0}), Matrix(2, 1, {0.0, 1.0}), 1e-3, 1e-9, 20.0);
  CHECK(res.status == FeedbackStatus::Unstabilizable);
}
