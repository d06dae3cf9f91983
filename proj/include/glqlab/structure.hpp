#pragma once

#include "glqlab/glq.hpp"

namespace glqlab {

struct SpectralUnreliable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GapViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Kernel of the stacked observability matrix [C; CA; ...; CA^{n-1}],
/// the finite-dimensional unobservable subspace, with the restriction of A
/// to it and the stability verdict of that restriction.
struct ObservabilityData {
  std::vector<Vec> unobservable_basis;  // orthonormal, possibly empty
  Matrix restricted_A;                  // A in the kernel basis (k x k)
  std::vector<Complex> restricted_eigenvalues;
  bool stable_on_unobservable = true;   // all restricted eigenvalues Re < -1e-9
};

ObservabilityData unobservable_subspace(const Matrix& A, const Matrix& C, double tol = 1e-9);

struct HautusResult {
  bool ok = true;
  Complex witness_eigenvalue;   // meaningful when !ok
  ComplexVector witness_vector; // kernel direction of [sI - A; C]
};

/// ker(sI - A) ∩ ker C = {0} for every eigenvalue s with Re s >= -gap.
/// Throws SpectralUnreliable when the eigensolve residuals are too large.
HautusResult hautus_detectable(const Matrix& A, const Matrix& C, double gap = 1e-7);

/// The dual test on (A^T, B^T).
HautusResult hautus_stabilizable(const Matrix& A, const Matrix& B, double gap = 1e-7);

struct SpectralGroup {
  std::vector<Complex> eigenvalues;
  std::vector<ComplexVector> eigenvectors;
  Matrix projector;  // sum of eigenprojections; real for conjugation-closed groups
};

struct SpectralSplit {
  SpectralGroup negative;  // Re < -gap
  SpectralGroup zero;      // |Re| <= gap
  SpectralGroup positive;  // Re > gap
  double gap = 0.0;
};

/// Partitions the spectrum by sign of the real part. Throws GapViolation when
/// an eigenvalue sits within gap/2 of a classification boundary (and is not a
/// clean zero).
SpectralSplit spectral_split(const Matrix& A, double gap = 1e-7);

struct DecayEstimate {
  double epsilon = 0.0;    // -max Re over the negative group
  double amplitude = 1.0;  // max over sampled t of |e^{tA} P^-| e^{epsilon t}
};

/// Numerical estimate of the semigroup bound |e^{tA} P^-| <= N e^{-eps t} on
/// the stable spectral subspace. Reported, not certified.
DecayEstimate semigroup_decay_estimate(const Matrix& A, const SpectralSplit& split,
                                       const std::vector<double>& t_samples);

enum class FeedbackStatus { Ok, Unstabilizable, NotConverged, NotStabilized };

struct FeedbackResult {
  FeedbackStatus status = FeedbackStatus::Ok;
  Matrix F;                         // u = F x
  double closed_loop_abscissa = 0.0;
};

/// F = -B^T P_inf from the stationary Riccati limit with C = I, K = I;
/// verifies the closed-loop spectral abscissa is negative.
FeedbackResult stabilizing_feedback(const Matrix& A, const Matrix& B, double dt, double tol,
                                    double t_max = 200.0);

}  // namespace glqlab
