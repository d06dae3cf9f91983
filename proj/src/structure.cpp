#include "glqlab/structure.hpp"

#include <cmath>

#include "glqlab/riccati.hpp"

namespace glqlab {

namespace {

void check_spectral_quality(const Matrix& a, const EigenDecomposition& dec, const char* who) {
  const double budget = 1e-6 * (1.0 + a.inf_norm());
  if (!dec.converged) throw SpectralUnreliable(std::string(who) + ": QR iteration did not converge");
  for (double r : dec.residuals)
    if (!(r <= budget))
      throw SpectralUnreliable(std::string(who) + ": eigensolve residual too large");
}

// Trivial-kernel test of the complex stack [sI - A; C], realified.
std::vector<Vec> complex_stack_kernel(const Matrix& a, const Matrix& c, Complex s, double tol) {
  const int n = a.rows();
  const int p = c.rows();
  Matrix r(2 * (n + p), 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = (i == j ? s.real() : 0.0) - a(i, j);
      r(i, j) = x;
      r(n + p + i, n + j) = x;
    }
  for (int i = 0; i < n; ++i) {
    r(i, n + i) = -s.imag();
    r(n + p + i, i) = s.imag();
  }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n; ++j) {
      r(n + i, j) = c(i, j);
      r(2 * n + p + i, n + j) = c(i, j);
    }
  return kernel_basis(r, tol);
}

}  // namespace

ObservabilityData unobservable_subspace(const Matrix& a, const Matrix& c, double tol) {
  if (!a.square() || c.cols() != a.rows())
    throw DimensionMismatch("unobservable_subspace: dimension mismatch");
  const int n = a.rows();
  const int p = c.rows();
  // Each power block is rescaled to unit magnitude; row scaling leaves the
  // kernel unchanged and keeps fast dynamics from swamping weak couplings.
  Matrix stack(n * p, n);
  Matrix block = c;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < n; ++j) stack(k * p + i, j) = block(i, j);
    if (k + 1 < n) {
      block = block * a;
      const double scale = block.max_abs();
      if (scale > 1.0) block = (1.0 / scale) * block;
    }
  }

  ObservabilityData out;
  out.unobservable_basis = kernel_basis(stack, tol);
  const int k = static_cast<int>(out.unobservable_basis.size());
  out.restricted_A = Matrix(k, k);
  if (k == 0) return out;  // vacuously stable

  for (int j = 0; j < k; ++j) {
    const Vec aq = a * out.unobservable_basis[j];
    for (int i = 0; i < k; ++i) out.restricted_A(i, j) = dot(out.unobservable_basis[i], aq);
  }
  const EigenDecomposition dec = eigen(out.restricted_A);
  out.restricted_eigenvalues = dec.eigenvalues;
  out.stable_on_unobservable = dec.converged;
  for (const Complex& ev : dec.eigenvalues)
    if (!(ev.real() < -1e-9)) out.stable_on_unobservable = false;
  return out;
}

HautusResult hautus_detectable(const Matrix& a, const Matrix& c, double gap) {
  if (!a.square() || c.cols() != a.rows())
    throw DimensionMismatch("hautus_detectable: dimension mismatch");
  const EigenDecomposition dec = eigen(a);
  check_spectral_quality(a, dec, "hautus_detectable");

  const double scale = 1.0 + a.inf_norm();
  std::vector<Complex> tested;
  HautusResult res;
  for (const Complex& s : dec.eigenvalues) {
    if (s.real() < -gap) continue;
    bool seen = false;
    for (const Complex& t : tested)
      if (std::abs(t - s) <= 1e-9 * scale) seen = true;
    if (seen) continue;
    tested.push_back(s);

    const std::vector<Vec> kernel = complex_stack_kernel(a, c, s, 1e-9);
    if (!kernel.empty()) {
      res.ok = false;
      res.witness_eigenvalue = s;
      const int n = a.rows();
      res.witness_vector.resize(n);
      for (int i = 0; i < n; ++i) res.witness_vector[i] = Complex(kernel[0][i], kernel[0][n + i]);
      const double nv = cnorm2(res.witness_vector);
      for (Complex& x : res.witness_vector) x /= nv;
      return res;
    }
  }
  return res;
}

HautusResult hautus_stabilizable(const Matrix& a, const Matrix& b, double gap) {
  return hautus_detectable(a.transpose(), b.transpose(), gap);
}

SpectralSplit spectral_split(const Matrix& a, double gap) {
  const EigenDecomposition dec = eigen(a);
  check_spectral_quality(a, dec, "spectral_split");
  const int n = a.rows();

  for (const Complex& ev : dec.eigenvalues) {
    const double dist = std::fabs(std::fabs(ev.real()) - gap);
    if (dist <= 0.5 * gap && std::fabs(ev.real()) > 1e-12)
      throw GapViolation("spectral_split: eigenvalue too close to the classification boundary");
  }

  // Complex eigenvector matrix and its inverse, realified.
  Matrix rv(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      rv(i, j) = dec.eigenvectors[j][i].real();
      rv(n + i, n + j) = dec.eigenvectors[j][i].real();
      rv(i, n + j) = -dec.eigenvectors[j][i].imag();
      rv(n + i, j) = dec.eigenvectors[j][i].imag();
    }
  Matrix rw;
  try {
    rw = solve_linear_many(rv, Matrix::identity(2 * n));
  } catch (const SingularMatrix&) {
    throw SpectralUnreliable("spectral_split: eigenvector matrix numerically singular");
  }

  SpectralSplit split;
  split.gap = gap;
  split.negative.projector = Matrix(n, n);
  split.zero.projector = Matrix(n, n);
  split.positive.projector = Matrix(n, n);
  for (int idx = 0; idx < n; ++idx) {
    const Complex ev = dec.eigenvalues[idx];
    SpectralGroup* grp = &split.zero;
    if (ev.real() < -gap) grp = &split.negative;
    else if (ev.real() > gap) grp = &split.positive;
    grp->eigenvalues.push_back(ev);
    grp->eigenvectors.push_back(dec.eigenvectors[idx]);
    // Rank-one eigenprojection v_i w_i with w_i = row idx of V^{-1}; real part.
    for (int i = 0; i < n; ++i) {
      const Complex vi = dec.eigenvectors[idx][i];
      for (int j = 0; j < n; ++j) {
        const Complex wj(rw(idx, j), rw(n + idx, j));
        grp->projector(i, j) += (vi * wj).real();
      }
    }
  }
  return split;
}

DecayEstimate semigroup_decay_estimate(const Matrix& a, const SpectralSplit& split,
                                       const std::vector<double>& t_samples) {
  DecayEstimate est;
  if (split.negative.eigenvalues.empty()) return est;
  double re_max = -1e300;
  for (const Complex& ev : split.negative.eigenvalues) re_max = std::max(re_max, ev.real());
  est.epsilon = -re_max;
  for (double t : t_samples) {
    const Matrix op = expm(a, t) * split.negative.projector;
    // Frobenius norm dominates the operator norm; fine for a reported bound.
    est.amplitude = std::max(est.amplitude, op.frobenius_norm() * std::exp(est.epsilon * t));
  }
  return est;
}

FeedbackResult stabilizing_feedback(const Matrix& a, const Matrix& b, double dt, double tol,
                                    double t_max) {
  FeedbackResult out;
  if (!hautus_stabilizable(a, b).ok) {
    out.status = FeedbackStatus::Unstabilizable;
    return out;
  }
  const int n = a.rows();
  const int m = b.cols();
  const GlqProblem pb = make_problem(a, b, Matrix::identity(n), Matrix::identity(m),
                                     Vec(n, 0.0), Vec(m, 0.0));
  const DreLimit limit = dre_limit(pb, dt, tol, t_max);
  if (limit.status != DreLimitStatus::Converged) {
    out.status = FeedbackStatus::NotConverged;
    return out;
  }
  out.F = -1.0 * (b.transpose() * limit.value);
  out.closed_loop_abscissa = spectral_abscissa(a + b * out.F);
  out.status = out.closed_loop_abscissa < -1e-9 ? FeedbackStatus::Ok : FeedbackStatus::NotStabilized;
  return out;
}

}  // namespace glqlab
