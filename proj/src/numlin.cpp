#include "glqlab/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace glqlab {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

}  // namespace

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("Matrix: entry count does not match dimensions");
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) return Matrix();
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (rows[i].size() != static_cast<size_t>(m.cols()))
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec Matrix::col(int j) const {
  Vec c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Vec Matrix::row(int i) const {
  Vec r(cols_);
  for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

double Matrix::inf_norm() const {
  double m = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += std::fabs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

bool Matrix::all_finite() const {
  for (double x : a_)
    if (!std::isfinite(x)) return false;
  return true;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

Vec operator*(const Matrix& a, const Vec& x) {
  if (a.cols() != static_cast<int>(x.size()))
    throw std::invalid_argument("matvec: dimensions differ");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec vec_scale(double s, const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

void vec_axpy(double s, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

bool all_finite(const Vec& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

double cnorm2(const ComplexVector& a) {
  double s = 0.0;
  for (const Complex& x : a) s += std::norm(x);
  return std::sqrt(s);
}

Complex cdot(const ComplexVector& a, const ComplexVector& b) {
  Complex s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

namespace {

// Factors in place; tiny pivots are either rejected or clamped (clamped mode
// serves inverse iteration, where near-singularity is the point).
void lu_factor(Matrix& a, std::vector<int>& perm, bool clamp_tiny) {
  const int n = a.rows();
  const double scale = a.max_abs();
  const double tiny = 1e-12 * std::max(scale, std::numeric_limits<double>::min());
  // Replacement value for near-singular pivots in inverse-iteration mode.
  const double clamp_val = std::max(1e-14, 2.22e-16 * scale);
  perm.resize(n);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    perm[k] = piv;
    if (piv != k)
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
    if (best < tiny) {
      if (!clamp_tiny) throw SingularMatrix("solve_linear: pivot below tolerance");
      a(k, k) = (a(k, k) >= 0.0 ? clamp_val : -clamp_val);
    }
    const double inv = 1.0 / a(k, k);
    for (int i = k + 1; i < n; ++i) {
      a(i, k) *= inv;
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
}

Vec lu_solve(const Matrix& lu, const std::vector<int>& perm, Vec b) {
  const int n = lu.rows();
  // Rows were swapped in full during factorization, so all interchanges apply
  // to b before the triangular solves.
  for (int k = 0; k < n; ++k)
    if (perm[k] != k) std::swap(b[k], b[perm[k]]);
  for (int k = 0; k < n; ++k)
    for (int i = k + 1; i < n; ++i) b[i] -= lu(i, k) * b[k];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= lu(i, j) * b[j];
    b[i] /= lu(i, i);
  }
  return b;
}

}  // namespace

LuFactorization::LuFactorization(const Matrix& m) : lu_(m) {
  if (!m.square()) throw std::invalid_argument("LuFactorization: matrix not square");
  lu_factor(lu_, perm_, /*clamp_tiny=*/false);
}

Vec LuFactorization::solve(const Vec& b) const { return lu_solve(lu_, perm_, b); }

Matrix LuFactorization::solve(const Matrix& b) const {
  Matrix x(b.rows(), b.cols());
  for (int j = 0; j < b.cols(); ++j) {
    Vec col = lu_solve(lu_, perm_, b.col(j));
    for (int i = 0; i < b.rows(); ++i) x(i, j) = col[i];
  }
  return x;
}

Vec solve_linear(const Matrix& m, const Vec& b) {
  if (!m.square() || m.rows() != static_cast<int>(b.size()))
    throw std::invalid_argument("solve_linear: dimension mismatch");
  LuFactorization lu(m);
  Vec y = lu.solve(b);
  // One refinement pass keeps the residual near machine precision.
  Vec r = vec_sub(b, m * y);
  Vec dy = lu.solve(r);
  for (size_t i = 0; i < y.size(); ++i) y[i] += dy[i];
  return y;
}

Matrix solve_linear_many(const Matrix& m, const Matrix& b) {
  LuFactorization lu(m);
  Matrix y = lu.solve(b);
  Matrix r = b - m * y;
  return y + lu.solve(r);
}

Matrix inverse(const Matrix& m) { return solve_linear_many(m, Matrix::identity(m.rows())); }

// ---------------------------------------------------------------------------
// Kernel basis by column-pivoted Householder QR of the transpose
// ---------------------------------------------------------------------------

std::vector<Vec> kernel_basis(const Matrix& m, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("kernel_basis: tol must be positive");
  const int c = m.cols();  // kernel lives in R^c
  const int r = m.rows();
  Matrix b = m.transpose();  // c x r

  double max_col = 0.0;
  for (int j = 0; j < r; ++j) max_col = std::max(max_col, norm2(b.col(j)));
  const double threshold = tol * max_col;

  std::vector<Vec> reflectors;
  const int kmax = std::min(c, r);
  int rank = 0;
  for (int k = 0; k < kmax; ++k) {
    // Pivot: trailing column with the largest remaining norm.
    int piv = -1;
    double best = threshold;
    for (int j = k; j < r; ++j) {
      double s = 0.0;
      for (int i = k; i < c; ++i) s += b(i, j) * b(i, j);
      s = std::sqrt(s);
      if (s > best) {
        best = s;
        piv = j;
      }
    }
    if (piv < 0) break;  // everything left is numerically singular
    if (piv != k)
      for (int i = 0; i < c; ++i) std::swap(b(i, k), b(i, piv));

    Vec v(c - k, 0.0);
    for (int i = k; i < c; ++i) v[i - k] = b(i, k);
    const double alpha = -sign_of(best, v[0]);
    v[0] -= alpha;
    const double vn = norm2(v);
    if (vn > 0.0) {
      for (double& x : v) x /= vn;
      for (int j = k; j < r; ++j) {
        double s = 0.0;
        for (int i = k; i < c; ++i) s += v[i - k] * b(i, j);
        s *= 2.0;
        for (int i = k; i < c; ++i) b(i, j) -= s * v[i - k];
      }
    }
    reflectors.push_back(std::move(v));
    ++rank;
  }

  const int kdim = c - rank;
  std::vector<Vec> basis;
  if (kdim == 0) return basis;

  // Trailing columns of Q = H_0 ... H_{rank-1}.
  basis.reserve(kdim);
  for (int j = rank; j < c; ++j) {
    Vec q(c, 0.0);
    q[j] = 1.0;
    for (int k = rank - 1; k >= 0; --k) {
      const Vec& v = reflectors[k];
      double s = 0.0;
      for (int i = k; i < c; ++i) s += v[i - k] * q[i];
      s *= 2.0;
      for (int i = k; i < c; ++i) q[i] -= s * v[i - k];
    }
    basis.push_back(std::move(q));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Eigendecomposition: Hessenberg + Francis double-shift QR, inverse iteration
// ---------------------------------------------------------------------------

namespace {

void hessenberg_reduce(Matrix& h) {
  const int n = h.rows();
  for (int k = 0; k < n - 2; ++k) {
    double scale = 0.0;
    for (int i = k + 1; i < n; ++i) scale = std::max(scale, std::fabs(h(i, k)));
    if (scale == 0.0) continue;

    Vec v(n - k - 1, 0.0);
    double nrm = 0.0;
    for (int i = k + 1; i < n; ++i) {
      v[i - k - 1] = h(i, k) / scale;
      nrm += v[i - k - 1] * v[i - k - 1];
    }
    nrm = std::sqrt(nrm);
    const double alpha = -sign_of(nrm, v[0]);
    v[0] -= alpha;
    const double vn = norm2(v);
    if (vn == 0.0) continue;
    for (double& x : v) x /= vn;

    // Left: rows k+1..n-1 (their leading columns are already zero).
    for (int j = k; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += v[i - k - 1] * h(i, j);
      s *= 2.0;
      for (int i = k + 1; i < n; ++i) h(i, j) -= s * v[i - k - 1];
    }
    // Right: columns k+1..n-1, all rows.
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j - k - 1];
      s *= 2.0;
      for (int j = k + 1; j < n; ++j) h(i, j) -= s * v[j - k - 1];
    }
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
// Returns false when a block fails to deflate within the sweep budget.
bool francis_qr(Matrix& h, std::vector<Complex>& out) {
  const int n = h.rows();
  out.assign(n, Complex(0.0, 0.0));
  const double eps = std::numeric_limits<double>::epsilon();

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(h(i, j));
  if (anorm == 0.0) return true;  // zero matrix

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::fabs(h(l, l - 1)) <= eps * s) {
          h(l, l - 1) = 0.0;
          break;
        }
      }
      double x = h(nn, nn);
      if (l == nn) {
        out[nn] = Complex(x + t, 0.0);
        --nn;
      } else {
        double y = h(nn - 1, nn - 1);
        double w = h(nn, nn - 1) * h(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::fabs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            out[nn - 1] = out[nn] = Complex(x + z, 0.0);
            if (z != 0.0) out[nn] = Complex(x - w / z, 0.0);
          } else {
            out[nn] = Complex(x + p, z);
            out[nn - 1] = std::conj(out[nn]);
          }
          nn -= 2;
        } else {
          if (its == 30) return false;
          if (its == 10 || its == 20) {
            t += x;
            for (int i = 0; i <= nn; ++i) h(i, i) -= x;
            double s = std::fabs(h(nn, nn - 1)) + std::fabs(h(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (m = nn - 2; m >= l; --m) {
            z = h(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
            q = h(m + 1, m + 1) - z - rr - ss;
            r = h(m + 2, m + 1);
            double sca = std::fabs(p) + std::fabs(q) + std::fabs(r);
            p /= sca;
            q /= sca;
            r /= sca;
            if (m == l) break;
            const double u = std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r));
            const double v =
                std::fabs(p) * (std::fabs(h(m - 1, m - 1)) + std::fabs(z) + std::fabs(h(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            h(i, i - 2) = 0.0;
            if (i != m + 2) h(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = h(k, k - 1);
              q = h(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = h(k + 2, k - 1);
              x = std::fabs(p) + std::fabs(q) + std::fabs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) h(k, k - 1) = -h(k, k - 1);
            } else {
              h(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            double yy = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              double pp = h(k, j) + q * h(k + 1, j);
              if (k != nn - 1) {
                pp += r * h(k + 2, j);
                h(k + 2, j) -= pp * z;
              }
              h(k + 1, j) -= pp * yy;
              h(k, j) -= pp * x;
            }
            const int mmin = std::min(nn, k + 3);
            for (int i = l; i <= mmin; ++i) {
              double pp = x * h(i, k) + yy * h(i, k + 1);
              if (k != nn - 1) {
                pp += z * h(i, k + 2);
                h(i, k + 2) -= pp * r;
              }
              h(i, k + 1) -= pp * q;
              h(i, k) -= pp;
            }
          }
        }
      }
    } while (l < nn - 1 && nn >= 0);
  }
  return true;
}

// Realified (A - lambda I) for complex shifts: [[A-aI, bI], [-bI, A-aI]].
Matrix realified_shift(const Matrix& a, Complex lambda) {
  const int n = a.rows();
  Matrix m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      m(n + i, n + j) = a(i, j);
    }
  for (int i = 0; i < n; ++i) {
    m(i, i) -= lambda.real();
    m(n + i, n + i) -= lambda.real();
    m(i, n + i) = lambda.imag();
    m(n + i, i) = -lambda.imag();
  }
  return m;
}

ComplexVector matvec_complex(const Matrix& a, const ComplexVector& x) {
  const int n = a.rows();
  ComplexVector y(n, Complex(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    Complex s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

void normalize_phase(ComplexVector& v) {
  size_t imax = 0;
  double best = 0.0;
  for (size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      imax = i;
    }
  if (best == 0.0) return;
  const Complex phase = std::conj(v[imax]) / best;
  for (Complex& x : v) x *= phase;
}

}  // namespace

EigenDecomposition eigen(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("eigen: matrix not square");
  const int n = m.rows();
  EigenDecomposition dec;
  if (n == 0) return dec;

  Matrix h = m;
  hessenberg_reduce(h);
  dec.converged = francis_qr(h, dec.eigenvalues);
  if (!dec.converged) {
    dec.residuals.assign(dec.eigenvalues.size(), std::numeric_limits<double>::infinity());
    return dec;
  }

  // Deterministic ordering: descending real part, then descending imaginary.
  std::sort(dec.eigenvalues.begin(), dec.eigenvalues.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  const double scale = std::max(1.0, m.inf_norm());
  const double cluster_tol = 1e-8 * scale;
  dec.eigenvectors.resize(n);
  dec.residuals.resize(n);

  for (int i = 0; i < n; ++i) {
    const Complex lambda = dec.eigenvalues[i];
    std::vector<int> cluster;
    for (int j = 0; j < i; ++j)
      if (std::abs(dec.eigenvalues[j] - lambda) <= cluster_tol) cluster.push_back(j);

    Matrix shifted = realified_shift(m, lambda);
    std::vector<int> perm;
    lu_factor(shifted, perm, /*clamp_tiny=*/true);

    Rng rng(0x5eedULL + 131 * static_cast<uint64_t>(i));
    ComplexVector v(n);
    for (int d = 0; d < n; ++d) v[d] = Complex(rng.uniform(-1.0, 1.0), 0.0);

    for (int sweep = 0; sweep < 3; ++sweep) {
      Vec rhs(2 * static_cast<size_t>(n));
      for (int d = 0; d < n; ++d) {
        rhs[d] = v[d].real();
        rhs[n + d] = v[d].imag();
      }
      Vec sol = lu_solve(shifted, perm, rhs);
      for (int d = 0; d < n; ++d) v[d] = Complex(sol[d], sol[n + d]);
      for (int j : cluster) {
        const Complex proj = cdot(dec.eigenvectors[j], v);
        for (int d = 0; d < n; ++d) v[d] -= proj * dec.eigenvectors[j][d];
      }
      const double nv = cnorm2(v);
      if (nv == 0.0 || !std::isfinite(nv)) {
        for (int d = 0; d < n; ++d) v[d] = Complex(rng.uniform(-1.0, 1.0), 0.0);
        const double rv = cnorm2(v);
        for (Complex& x : v) x /= rv;
        continue;
      }
      for (Complex& x : v) x /= nv;
    }

    normalize_phase(v);
    ComplexVector av = matvec_complex(m, v);
    for (int d = 0; d < n; ++d) av[d] -= lambda * v[d];
    dec.eigenvectors[i] = std::move(v);
    dec.residuals[i] = cnorm2(av);
  }
  return dec;
}

double symmetric_min_eigenvalue(const Matrix& m) {
  EigenDecomposition dec = eigen(m);
  if (!dec.converged) throw std::runtime_error("symmetric_min_eigenvalue: QR did not converge");
  double lo = std::numeric_limits<double>::infinity();
  for (const Complex& ev : dec.eigenvalues) lo = std::min(lo, ev.real());
  return lo;
}

double spectral_abscissa(const Matrix& m) {
  EigenDecomposition dec = eigen(m);
  if (!dec.converged) throw std::runtime_error("spectral_abscissa: QR did not converge");
  double hi = -std::numeric_limits<double>::infinity();
  for (const Complex& ev : dec.eigenvalues) hi = std::max(hi, ev.real());
  return hi;
}

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

Matrix expm(const Matrix& m, double t) {
  if (!m.square()) throw std::invalid_argument("expm: matrix not square");
  const int n = m.rows();
  Matrix a = t * m;
  const double nrm = a.inf_norm();
  int squarings = 0;
  if (nrm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    a = std::ldexp(1.0, -squarings) * a;
  }

  Matrix e = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = (1.0 / k) * (term * a);
    e = e + term;
    if (term.max_abs() <= 1e-17 * std::max(1.0, e.max_abs())) break;
  }
  for (int s = 0; s < squarings; ++s) e = e * e;
  return e;
}

// ---------------------------------------------------------------------------
// RK4 and quadrature
// ---------------------------------------------------------------------------

OdeArc rk4_integrate(const std::function<Vec(double, const Vec&)>& f, const Vec& y0,
                     double t0, double t1, double dt) {
  if (dt <= 0.0 || t1 <= t0) throw std::invalid_argument("rk4_integrate: need dt > 0, t1 > t0");
  OdeArc arc;
  arc.times.push_back(t0);
  arc.states.push_back(y0);
  arc.last_finite_time = t0;

  const double span = t1 - t0;
  const long full = static_cast<long>(std::floor(span / dt + 1e-9));
  Vec y = y0;
  long k = 0;
  double t = t0;
  while (t < t1 - 1e-12 * std::max(1.0, std::fabs(t1))) {
    const double h = (k < full) ? dt : (t1 - t);
    if (h <= 0.0) break;
    Vec k1 = f(t, y);
    Vec y2 = y;
    vec_axpy(0.5 * h, k1, y2);
    Vec k2 = f(t + 0.5 * h, y2);
    Vec y3 = y;
    vec_axpy(0.5 * h, k2, y3);
    Vec k3 = f(t + 0.5 * h, y3);
    Vec y4 = y;
    vec_axpy(h, k3, y4);
    Vec k4 = f(t + h, y4);
    for (size_t i = 0; i < y.size(); ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    ++k;
    t = (k <= full) ? t0 + k * dt : t1;
    if (t > t1) t = t1;
    if (!all_finite(y)) {
      arc.finite = false;
      return arc;
    }
    arc.times.push_back(t);
    arc.states.push_back(y);
    arc.last_finite_time = t;
  }
  return arc;
}

double simpson_integrate(const std::vector<double>& values, double dt) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dt * (values[0] + values[1]);
  size_t simpson_end = n;                   // one past the last Simpson sample
  const bool tail = (n % 2 == 0);           // even sample count: trapezoid tail
  if (tail) simpson_end = n - 1;
  double s = values[0] + values[simpson_end - 1];
  for (size_t i = 1; i + 1 < simpson_end; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * values[i];
  s *= dt / 3.0;
  if (tail) s += 0.5 * dt * (values[n - 2] + values[n - 1]);
  return s;
}

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64)
// ---------------------------------------------------------------------------

uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Vec Rng::uniform_vec(int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Matrix Rng::uniform_matrix(int rows, int cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

}  // namespace glqlab
