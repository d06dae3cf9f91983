#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace glqlab {

using Vec = std::vector<double>;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteState : std::runtime_error {
  double last_finite_time;
  NonFiniteState(const std::string& what, double t)
      : std::runtime_error(what), last_finite_time(t) {}
};

/// Dense real matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}
  Matrix(int rows, int cols, std::vector<double> entries);

  static Matrix identity(int n);
  static Matrix diagonal(const Vec& d);
  static Matrix from_rows(const std::vector<Vec>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }

  Matrix transpose() const;
  Vec col(int j) const;
  Vec row(int i) const;

  double max_abs() const;
  double frobenius_norm() const;
  double inf_norm() const;  // max row sum
  bool all_finite() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vec operator*(const Matrix& a, const Vec& x);

// Vector helpers.
Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(double s, const Vec& a);
void vec_axpy(double s, const Vec& x, Vec& y);  // y += s*x
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
bool all_finite(const Vec& a);

double cnorm2(const ComplexVector& a);
Complex cdot(const ComplexVector& a, const ComplexVector& b);  // conjugate-linear in a

struct EigenDecomposition {
  std::vector<Complex> eigenvalues;
  std::vector<ComplexVector> eigenvectors;  // unit norm, one per eigenvalue
  std::vector<double> residuals;            // ||A v - lambda v||
  bool converged = true;
};

/// LU factorization with partial pivoting, kept for repeated solves.
class LuFactorization {
 public:
  explicit LuFactorization(const Matrix& m);  // throws SingularMatrix
  Vec solve(const Vec& b) const;
  Matrix solve(const Matrix& b) const;  // column-wise

 private:
  Matrix lu_;
  std::vector<int> perm_;
};

/// Solves M y = b by LU with partial pivoting plus one refinement step.
/// Throws SingularMatrix when a pivot falls below 1e-12 * max|entry|.
Vec solve_linear(const Matrix& m, const Vec& b);
Matrix solve_linear_many(const Matrix& m, const Matrix& b);
Matrix inverse(const Matrix& m);

/// Orthonormal basis of the numerical null space of m, via column-pivoted
/// Householder QR of the transpose. Directions with diagonal magnitude below
/// tol * (largest column norm) count as singular. Empty result = trivial kernel.
std::vector<Vec> kernel_basis(const Matrix& m, double tol = 1e-9);

/// Eigenvalues by Hessenberg reduction + Francis double-shift QR; eigenvectors
/// by inverse iteration (3 sweeps per eigenvalue). Partial results are returned
/// with converged=false when the sweep budget runs out.
EigenDecomposition eigen(const Matrix& m);

/// Smallest eigenvalue of a symmetric matrix (real spectrum assumed).
double symmetric_min_eigenvalue(const Matrix& m);
double spectral_abscissa(const Matrix& m);  // max Re of eigenvalues

/// e^{t M} by scaling and squaring with a truncated Taylor series.
Matrix expm(const Matrix& m, double t = 1.0);

struct OdeArc {
  std::vector<double> times;
  std::vector<Vec> states;
  bool finite = true;              // false when integration hit a non-finite state
  double last_finite_time = 0.0;   // equals t1 when finite
};

/// Classical RK4 on a uniform grid; the final step is shortened to land on t1.
/// On blow-up the arc is truncated at the last finite sample and finite=false.
OdeArc rk4_integrate(const std::function<Vec(double, const Vec&)>& f, const Vec& y0,
                     double t0, double t1, double dt);

/// Composite Simpson rule on uniformly spaced samples; for an even sample
/// count the last interval falls back to the trapezoid rule.
double simpson_integrate(const std::vector<double>& values, double dt);

/// Deterministic uniform generator used by the seeded random suites.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  uint64_t next_u64();
  double uniform(double lo = 0.0, double hi = 1.0);
  Vec uniform_vec(int n, double lo, double hi);
  Matrix uniform_matrix(int rows, int cols, double lo, double hi);

 private:
  uint64_t state_;
};

}  // namespace glqlab
