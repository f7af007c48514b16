#pragma once

// Dense linear-algebra primitives: Chebyshev evaluation, an incrementally
// updated thin QR factorization, the sum-to-one constrained least-squares
// solve used by Anderson Mixing, and small dense eigen/singular-value solves.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdaam {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Raised when an iterative dense eigen-solve exhausts its internal budget.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Chebyshev polynomial of the first kind, T_degree(x).
///
/// Uses the three-term recurrence on [-1, 1] and the cosh/arccosh closed form
/// outside it. Degrees 0..2 are evaluated exactly from their monomial form.
double chebyshev_t(int degree, double x);

/// Thin QR factorization M = Q R grown one column at a time.
///
/// Columns are appended with a modified Gram-Schmidt sweep. A second sweep is
/// run when the first one cancels most of the column, which keeps Q
/// orthonormal to working precision for the short update sequences Anderson
/// Mixing produces.
class ThinQR {
 public:
  enum class AppendResult { kAppended, kDependentColumn };

  static constexpr double kDefaultDropTol = 1e-10;

  ThinQR() = default;
  ThinQR(Index rows, Index capacity);

  /// Appends `col`. Returns kDependentColumn, leaving the factors untouched,
  /// when the orthogonalized residual is below drop_tol * ||col||.
  AppendResult append_column(const Vector& col, double drop_tol = kDefaultDropTol);

  void clear() { cols_ = 0; }

  Index rows() const { return q_.rows(); }
  Index cols() const { return cols_; }
  Index capacity() const { return q_.cols(); }

  auto q() const { return q_.leftCols(cols_); }
  auto r() const { return r_.topLeftCorner(cols_, cols_); }

  /// Solves min ||rhs - Q R x|| for the current factors by back substitution.
  Vector solve_least_squares(const Vector& rhs) const;

 private:
  Matrix q_;
  Matrix r_;
  Index cols_ = 0;
};

/// Mixing weights in the two equivalent parameterizations.
///
/// beta has p+1 entries and sums to one; gamma has p entries and solves the
/// unconstrained form min ||f_t - dF gamma||. The maps are
///   beta_0 = gamma_0, beta_i = gamma_i - gamma_{i-1}, beta_p = 1 - gamma_{p-1}.
struct WeightVector {
  Vector beta;

  static WeightVector from_gamma(const Vector& gamma);
  Vector to_gamma() const;
  double sum() const { return beta.sum(); }
};

struct MixingSolution {
  WeightVector weights;
  Vector gamma;
  /// ||F beta||_2 at the returned weights.
  double residual_norm = 0.0;
  /// Set when the diagonal of R spans more than 1e12; a Tikhonov term was added.
  bool ill_conditioned = false;
  /// Residual-difference columns skipped because they were linearly dependent.
  int dropped_columns = 0;
};

struct MixingOptions {
  double drop_tol = ThinQR::kDefaultDropTol;
  /// Tikhonov weight relative to ||dF||_F^2, used only when ill-conditioned.
  double relative_regularization = 1e-12;
  double condition_limit = 1e12;
};

/// Solves min ||F beta|| subject to sum(beta) = 1, where the columns of F are
/// the residuals f_{t-p}..f_t (oldest first).
MixingSolution solve_mixing_weights(const Matrix& residuals,
                                    const MixingOptions& options = {});

/// Solves R gamma = rhs for upper-triangular R, adding a Tikhonov term
/// delta * ||gamma||^2 when `regularize` is set. Shared by the batch solver and
/// the streaming Anderson mixer.
Vector solve_triangular_regularized(const Eigen::Ref<const Matrix>& r,
                                    const Vector& rhs, bool regularize,
                                    double delta);

/// True when max|R_ii| / min|R_ii| exceeds `limit` (or any R_ii is zero).
bool triangular_ill_conditioned(const Eigen::Ref<const Matrix>& r, double limit);

struct Spectrum {
  std::vector<Complex> eigenvalues;
  /// max_i ||A v_i - lambda_i v_i|| over unit eigenvectors.
  double residual_bound = 0.0;
};

/// All eigenvalues of a square matrix of dimension <= 2000.
Spectrum dense_eigenvalues(const Matrix& a);

/// Singular values, descending.
Vector singular_values(const Matrix& a);

/// Largest distance between paired elements of two eigenvalue sets of equal
/// size, pairing greedily by nearest neighbour. Returns +inf on size mismatch.
double spectrum_mismatch(const std::vector<Complex>& lhs,
                         const std::vector<Complex>& rhs);

}  // namespace gdaam
