#include "gdaam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gdaam {

double chebyshev_t(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("chebyshev_t: negative degree");
  switch (degree) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return 2.0 * x * x - 1.0;
    default: break;
  }
  if (std::abs(x) <= 1.0) {
    double prev = 1.0;
    double curr = x;
    for (int k = 2; k <= degree; ++k) {
      const double next = 2.0 * x * curr - prev;
      prev = curr;
      curr = next;
    }
    return curr;
  }
  const double magnitude = std::cosh(degree * std::acosh(std::abs(x)));
  return (x < 0.0 && degree % 2 == 1) ? -magnitude : magnitude;
}

ThinQR::ThinQR(Index rows, Index capacity)
    : q_(rows, std::max<Index>(capacity, 1)),
      r_(Matrix::Zero(std::max<Index>(capacity, 1), std::max<Index>(capacity, 1))) {}

ThinQR::AppendResult ThinQR::append_column(const Vector& col, double drop_tol) {
  if (q_.rows() == 0 && cols_ == 0) {
    q_.resize(col.size(), 4);
    r_ = Matrix::Zero(4, 4);
  }
  if (col.size() != q_.rows())
    throw std::invalid_argument("ThinQR::append_column: length mismatch");

  const double col_norm = col.norm();
  if (!(col_norm > 0.0)) return AppendResult::kDependentColumn;

  Vector v = col;
  Vector coeffs = Vector::Zero(cols_);
  for (Index i = 0; i < cols_; ++i) {
    coeffs(i) = q_.col(i).dot(v);
    v.noalias() -= coeffs(i) * q_.col(i);
  }
  // Reorthogonalize when the sweep cancelled most of the column.
  if (cols_ > 0 && v.norm() < M_SQRT1_2 * col_norm) {
    for (Index i = 0; i < cols_; ++i) {
      const double s = q_.col(i).dot(v);
      coeffs(i) += s;
      v.noalias() -= s * q_.col(i);
    }
  }
  const double rnorm = v.norm();
  if (rnorm < drop_tol * col_norm) return AppendResult::kDependentColumn;

  if (cols_ == q_.cols()) {
    const Index grown = std::max<Index>(2 * q_.cols(), 4);
    q_.conservativeResize(Eigen::NoChange, grown);
    Matrix r_grown = Matrix::Zero(grown, grown);
    r_grown.topLeftCorner(cols_, cols_) = r_.topLeftCorner(cols_, cols_);
    r_ = std::move(r_grown);
  }
  r_.col(cols_).head(cols_) = coeffs;
  r_.col(cols_).tail(r_.rows() - cols_).setZero();
  r_(cols_, cols_) = rnorm;
  q_.col(cols_) = v / rnorm;
  ++cols_;
  return AppendResult::kAppended;
}

Vector ThinQR::solve_least_squares(const Vector& rhs) const {
  if (cols_ == 0) return Vector();
  const Vector qtb = q().transpose() * rhs;
  return r().triangularView<Eigen::Upper>().solve(qtb);
}

WeightVector WeightVector::from_gamma(const Vector& gamma) {
  const Index p = gamma.size();
  WeightVector w;
  w.beta.resize(p + 1);
  if (p == 0) {
    w.beta(0) = 1.0;
    return w;
  }
  w.beta(0) = gamma(0);
  for (Index i = 1; i < p; ++i) w.beta(i) = gamma(i) - gamma(i - 1);
  w.beta(p) = 1.0 - gamma(p - 1);
  return w;
}

Vector WeightVector::to_gamma() const {
  const Index p = beta.size() - 1;
  Vector gamma(std::max<Index>(p, 0));
  double running = 0.0;
  for (Index i = 0; i < p; ++i) {
    running += beta(i);
    gamma(i) = running;
  }
  return gamma;
}

bool triangular_ill_conditioned(const Eigen::Ref<const Matrix>& r, double limit) {
  if (r.rows() == 0) return false;
  const Vector diag = r.diagonal().cwiseAbs();
  const double lo = diag.minCoeff();
  const double hi = diag.maxCoeff();
  if (!(lo > 0.0)) return true;
  return hi / lo > limit;
}

Vector solve_triangular_regularized(const Eigen::Ref<const Matrix>& r,
                                    const Vector& rhs, bool regularize,
                                    double delta) {
  if (!regularize) return r.triangularView<Eigen::Upper>().solve(rhs);
  // (R^T R + delta I) gamma = R^T rhs
  Matrix normal = r.transpose() * r;
  normal.diagonal().array() += delta;
  return normal.llt().solve(r.transpose() * rhs);
}

MixingSolution solve_mixing_weights(const Matrix& residuals,
                                    const MixingOptions& options) {
  if (residuals.cols() < 1)
    throw std::invalid_argument("solve_mixing_weights: need at least one column");

  const Index m = residuals.cols();
  const Index p = m - 1;
  MixingSolution out;
  Vector gamma = Vector::Zero(p);

  if (p > 0) {
    ThinQR qr(residuals.rows(), p);
    std::vector<Index> kept;
    kept.reserve(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) {
      const Vector diff = residuals.col(i + 1) - residuals.col(i);
      if (qr.append_column(diff, options.drop_tol) == ThinQR::AppendResult::kAppended)
        kept.push_back(i);
      else
        ++out.dropped_columns;
    }
    if (qr.cols() > 0) {
      const Vector qtf = qr.q().transpose() * residuals.col(p);
      out.ill_conditioned = triangular_ill_conditioned(qr.r(), options.condition_limit);
      const double delta =
          options.relative_regularization * qr.r().squaredNorm();
      const Vector reduced =
          solve_triangular_regularized(qr.r(), qtf, out.ill_conditioned, delta);
      for (std::size_t k = 0; k < kept.size(); ++k)
        gamma(kept[k]) = reduced(static_cast<Index>(k));
    }
  }

  out.gamma = gamma;
  out.weights = WeightVector::from_gamma(gamma);
  out.residual_norm = (residuals * out.weights.beta).norm();
  return out;
}

Spectrum dense_eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("dense_eigenvalues: matrix must be square");
  if (a.rows() < 1 || a.rows() > 2000)
    throw std::invalid_argument("dense_eigenvalues: dimension must be in [1, 2000]");

  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NonConvergence("dense_eigenvalues: QR iteration did not converge");

  const Eigen::VectorXcd values = solver.eigenvalues();
  Eigen::MatrixXcd vectors = solver.eigenvectors();
  const Eigen::MatrixXcd ac = a.cast<Complex>();

  Spectrum out;
  out.eigenvalues.assign(values.data(), values.data() + values.size());
  for (Index i = 0; i < values.size(); ++i) {
    const double nv = vectors.col(i).norm();
    if (nv > 0.0) vectors.col(i) /= nv;
  }
  const Eigen::MatrixXcd residual =
      ac * vectors - vectors * values.asDiagonal();
  out.residual_bound = residual.colwise().norm().maxCoeff();
  return out;
}

Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector();
  // BDCSVD falls back to Jacobi sweeps for small blocks; values come out sorted
  // in decreasing order.
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

double spectrum_mismatch(const std::vector<Complex>& lhs,
                         const std::vector<Complex>& rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(rhs.size(), false);
  double worst = 0.0;
  for (const Complex& z : lhs) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - rhs[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace gdaam
