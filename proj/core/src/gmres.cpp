#include "gdaam/gmres.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gdaam {

LinearOperator LinearOperator::from_matrix(Matrix a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("LinearOperator::from_matrix: matrix must be square");
  LinearOperator op;
  op.dimension = a.rows();
  op.apply = [m = std::move(a)](const Vector& x) -> Vector { return m * x; };
  return op;
}

namespace {

Vector hessenberg_solution(const Matrix& h, const Vector& g, Index k) {
  return h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
}

}  // namespace

GmresCycle gmres_cycle(const LinearOperator& a, const Vector& b, const Vector& x0,
                       int m, const GmresCycleOptions& options) {
  const Index n = a.dimension;
  if (b.size() != n || x0.size() != n)
    throw std::invalid_argument("gmres_cycle: dimension mismatch");
  if (m < 0) throw std::invalid_argument("gmres_cycle: m must be >= 0");
  m = static_cast<int>(std::min<Index>(m, n));

  GmresCycle out;
  const Vector r0 = b - a.apply(x0);
  const double beta = r0.norm();
  out.residual_history.push_back(beta);
  if (options.record_iterates) out.iterates.push_back(x0);

  const double b_norm = b.norm();
  const double reference = b_norm > 0.0 ? b_norm : beta;
  const double breakdown_level = options.breakdown_tol * reference;
  if (beta == 0.0 || beta <= breakdown_level || m == 0) {
    out.solution = x0;
    out.breakdown = beta == 0.0 || beta <= breakdown_level;
    return out;
  }

  Matrix v(n, m + 1);
  Matrix h = Matrix::Zero(m + 1, m);
  Vector cs = Vector::Zero(m);
  Vector sn = Vector::Zero(m);
  Vector g = Vector::Zero(m + 1);
  g(0) = beta;
  v.col(0) = r0 / beta;

  int steps = 0;
  for (int j = 0; j < m; ++j) {
    Vector w = a.apply(v.col(j));
    for (int i = 0; i <= j; ++i) {
      h(i, j) = w.dot(v.col(i));
      w.noalias() -= h(i, j) * v.col(i);
    }
    const double subdiag = w.norm();
    h(j + 1, j) = subdiag;

    for (int i = 0; i < j; ++i) {
      const double t = cs(i) * h(i, j) + sn(i) * h(i + 1, j);
      h(i + 1, j) = -sn(i) * h(i, j) + cs(i) * h(i + 1, j);
      h(i, j) = t;
    }
    const double denom = std::hypot(h(j, j), h(j + 1, j));
    if (denom == 0.0) {
      // A v_j vanished on a singular operator; nothing more to gain.
      out.breakdown = true;
      break;
    }
    cs(j) = h(j, j) / denom;
    sn(j) = h(j + 1, j) / denom;
    h(j, j) = denom;
    h(j + 1, j) = 0.0;
    g(j + 1) = -sn(j) * g(j);
    g(j) = cs(j) * g(j);

    steps = j + 1;
    out.residual_history.push_back(std::abs(g(j + 1)));
    if (options.record_iterates) {
      const Vector y = hessenberg_solution(h, g, steps);
      out.iterates.push_back(x0 + v.leftCols(steps) * y);
    }
    if (subdiag <= breakdown_level) {
      out.breakdown = true;
      break;
    }
    if (std::abs(g(j + 1)) <= options.stop_below) break;
    if (j + 1 < m) v.col(j + 1) = w / subdiag;
  }

  out.steps = steps;
  if (steps == 0) {
    out.solution = x0;
  } else if (options.record_iterates) {
    out.solution = out.iterates.back();
  } else {
    out.solution = x0 + v.leftCols(steps) * hessenberg_solution(h, g, steps);
  }
  return out;
}

GmresReport gmres_restarted(const LinearOperator& a, const Vector& b,
                            const Vector& x0, int m, double tol, int max_cycles) {
  if (m < 1) throw std::invalid_argument("gmres_restarted: m must be >= 1");
  GmresReport report;
  Vector x = x0;
  double residual = (b - a.apply(x)).norm();
  const double b_norm = b.norm();
  const double reference = b_norm > 0.0 ? b_norm : residual;
  const double target = tol * reference;
  report.residual_history.push_back(residual);

  Vector best = x;
  double best_residual = residual;
  if (residual <= target || residual == 0.0) {
    report.solution = x;
    return report;
  }

  GmresCycleOptions options;
  options.stop_below = target;
  while (report.cycles < max_cycles) {
    GmresCycle cycle = gmres_cycle(a, b, x, m, options);
    ++report.cycles;
    report.residual_history.insert(report.residual_history.end(),
                                   cycle.residual_history.begin() + 1,
                                   cycle.residual_history.end());
    x = std::move(cycle.solution);
    residual = (b - a.apply(x)).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best = x;
    }
    if (residual <= target) {
      report.status = GmresStatus::kConverged;
      report.solution = x;
      return report;
    }
  }
  report.status = GmresStatus::kMaxCyclesExceeded;
  report.solution = best;
  return report;
}

}  // namespace gdaam
