#include "gdaam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gdaam {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

Complex alt_eigenvalue(double s, int sign) {
  const Complex root = std::sqrt(Complex(s * s - 4.0, 0.0));
  return s * (s + static_cast<double>(sign) * root) / 2.0;
}

void require_positive_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidEta("eta must be a positive number");
}

}  // namespace

std::string_view to_string(RateTheorem theorem) {
  switch (theorem) {
    case RateTheorem::kSimChebyshev: return "sim_chebyshev";
    case RateTheorem::kAltDisk: return "alt_disk";
    case RateTheorem::kQuadElman: return "quad_elman";
  }
  return "unknown";
}

Spectrum sim_operator_spectrum(const BilinearGame& game, double eta) {
  require_positive_eta(eta);
  const Matrix& a = game.a;
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();

  // For (u_j, +-i v_j) / sqrt(2) the residual of J = [[0, eta A], [-eta A^T, 0]]
  // is eta (+-i (A v_j - sigma_j u_j), -(A^T u_j - sigma_j v_j)) / sqrt(2).
  const Matrix left = a * v - u * sigma.asDiagonal();
  const Matrix right = a.transpose() * u - v * sigma.asDiagonal();

  Spectrum out;
  out.residual_bound = 0.0;
  for (Index j = 0; j < sigma.size(); ++j) {
    const double s = eta * sigma(j);
    out.eigenvalues.emplace_back(0.0, s);
    out.eigenvalues.emplace_back(0.0, -s);
    const double res = eta * std::sqrt(left.col(j).squaredNorm() + right.col(j).squaredNorm()) /
                       std::sqrt(2.0);
    out.residual_bound = std::max(out.residual_bound, res);
  }
  return out;
}

Spectrum alt_operator_spectrum(const BilinearGame& game, double eta) {
  require_positive_eta(eta);
  const Matrix& a = game.a;
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  const Matrix av = a * v;
  const Matrix atu = a.transpose() * u;
  const Matrix atav = a.transpose() * av;

  // J = [[0, eta A], [-eta A^T, eta^2 A^T A]] with eigenvector (u_j, (lambda / s) v_j).
  Spectrum out;
  out.residual_bound = 0.0;
  for (Index j = 0; j < sigma.size(); ++j) {
    const double s = eta * sigma(j);
    for (int sign : {+1, -1}) {
      double res = 0.0;
      Complex lambda(0.0, 0.0);
      if (s == 0.0) {
        // Zero block: (u, 0) and (0, v) are both in the kernel.
        res = sign > 0 ? eta * atu.col(j).norm()
                       : eta * std::hypot(av.col(j).norm(), eta * atav.col(j).norm());
      } else {
        lambda = alt_eigenvalue(s, sign);
        const Complex beta = lambda / s;
        const ComplexVector top =
            (eta * beta) * av.col(j).cast<Complex>() - lambda * u.col(j).cast<Complex>();
        const ComplexVector bottom = (-eta) * atu.col(j).cast<Complex>() +
                                     (eta * eta * beta) * atav.col(j).cast<Complex>() -
                                     (lambda * beta) * v.col(j).cast<Complex>();
        const double scale = std::sqrt(1.0 + std::norm(beta));
        res = std::sqrt(top.squaredNorm() + bottom.squaredNorm()) / scale;
      }
      out.eigenvalues.push_back(lambda);
      out.residual_bound = std::max(out.residual_bound, res);
    }
  }
  return out;
}

RateBound rate_bound_sim(double kappa_ata, int p) {
  if (!(kappa_ata >= 1.0)) throw std::invalid_argument("rate_bound_sim: kappa must be >= 1");
  if (p < 1) throw std::invalid_argument("rate_bound_sim: p must be >= 1");
  RateBound bound;
  bound.theorem = RateTheorem::kSimChebyshev;
  bound.p = p;
  bound.kappa = kappa_ata;
  if (kappa_ata == 1.0) {
    bound.factor = 0.0;
  } else if (std::isinf(kappa_ata)) {
    bound.factor = 1.0;
  } else {
    bound.factor = 1.0 / chebyshev_t(p, 1.0 + 2.0 / (kappa_ata - 1.0));
  }
  return bound;
}

DiskBound smallest_ratio_disk(const std::vector<Complex>& eigenvalues) {
  if (eigenvalues.empty()) throw std::invalid_argument("smallest_ratio_disk: empty spectrum");
  // With u = 1 / c, (|lambda - c| / c)^2 = 1 - 2 Re(lambda) u + |lambda|^2 u^2,
  // so the worst case over the spectrum is convex in u.
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Complex& z : eigenvalues) {
    if (!(z.real() > 0.0))
      throw std::invalid_argument("smallest_ratio_disk: spectrum must lie in Re > 0");
    const double ui = z.real() / std::norm(z);
    lo = std::min(lo, ui);
    hi = std::max(hi, ui);
  }
  auto worst = [&](double u) {
    double m = 0.0;
    for (const Complex& z : eigenvalues)
      m = std::max(m, 1.0 - 2.0 * z.real() * u + std::norm(z) * u * u);
    return m;
  };

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = worst(x1);
  double f2 = worst(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = worst(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = worst(x2);
    }
  }
  double u = 0.5 * (a + b);
  for (double cand : {lo, hi})
    if (worst(cand) < worst(u)) u = cand;

  DiskBound disk;
  disk.c = 1.0 / u;
  for (const Complex& z : eigenvalues) disk.r = std::max(disk.r, std::abs(z - disk.c));
  return disk;
}

std::pair<DiskBound, RateBound> alt_disk_bound(const BilinearGame& game, double eta, int p) {
  if (!(eta > 0.0 && eta < 2.0)) throw InvalidEta("alt_disk_bound: eta must lie in (0, 2)");
  if (p < 1) throw std::invalid_argument("alt_disk_bound: p must be >= 1");
  const Vector sigma = singular_values(game.a);
  if (std::abs(sigma(0) - 1.0) > 1e-8)
    throw std::invalid_argument("alt_disk_bound: rescale the game so that sigma_max(A) = 1");
  std::vector<Complex> eigenvalues;
  for (Index j = 0; j < sigma.size(); ++j) {
    const double s = eta * sigma(j);
    eigenvalues.push_back(alt_eigenvalue(s, +1));
    eigenvalues.push_back(alt_eigenvalue(s, -1));
  }
  const DiskBound disk = smallest_ratio_disk(eigenvalues);
  RateBound bound;
  bound.theorem = RateTheorem::kAltDisk;
  bound.p = p;
  bound.eta = eta;
  bound.kappa = sigma(0) / sigma(sigma.size() - 1);
  bound.c = disk.c;
  bound.r = disk.r;
  bound.factor = std::sqrt(1.0 + 2.0 * eta / (2.0 - eta)) * std::pow(disk.r / disk.c, p);
  return {disk, bound};
}

Matrix quad_operator(const BilinearQuadraticGame& game, double eta) {
  const Index n = game.a.rows();
  const Index m = game.a.cols();
  Matrix j(n + m, n + m);
  j << 2.0 * eta * game.b_mat, eta * game.a, -eta * game.a.transpose(),
      2.0 * eta * game.c_mat;
  return j;
}

RateBound rate_bound_quad(const BilinearQuadraticGame& game, double eta) {
  require_positive_eta(eta);
  const Matrix j = quad_operator(game, eta);
  const Matrix sym = j + j.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues()(0);
  const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lambda_min > 1e-14 * scale))
    throw NotPositiveDefinite("rate_bound_quad: J + J^T is not positive definite");
  const double sigma_max = singular_values(j)(0);
  RateBound bound;
  bound.theorem = RateTheorem::kQuadElman;
  bound.eta = eta;
  bound.factor = std::sqrt(
      std::max(0.0, 1.0 - lambda_min * lambda_min / (4.0 * sigma_max * sigma_max)));
  return bound;
}

std::vector<Complex> numerical_range_boundary(const Matrix& a, int num_angles) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("numerical_range_boundary: matrix must be square");
  if (a.rows() > 500) throw std::invalid_argument("numerical_range_boundary: dimension > 500");
  if (num_angles < 8) throw std::invalid_argument("numerical_range_boundary: need >= 8 angles");

  const ComplexMatrix ac = a.cast<Complex>();
  std::vector<Complex> boundary;
  boundary.reserve(static_cast<std::size_t>(num_angles));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig;
  for (int k = 0; k < num_angles; ++k) {
    // The maximizer of Re(e^{i theta} z* A z) has outward normal e^{-i theta};
    // decreasing theta walks the boundary counterclockwise.
    const double theta = -2.0 * M_PI * k / num_angles;
    const Complex rot = std::polar(1.0, theta);
    const ComplexMatrix h = 0.5 * (rot * ac + std::conj(rot) * ac.adjoint());
    eig.compute(h);
    if (eig.info() != Eigen::Success)
      throw NonConvergence("numerical_range_boundary: Hermitian eigen-solve failed");
    const ComplexVector z = eig.eigenvectors().col(h.rows() - 1);
    boundary.push_back(z.dot(ac * z));
  }
  return boundary;
}

double min_turn(const std::vector<Complex>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex e1 = polygon[(i + 1) % n] - polygon[i];
    const Complex e2 = polygon[(i + 2) % n] - polygon[(i + 1) % n];
    worst = std::min(worst, e1.real() * e2.imag() - e1.imag() * e2.real());
  }
  return worst;
}

StationaryClassification classify_stationary(double x, double y,
                                             const std::array<double, 2>& gradient,
                                             const ScalarHessian& hessian,
                                             const ClassifyOptions& options) {
  StationaryClassification out;
  out.point.x = Vector::Constant(1, x);
  out.point.y = Vector::Constant(1, y);
  out.grad_norm = std::hypot(gradient[0], gradient[1]);
  out.hessian = hessian;
  if (!(out.grad_norm <= options.gradient_tol))
    throw NotStationary("classify_stationary: gradient norm " +
                        std::to_string(out.grad_norm) + " exceeds tolerance");

  const double fyy = hessian.yy;
  out.schur = fyy != 0.0 ? hessian.xx - hessian.xy * hessian.xy / fyy
                         : std::numeric_limits<double>::quiet_NaN();
  const double m = options.margin;
  if (fyy < -m && out.schur > m) {
    out.label = MinimaxLabel::kLocalMinimax;
  } else if (fyy > m || (fyy < -m && out.schur < -m)) {
    out.label = MinimaxLabel::kNotLocalMinimax;
  } else {
    out.label = MinimaxLabel::kIndeterminate;
  }
  return out;
}

StationaryClassification classify_stationary(const ScalarGame& game, double x, double y,
                                             const ClassifyOptions& options) {
  return classify_stationary(x, y, game.gradient(x, y), game.hessian(x, y), options);
}

std::string ContractionReport::summary() const {
  std::ostringstream os;
  os << "checked " << checked << " cycles, " << violations << " violations, max ratio "
     << max_ratio << " vs factor " << factor << "; cycles starting below " << noise_floor
     << " are skipped because ratios at that level measure rounding, not contraction";
  return os.str();
}

ContractionReport check_contraction(const std::vector<double>& distances, double factor,
                                    const ContractionOptions& options) {
  if (options.cycle_length < 1)
    throw std::invalid_argument("check_contraction: cycle_length must be >= 1");
  ContractionReport report;
  report.factor = factor;
  if (distances.empty()) return report;
  report.noise_floor =
      options.noise_factor * std::numeric_limits<double>::epsilon() * distances.front();
  const double limit = factor * (1.0 + options.relative_slack) + options.absolute_slack;

  int k = 0;
  for (long start = options.offset;
       start + options.cycle_length < static_cast<long>(distances.size());
       start += options.cycle_length, ++k) {
    CycleRatio c;
    c.cycle = k;
    c.start_iter = start;
    c.end_iter = start + options.cycle_length;
    c.start_dist = distances[static_cast<std::size_t>(c.start_iter)];
    c.end_dist = distances[static_cast<std::size_t>(c.end_iter)];
    if (!(c.start_dist >= report.noise_floor) || c.start_dist == 0.0 ||
        std::isnan(c.end_dist)) {
      c.skipped = true;
      c.ratio = c.start_dist > 0.0 ? c.end_dist / c.start_dist : 0.0;
    } else {
      c.ratio = c.end_dist / c.start_dist;
      c.violation = !(c.ratio <= limit);
      ++report.checked;
      if (c.violation) ++report.violations;
      report.max_ratio = std::max(report.max_ratio, c.ratio);
    }
    report.cycles.push_back(c);
  }
  return report;
}

ContractionReport check_contraction(const Trajectory& trajectory, const RateBound& bound,
                                    const ContractionOptions& options) {
  if (trajectory.records.empty()) return check_contraction(std::vector<double>{}, bound.factor, options);
  const long last = trajectory.records.back().iter;
  std::vector<double> distances(static_cast<std::size_t>(last + 1),
                                std::numeric_limits<double>::quiet_NaN());
  for (const IterationRecord& rec : trajectory.records) {
    if (!rec.dist_to_opt)
      throw std::invalid_argument("check_contraction: trajectory has no dist_to_opt");
    distances[static_cast<std::size_t>(rec.iter)] = *rec.dist_to_opt;
  }
  return check_contraction(distances, bound.factor, options);
}

}  // namespace gdaam
