#pragma once

// Theory checks for the bilinear games: closed-form spectra of the GDA
// operators, per-restart contraction bounds, numerical ranges, and
// second-order classification of stationary points.

#include "gdaam/linalg.hpp"
#include "gdaam/optimizers.hpp"
#include "gdaam/problems.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gdaam {

class InvalidEta : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotStationary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RateTheorem { kSimChebyshev, kAltDisk, kQuadElman };

std::string_view to_string(RateTheorem theorem);

struct RateBound {
  /// Contraction factor per restart cycle (per iteration for kQuadElman).
  double factor = 1.0;
  RateTheorem theorem = RateTheorem::kSimChebyshev;
  int p = 0;
  double eta = 0.0;
  double kappa = 0.0;
  double c = 0.0;
  double r = 0.0;
};

struct DiskBound {
  double c = 0.0;
  double r = 0.0;
};

/// Eigenvalues of I - G for the simultaneous map: +-i eta sigma_j.
/// residual_bound is measured on the eigenvectors (u_j, +-i v_j) / sqrt(2)
/// built from the SVD of A.
Spectrum sim_operator_spectrum(const BilinearGame& game, double eta);

/// Eigenvalues of I - G for the alternating map:
/// s (s +- sqrt(s^2 - 4)) / 2 with s = eta sigma_j.
Spectrum alt_operator_spectrum(const BilinearGame& game, double eta);

/// 1 / T_p(1 + 2 / (kappa - 1)); zero for kappa = 1.
RateBound rate_bound_sim(double kappa_ata, int p);

/// Real-centred disk D(c, r) holding the alternating spectrum with the
/// smallest r / c, and the factor sqrt(1 + 2 eta / (2 - eta)) (r / c)^p.
/// Requires sigma_max(A) = 1 and 0 < eta < 2.
std::pair<DiskBound, RateBound> alt_disk_bound(const BilinearGame& game, double eta, int p);

/// Same disk search for an arbitrary conjugate-symmetric spectrum in the
/// open right half plane.
DiskBound smallest_ratio_disk(const std::vector<Complex>& eigenvalues);

/// Per-iteration GMRES factor sqrt(1 - lambda_min(J + J^T)^2 / (4 lambda_max(J^T J)))
/// for J = I - G of the simultaneous map on a bilinear-quadratic game.
RateBound rate_bound_quad(const BilinearQuadraticGame& game, double eta);

/// J = I - G for the simultaneous map: [[2 eta B, eta A], [-eta A^T, 2 eta C]].
Matrix quad_operator(const BilinearQuadraticGame& game, double eta);

/// Boundary of {z* A z : ||z|| = 1}, one supporting point per angle,
/// ordered counterclockwise.
std::vector<Complex> numerical_range_boundary(const Matrix& a, int num_angles = 256);

/// Smallest cross product of consecutive boundary edges; >= 0 (up to
/// rounding) for a convex counterclockwise polygon.
double min_turn(const std::vector<Complex>& polygon);

struct StationaryClassification {
  JointIterate point;
  double grad_norm = 0.0;
  ScalarHessian hessian;
  /// f_xx - f_xy^2 / f_yy; NaN when f_yy = 0.
  double schur = 0.0;
  MinimaxLabel label = MinimaxLabel::kIndeterminate;
};

struct ClassifyOptions {
  double gradient_tol = 1e-8;
  double margin = 1e-8;
};

/// Throws NotStationary when ||grad f|| > gradient_tol.
StationaryClassification classify_stationary(const ScalarGame& game, double x, double y,
                                             const ClassifyOptions& options = {});
StationaryClassification classify_stationary(double x, double y,
                                             const std::array<double, 2>& gradient,
                                             const ScalarHessian& hessian,
                                             const ClassifyOptions& options = {});

struct CycleRatio {
  int cycle = 0;
  long start_iter = 0;
  long end_iter = 0;
  double start_dist = 0.0;
  double end_dist = 0.0;
  double ratio = 0.0;
  bool skipped = false;
  bool violation = false;
};

struct ContractionOptions {
  /// Iterations per restart cycle.
  long cycle_length = 1;
  /// Iteration of the first cycle boundary.
  long offset = 0;
  double relative_slack = 1e-6;
  double absolute_slack = 0.0;
  /// Cycles starting below noise_factor * eps * N_0 are skipped.
  double noise_factor = 1e2;
};

struct ContractionReport {
  std::vector<CycleRatio> cycles;
  int violations = 0;
  int checked = 0;
  double max_ratio = 0.0;
  double noise_floor = 0.0;
  double factor = 0.0;

  bool ok() const { return violations == 0; }
  std::string summary() const;
};

/// Ratios N_{k+1} / N_k between successive cycle boundaries of dist_to_opt.
/// A cycle violates the bound when ratio > factor (1 + relative_slack) + absolute_slack.
ContractionReport check_contraction(const Trajectory& trajectory, const RateBound& bound,
                                    const ContractionOptions& options);
/// Same check on a plain distance sequence indexed by iteration.
ContractionReport check_contraction(const std::vector<double>& distances, double factor,
                                    const ContractionOptions& options);

}  // namespace gdaam
