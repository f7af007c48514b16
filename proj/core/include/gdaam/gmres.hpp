#pragma once

#include "gdaam/linalg.hpp"

#include <functional>

namespace gdaam {

/// Matrix-free square operator x -> A x.
struct LinearOperator {
  Index dimension = 0;
  std::function<Vector(const Vector&)> apply;

  static LinearOperator from_matrix(Matrix a);
};

struct GmresCycle {
  Vector solution;
  /// ||r_j|| for j = 0..steps; starts at ||r_0||.
  std::vector<double> residual_history;
  /// Iterates x_0..x_steps, filled only when requested.
  std::vector<Vector> iterates;
  int steps = 0;
  /// The Arnoldi vector vanished: the Krylov space is invariant and the
  /// returned solution is exact up to rounding.
  bool breakdown = false;
};

struct GmresCycleOptions {
  bool record_iterates = false;
  /// Happy-breakdown threshold relative to ||b|| (||r_0|| when b = 0).
  double breakdown_tol = 1e-14;
  /// Stop the cycle early once ||r_j|| <= stop_below (absolute).
  double stop_below = 0.0;
};

/// One GMRES(m) cycle from x0: Arnoldi with modified Gram-Schmidt, Givens
/// rotations on the Hessenberg matrix for the running least-squares residual.
GmresCycle gmres_cycle(const LinearOperator& a, const Vector& b, const Vector& x0,
                       int m, const GmresCycleOptions& options = {});

enum class GmresStatus { kConverged, kMaxCyclesExceeded };

struct GmresReport {
  GmresStatus status = GmresStatus::kConverged;
  /// Final iterate; for kMaxCyclesExceeded, the best (lowest-residual) one.
  Vector solution;
  /// Inner-iteration residual norms across all cycles, starting at ||r_0||.
  std::vector<double> residual_history;
  int cycles = 0;
};

/// Restarted GMRES(m) until ||r|| <= tol * ||b|| (||r_0|| when b = 0) or
/// max_cycles cycles have run.
GmresReport gmres_restarted(const LinearOperator& a, const Vector& b,
                            const Vector& x0, int m, double tol, int max_cycles);

}  // namespace gdaam
