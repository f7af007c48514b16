#pragma once

#include "gdaam/linalg.hpp"

namespace gdaam {

enum class MixerMode {
  /// Clear the table once it holds `table_size` residual differences.
  kRestart,
  /// Keep the most recent `table_size` differences (truncated window).
  kSliding,
};

struct MixerConfig {
  /// Maximum number of residual differences (table columns), p >= 1.
  int table_size = 10;
  MixerMode mode = MixerMode::kRestart;
  double drop_tol = ThinQR::kDefaultDropTol;
  /// Tikhonov weight relative to ||dF||_F^2, applied only when R is
  /// ill-conditioned.
  double relative_regularization = 1e-12;
  double condition_limit = 1e12;
  /// Also form sum_i beta_i w_i (the minimal-residual combination of the
  /// stored iterates) on every call. Costs one extra O(n p) product.
  bool track_mixed_point = false;

  void validate() const;
};

/// Anderson Mixing over a stream of fixed-point evaluations (w, g(w)).
///
/// Residuals are f_i = g(w_i) - w_i. The weights are found through the
/// unconstrained form min ||f_t - dF gamma|| using a thin QR of the residual
/// differences that is updated in place, and the next iterate is
/// g(w_t) - dG gamma = sum_i beta_i g(w_i).
///
/// In restart mode one cycle is: a plain step from the empty table, then p
/// extrapolations using 1..p columns, then the table is cleared. A linearly
/// dependent residual difference also clears the table, keeping the current
/// pair as its only entry.
class AndersonMixer {
 public:
  explicit AndersonMixer(MixerConfig config);

  void reset();

  /// Pushes (w, gw) and returns the extrapolated next iterate.
  Vector extrapolate(const Vector& w, const Vector& gw);

  const MixerConfig& config() const { return config_; }

  /// Entries (w_i, g(w_i)) currently in the table.
  Index history_length() const { return has_entry_ ? columns() + 1 : 0; }
  Index columns() const { return qr_.cols(); }
  int iterations_since_restart() const { return since_restart_; }
  /// Number of times the table was cleared, for any reason.
  int restart_count() const { return restarts_; }
  int dependent_column_restarts() const { return dependent_restarts_; }

  /// Weights used by the most recent extrapolate() call, oldest entry first.
  const WeightVector& last_weights() const { return last_weights_; }
  /// ||sum_i beta_i f_i|| for the most recent call.
  double last_residual_norm() const { return last_residual_norm_; }
  bool last_ill_conditioned() const { return last_ill_conditioned_; }
  /// sum_i beta_i w_i for the most recent call; empty unless track_mixed_point.
  const Vector& last_mixed_point() const { return last_mixed_point_; }

 private:
  void clear_table();
  void start_table(const Vector& w, const Vector& gw, const Vector& f);
  void drop_oldest_column();
  Vector finish(const Vector& w, const Vector& gw, const Vector& f,
                const Vector& gamma);

  MixerConfig config_;
  ThinQR qr_;
  Matrix df_;  // residual differences, only kept in sliding mode for rebuilds
  Matrix dg_;
  Matrix dw_;
  Vector prev_w_;
  Vector prev_g_;
  Vector prev_f_;
  bool has_entry_ = false;
  int since_restart_ = 0;
  int restarts_ = 0;
  int dependent_restarts_ = 0;

  WeightVector last_weights_;
  double last_residual_norm_ = 0.0;
  bool last_ill_conditioned_ = false;
  Vector last_mixed_point_;
};

}  // namespace gdaam
