#pragma once

// Iterative minimax solvers with a shared run loop: simultaneous and
// alternating GDA, extragradient, optimistic gradient, extragradient with
// momentum, and the two Anderson-accelerated GDA variants.

#include "gdaam/anderson.hpp"
#include "gdaam/problems.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace gdaam {

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Method {
  kSimGda,
  kAltGda,
  kEg,
  kOg,
  kEgMomentum,
  kSimGdaAm,
  kAltGdaAm,
};

inline constexpr Method kAllMethods[] = {Method::kSimGda,     Method::kAltGda,
                                         Method::kEg,         Method::kOg,
                                         Method::kEgMomentum, Method::kSimGdaAm,
                                         Method::kAltGdaAm};

/// Hyphenated CLI name, e.g. "alt-gda-am".
std::string_view to_string(Method method);
/// Accepts hyphens or underscores.
std::optional<Method> parse_method(std::string_view name);
bool is_anderson(Method method);

/// Extragradient with a heavy-ball term:
///   w_half = w_t - extrapolation_eta V(w_t)
///   w_next = w_t - update_eta V(w_half) + beta (w_t - w_{t-1})
struct MomentumConfig {
  double extrapolation_eta = 1.0;
  double update_eta = 0.5;
  double beta = 0.3;

  /// Step sizes and momentum picked by grid search for bilinear games.
  static MomentumConfig positive() { return {1.0, 0.5, 0.3}; }
  /// Mirror image of positive() with a negative momentum term.
  static MomentumConfig negative() { return {1.0, 0.5, -0.3}; }
};

struct SolverConfig {
  Method method = Method::kSimGdaAm;
  double eta = 1.0;
  /// Used by kEgMomentum only.
  MomentumConfig momentum = MomentumConfig::negative();
  /// Required by the Anderson methods.
  std::optional<MixerConfig> mixer;
  double tol = 1e-5;
  long max_iters = 1000;
  std::uint64_t seed = 0;
  /// Keep every k-th record (the first and last are always kept).
  long record_stride = 1;
  double divergence_threshold = 1e12;

  /// Throws InvalidConfig.
  void validate() const;
};

enum class RunStatus { kConverged, kMaxIters, kDiverged };

std::string_view to_string(RunStatus status);
std::optional<RunStatus> parse_run_status(std::string_view name);

struct IterationRecord {
  long iter = 0;
  /// Nanoseconds since the run started, taken before iteration `iter`'s update.
  std::int64_t time_ns = 0;
  std::optional<double> dist_to_opt;
  /// ||V(w_iter)||
  double grad_norm = 0.0;
  /// ||T(w_iter) - w_iter|| for the method's base step T.
  double residual_norm = 0.0;
};

struct Trajectory {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::kMaxIters;
  /// Updates performed.
  long iterations = 0;
  Vector final_iterate;
  std::int64_t wall_ns = 0;

  std::optional<double> initial_dist() const;
  std::optional<double> final_dist() const;
};

JointIterate step_sim_gda(const Problem& problem, const JointIterate& w, double eta);
JointIterate step_alt_gda(const Problem& problem, const JointIterate& w, double eta);
JointIterate step_eg(const Problem& problem, const JointIterate& w, double eta);
/// w - eta V(w_t) + (eta / 2) V(w_{t-1}); plain GDA without a previous field.
JointIterate step_og(const Problem& problem, const JointIterate& w,
                     const std::optional<JointIterate>& previous_field, double eta);
JointIterate step_eg_momentum(const Problem& problem, const JointIterate& w,
                              const JointIterate& w_previous,
                              const MomentumConfig& momentum);

/// Stacked-vector forms used by the run loop.
namespace stacked {
Vector sim_gda(const Problem& problem, const Vector& w, double eta);
Vector alt_gda(const Problem& problem, const Vector& w, double eta);
Vector eg(const Problem& problem, const Vector& w, double eta);
}  // namespace stacked

/// Iterates the configured method from w0. Stops when dist_to_opt <= tol
/// (problems with an exact solution) or grad_norm <= tol (otherwise), when
/// the iterate norm exceeds the divergence threshold or turns non-finite,
/// or after max_iters updates.
Trajectory run(const Problem& problem, const SolverConfig& config, const JointIterate& w0);

}  // namespace gdaam
