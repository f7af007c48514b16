#pragma once

// Minimax test problems: random bilinear games with controllable
// conditioning, bilinear-quadratic games, and six analytic two-variable
// saddle functions. Every problem exposes its gradient field
// V(w) = (grad_x f, -grad_y f) and its GDA fixed-point maps.

#include "gdaam/linalg.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gdaam {

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The stacked point w = (x, y).
struct JointIterate {
  Vector x;
  Vector y;

  Vector stacked() const;
  static JointIterate from_stacked(const Vector& w, Index nx);
};

/// f(x, y) = x^T A y + b^T x + c^T y with A square and full rank.
struct BilinearGame {
  Matrix a;
  Vector b;
  Vector c;

  Index dim() const { return a.rows(); }
};

/// f(x, y) = x^T A y + x^T B x - y^T C y + b^T x + c^T y with B, C symmetric
/// positive definite. grad_x f = A y + 2 B x + b and grad_y f = A^T x - 2 C y + c.
struct BilinearQuadraticGame {
  Matrix a;
  Matrix b_mat;
  Matrix c_mat;
  Vector b;
  Vector c;

  Index dim() const { return a.rows(); }
};

enum class ScalarGameId {
  kSaddleExpBump,
  kQuarticExp,
  kNegQuadraticCross,
  kCubicMix,
  kCubicAntisym,
  kQuarticCubic,
};

inline constexpr std::array<ScalarGameId, 6> kAllScalarGames = {
    ScalarGameId::kSaddleExpBump, ScalarGameId::kQuarticExp,
    ScalarGameId::kNegQuadraticCross, ScalarGameId::kCubicMix,
    ScalarGameId::kCubicAntisym, ScalarGameId::kQuarticCubic};

std::string_view to_string(ScalarGameId id);
std::optional<ScalarGameId> parse_scalar_game(std::string_view name);

struct ScalarHessian {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

enum class MinimaxLabel { kLocalMinimax, kNotLocalMinimax, kIndeterminate };

std::string_view to_string(MinimaxLabel label);

struct ReferencePoint {
  double x = 0.0;
  double y = 0.0;
  MinimaxLabel expected = MinimaxLabel::kIndeterminate;
};

/// One of the analytic f: R x R -> R test functions.
struct ScalarGame {
  ScalarGameId id = ScalarGameId::kNegQuadraticCross;

  double value(double x, double y) const;
  /// (df/dx, df/dy)
  std::array<double, 2> gradient(double x, double y) const;
  ScalarHessian hessian(double x, double y) const;
  std::string_view name() const { return to_string(id); }
  std::string formula() const;
  /// Stationary points known in closed form, with their second-order label.
  std::vector<ReferencePoint> reference_points() const;
};

std::vector<ScalarGame> scalar_catalog();

using Problem = std::variant<BilinearGame, BilinearQuadraticGame, ScalarGame>;

std::string_view problem_kind(const Problem& problem);
Index x_dim(const Problem& problem);
Index y_dim(const Problem& problem);

/// Entries of A, b, c drawn i.i.d. standard normal from a generator seeded
/// with `seed`. With target_kappa, A's singular values are replaced by a
/// log-uniform spectrum from sigma_max down to sigma_max / target_kappa.
BilinearGame make_random_bilinear(Index n, std::uint64_t seed,
                                  std::optional<double> target_kappa = std::nullopt);

/// Random bilinear-quadratic game. B and C are Q diag(d) Q^T with d uniform
/// in [min_eig, max_eig].
BilinearQuadraticGame make_random_bilinear_quadratic(Index n, std::uint64_t seed,
                                                     double min_eig = 0.1,
                                                     double max_eig = 1.0);

/// Scales A so that its largest singular value is one; b and c are unchanged.
BilinearGame rescale_to_unit_norm(BilinearGame game);

/// Standard-normal starting point, drawn from a stream independent of the
/// problem's own generator.
JointIterate random_initial_point(Index nx, Index ny, std::uint64_t seed);

/// (x*, y*) = (-A^{-T} c, -A^{-1} b). Throws SingularMatrix when A is
/// numerically rank deficient.
JointIterate exact_nash(const BilinearGame& game);
JointIterate exact_nash(const BilinearQuadraticGame& game);

/// Stacked exact solution where one is known (bilinear and bilinear-quadratic).
std::optional<Vector> exact_solution(const Problem& problem);

/// V(w) = (grad_x f, -grad_y f) on the stacked iterate.
Vector grad_field(const Problem& problem, const Vector& w);
JointIterate grad_field(const Problem& problem, const JointIterate& w);

/// grad_x f(x, y).
Vector field_x(const Problem& problem, const Eigen::Ref<const Vector>& x,
               const Eigen::Ref<const Vector>& y);
/// -grad_y f(x, y).
Vector field_y(const Problem& problem, const Eigen::Ref<const Vector>& x,
               const Eigen::Ref<const Vector>& y);

enum class GdaScheme { kSimultaneous, kAlternating };

/// w -> G w + offset.
struct AffineFixedPointMap {
  Matrix g;
  Vector offset;

  Vector apply(const Vector& w) const { return g * w + offset; }
};

struct FixedPointMap {
  std::function<Vector(const Vector&)> apply;
  /// Explicit operator for the quadratic games; empty for scalar games.
  std::optional<AffineFixedPointMap> affine;
};

/// One GDA step as a fixed-point map. Bilinear games get
///   sim: G = [[I, -eta A], [eta A^T, I]],              offset (-eta b, eta c)
///   alt: G = [[I, -eta A], [eta A^T, I - eta^2 A^T A]], offset (-eta b, eta c - eta^2 A^T b)
FixedPointMap fixed_point_map(const Problem& problem, GdaScheme scheme, double eta);

}  // namespace gdaam
