#include "gdaam/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gdaam {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::uint64_t kInitialPointStream = 0x9E3779B97F4A7C15ULL;

Vector normal_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Matrix normal_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Row-major fill order so the generated game is independent of storage order.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  const Matrix z = normal_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  // Fix column signs so Q is Haar distributed.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

void require_same_dim(const Problem& problem, const Eigen::Ref<const Vector>& x,
                      const Eigen::Ref<const Vector>& y) {
  if (x.size() != x_dim(problem) || y.size() != y_dim(problem))
    throw std::invalid_argument("gradient: iterate dimension does not match problem");
}

}  // namespace

Vector JointIterate::stacked() const {
  Vector w(x.size() + y.size());
  w << x, y;
  return w;
}

JointIterate JointIterate::from_stacked(const Vector& w, Index nx) {
  if (nx < 0 || nx > w.size())
    throw std::invalid_argument("JointIterate::from_stacked: bad split");
  return JointIterate{w.head(nx), w.tail(w.size() - nx)};
}

std::string_view to_string(ScalarGameId id) {
  switch (id) {
    case ScalarGameId::kSaddleExpBump: return "saddle_exp_bump";
    case ScalarGameId::kQuarticExp: return "quartic_exp";
    case ScalarGameId::kNegQuadraticCross: return "neg_quadratic_cross";
    case ScalarGameId::kCubicMix: return "cubic_mix";
    case ScalarGameId::kCubicAntisym: return "cubic_antisym";
    case ScalarGameId::kQuarticCubic: return "quartic_cubic";
  }
  return "unknown";
}

std::optional<ScalarGameId> parse_scalar_game(std::string_view name) {
  for (ScalarGameId id : kAllScalarGames)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

std::string_view to_string(MinimaxLabel label) {
  switch (label) {
    case MinimaxLabel::kLocalMinimax: return "local_minimax";
    case MinimaxLabel::kNotLocalMinimax: return "not_local_minimax";
    case MinimaxLabel::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

double ScalarGame::value(double x, double y) const {
  switch (id) {
    case ScalarGameId::kSaddleExpBump: {
      const double e = std::exp(-(x - 0.25) * (x - 0.25) - (y - 0.75) * (y - 0.75));
      return (x - 0.5) * (y - 0.5) + e / 3.0;
    }
    case ScalarGameId::kQuarticExp: {
      const double u = y - 3.0 * x + 0.05 * x * x * x;
      const double g = 4.0 * x * x - u * u - 0.1 * y * y * y * y;
      return g * std::exp(-0.01 * (x * x + y * y));
    }
    case ScalarGameId::kNegQuadraticCross:
      return -3.0 * x * x - y * y + 4.0 * x * y;
    case ScalarGameId::kCubicMix:
      return x * x * x / 3.0 + y * y + 2.0 * x * y - 6.0 * x - 3.0 * y + 4.0;
    case ScalarGameId::kCubicAntisym:
      return x * x * x - y * y * y - 2.0 * x * y + 6.0;
    case ScalarGameId::kQuarticCubic:
      return 2.0 * x * x + y * y + 4.0 * x * y + (4.0 / 3.0) * y * y * y -
             0.25 * y * y * y * y;
  }
  return 0.0;
}

std::array<double, 2> ScalarGame::gradient(double x, double y) const {
  switch (id) {
    case ScalarGameId::kSaddleExpBump: {
      const double e = std::exp(-(x - 0.25) * (x - 0.25) - (y - 0.75) * (y - 0.75));
      return {(y - 0.5) - 2.0 * (x - 0.25) * e / 3.0,
              (x - 0.5) - 2.0 * (y - 0.75) * e / 3.0};
    }
    case ScalarGameId::kQuarticExp: {
      const double u = y - 3.0 * x + 0.05 * x * x * x;
      const double ux = -3.0 + 0.15 * x * x;
      const double g = 4.0 * x * x - u * u - 0.1 * y * y * y * y;
      const double gx = 8.0 * x - 2.0 * u * ux;
      const double gy = -2.0 * u - 0.4 * y * y * y;
      const double e = std::exp(-0.01 * (x * x + y * y));
      return {(gx - 0.02 * x * g) * e, (gy - 0.02 * y * g) * e};
    }
    case ScalarGameId::kNegQuadraticCross:
      return {-6.0 * x + 4.0 * y, -2.0 * y + 4.0 * x};
    case ScalarGameId::kCubicMix:
      return {x * x + 2.0 * y - 6.0, 2.0 * y + 2.0 * x - 3.0};
    case ScalarGameId::kCubicAntisym:
      return {3.0 * x * x - 2.0 * y, -3.0 * y * y - 2.0 * x};
    case ScalarGameId::kQuarticCubic:
      return {4.0 * x + 4.0 * y, 2.0 * y + 4.0 * x + 4.0 * y * y - y * y * y};
  }
  return {0.0, 0.0};
}

ScalarHessian ScalarGame::hessian(double x, double y) const {
  switch (id) {
    case ScalarGameId::kSaddleExpBump: {
      const double e = std::exp(-(x - 0.25) * (x - 0.25) - (y - 0.75) * (y - 0.75));
      const double ax = -2.0 * (x - 0.25);
      const double ay = -2.0 * (y - 0.75);
      return {(ax * ax - 2.0) * e / 3.0, 1.0 + ax * ay * e / 3.0,
              (ay * ay - 2.0) * e / 3.0};
    }
    case ScalarGameId::kQuarticExp: {
      const double u = y - 3.0 * x + 0.05 * x * x * x;
      const double ux = -3.0 + 0.15 * x * x;
      const double uxx = 0.3 * x;
      const double g = 4.0 * x * x - u * u - 0.1 * y * y * y * y;
      const double gx = 8.0 * x - 2.0 * u * ux;
      const double gy = -2.0 * u - 0.4 * y * y * y;
      const double gxx = 8.0 - 2.0 * ux * ux - 2.0 * u * uxx;
      const double gxy = -2.0 * ux;
      const double gyy = -2.0 - 1.2 * y * y;
      // Derivatives of exp(-0.01 (x^2 + y^2)) divided by itself.
      const double ex = -0.02 * x;
      const double ey = -0.02 * y;
      const double exx = -0.02 + 0.0004 * x * x;
      const double eyy = -0.02 + 0.0004 * y * y;
      const double exy = 0.0004 * x * y;
      const double e = std::exp(-0.01 * (x * x + y * y));
      return {(gxx + 2.0 * gx * ex + g * exx) * e,
              (gxy + gx * ey + gy * ex + g * exy) * e,
              (gyy + 2.0 * gy * ey + g * eyy) * e};
    }
    case ScalarGameId::kNegQuadraticCross: return {-6.0, 4.0, -2.0};
    case ScalarGameId::kCubicMix: return {2.0 * x, 2.0, 2.0};
    case ScalarGameId::kCubicAntisym: return {6.0 * x, -2.0, -6.0 * y};
    case ScalarGameId::kQuarticCubic: return {4.0, 4.0, 2.0 + 8.0 * y - 3.0 * y * y};
  }
  return {};
}

std::string ScalarGame::formula() const {
  switch (id) {
    case ScalarGameId::kSaddleExpBump:
      return "(x-1/2)(y-1/2) + exp(-(x-1/4)^2-(y-3/4)^2)/3";
    case ScalarGameId::kQuarticExp:
      return "(4x^2-(y-3x+0.05x^3)^2-0.1y^4) exp(-0.01(x^2+y^2))";
    case ScalarGameId::kNegQuadraticCross: return "-3x^2-y^2+4xy";
    case ScalarGameId::kCubicMix: return "x^3/3+y^2+2xy-6x-3y+4";
    case ScalarGameId::kCubicAntisym: return "x^3-y^3-2xy+6";
    case ScalarGameId::kQuarticCubic: return "2x^2+y^2+4xy+(4/3)y^3-y^4/4";
  }
  return {};
}

std::vector<ReferencePoint> ScalarGame::reference_points() const {
  using L = MinimaxLabel;
  const double s2 = std::sqrt(2.0);
  switch (id) {
    case ScalarGameId::kSaddleExpBump: return {};
    case ScalarGameId::kQuarticExp: return {{0.0, 0.0, L::kLocalMinimax}};
    case ScalarGameId::kNegQuadraticCross: return {{0.0, 0.0, L::kLocalMinimax}};
    case ScalarGameId::kCubicMix:
      return {{3.0, -1.5, L::kNotLocalMinimax}, {-1.0, 2.5, L::kNotLocalMinimax}};
    case ScalarGameId::kCubicAntisym:
      return {{0.0, 0.0, L::kIndeterminate},
              {-2.0 / 3.0, 2.0 / 3.0, L::kNotLocalMinimax}};
    case ScalarGameId::kQuarticCubic:
      return {{0.0, 0.0, L::kNotLocalMinimax},
              {-(2.0 - s2), 2.0 - s2, L::kNotLocalMinimax},
              {-(2.0 + s2), 2.0 + s2, L::kLocalMinimax}};
  }
  return {};
}

std::vector<ScalarGame> scalar_catalog() {
  std::vector<ScalarGame> games;
  for (ScalarGameId id : kAllScalarGames) games.push_back(ScalarGame{id});
  return games;
}

std::string_view problem_kind(const Problem& problem) {
  return std::visit(Overloaded{
                        [](const BilinearGame&) { return std::string_view("bilinear"); },
                        [](const BilinearQuadraticGame&) {
                          return std::string_view("bilinear_quadratic");
                        },
                        [](const ScalarGame&) { return std::string_view("scalar"); },
                    },
                    problem);
}

Index x_dim(const Problem& problem) {
  return std::visit(Overloaded{
                        [](const BilinearGame& g) { return g.a.rows(); },
                        [](const BilinearQuadraticGame& g) { return g.a.rows(); },
                        [](const ScalarGame&) { return Index{1}; },
                    },
                    problem);
}

Index y_dim(const Problem& problem) {
  return std::visit(Overloaded{
                        [](const BilinearGame& g) { return g.a.cols(); },
                        [](const BilinearQuadraticGame& g) { return g.a.cols(); },
                        [](const ScalarGame&) { return Index{1}; },
                    },
                    problem);
}

BilinearGame make_random_bilinear(Index n, std::uint64_t seed,
                                  std::optional<double> target_kappa) {
  if (n < 1) throw std::invalid_argument("make_random_bilinear: n must be >= 1");
  if (target_kappa && !(*target_kappa >= 1.0))
    throw std::invalid_argument("make_random_bilinear: target_kappa must be >= 1");

  std::mt19937_64 rng(seed);
  BilinearGame game;
  game.a = normal_matrix(n, n, rng);
  game.b = normal_vector(n, rng);
  game.c = normal_vector(n, rng);

  if (target_kappa && n > 1) {
    Eigen::BDCSVD<Matrix> svd(game.a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double top = svd.singularValues()(0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> exponents(static_cast<std::size_t>(n));
    exponents.front() = 0.0;
    exponents.back() = 1.0;
    for (std::size_t i = 1; i + 1 < exponents.size(); ++i) exponents[i] = unit(rng);
    std::sort(exponents.begin(), exponents.end());
    Vector sigma(n);
    for (Index i = 0; i < n; ++i)
      sigma(i) = top * std::pow(*target_kappa, -exponents[static_cast<std::size_t>(i)]);
    game.a = svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
  }
  return game;
}

BilinearQuadraticGame make_random_bilinear_quadratic(Index n, std::uint64_t seed,
                                                     double min_eig, double max_eig) {
  if (n < 1) throw std::invalid_argument("make_random_bilinear_quadratic: n must be >= 1");
  if (!(min_eig > 0.0) || max_eig < min_eig)
    throw std::invalid_argument("make_random_bilinear_quadratic: need 0 < min_eig <= max_eig");

  std::mt19937_64 rng(seed);
  BilinearQuadraticGame game;
  game.a = normal_matrix(n, n, rng);
  game.b = normal_vector(n, rng);
  game.c = normal_vector(n, rng);
  std::uniform_real_distribution<double> spread(min_eig, max_eig);
  auto spd = [&]() {
    const Matrix q = random_orthogonal(n, rng);
    Vector d(n);
    for (Index i = 0; i < n; ++i) d(i) = spread(rng);
    Matrix s = q * d.asDiagonal() * q.transpose();
    return Matrix(0.5 * (s + s.transpose()));
  };
  game.b_mat = spd();
  game.c_mat = spd();
  return game;
}

BilinearGame rescale_to_unit_norm(BilinearGame game) {
  const Vector sigma = singular_values(game.a);
  if (sigma.size() == 0 || !(sigma(0) > 0.0))
    throw SingularMatrix("rescale_to_unit_norm: A is zero");
  game.a /= sigma(0);
  return game;
}

JointIterate random_initial_point(Index nx, Index ny, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ kInitialPointStream);
  JointIterate w;
  w.x = normal_vector(nx, rng);
  w.y = normal_vector(ny, rng);
  return w;
}

// Reciprocal condition estimate below which A is treated as singular.
constexpr double kSingularRcond = 1e-13;

// The rcond estimate can miss exact zero pivots, so those are checked directly.
static bool lu_singular(const Eigen::PartialPivLU<Matrix>& lu) {
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (pivots.size() == 0) return false;
  if (!(pivots.minCoeff() > kSingularRcond * pivots.maxCoeff())) return true;
  return !(lu.rcond() > kSingularRcond);
}

JointIterate exact_nash(const BilinearGame& game) {
  const Eigen::PartialPivLU<Matrix> lu(game.a);
  if (lu_singular(lu)) throw SingularMatrix("exact_nash: A is singular");
  JointIterate w;
  w.x = -Eigen::PartialPivLU<Matrix>(game.a.transpose()).solve(game.c);
  w.y = -lu.solve(game.b);
  return w;
}

JointIterate exact_nash(const BilinearQuadraticGame& game) {
  // Stationarity: 2B x + A y = -b, A^T x - 2C y = -c.
  const Index n = game.a.rows();
  const Index m = game.a.cols();
  Matrix k(n + m, n + m);
  k << 2.0 * game.b_mat, game.a, game.a.transpose(), -2.0 * game.c_mat;
  Vector rhs(n + m);
  rhs << -game.b, -game.c;
  const Eigen::PartialPivLU<Matrix> lu(k);
  if (lu_singular(lu)) throw SingularMatrix("exact_nash: KKT matrix is singular");
  return JointIterate::from_stacked(lu.solve(rhs), n);
}

std::optional<Vector> exact_solution(const Problem& problem) {
  return std::visit(Overloaded{
                        [](const BilinearGame& g) -> std::optional<Vector> {
                          return exact_nash(g).stacked();
                        },
                        [](const BilinearQuadraticGame& g) -> std::optional<Vector> {
                          return exact_nash(g).stacked();
                        },
                        [](const ScalarGame&) -> std::optional<Vector> {
                          return std::nullopt;
                        },
                    },
                    problem);
}

Vector field_x(const Problem& problem, const Eigen::Ref<const Vector>& x,
               const Eigen::Ref<const Vector>& y) {
  require_same_dim(problem, x, y);
  return std::visit(Overloaded{
                        [&](const BilinearGame& g) -> Vector { return g.a * y + g.b; },
                        [&](const BilinearQuadraticGame& g) -> Vector {
                          return g.a * y + 2.0 * (g.b_mat * x) + g.b;
                        },
                        [&](const ScalarGame& g) -> Vector {
                          return Vector::Constant(1, g.gradient(x(0), y(0))[0]);
                        },
                    },
                    problem);
}

Vector field_y(const Problem& problem, const Eigen::Ref<const Vector>& x,
               const Eigen::Ref<const Vector>& y) {
  require_same_dim(problem, x, y);
  return std::visit(Overloaded{
                        [&](const BilinearGame& g) -> Vector {
                          return -(g.a.transpose() * x + g.c);
                        },
                        [&](const BilinearQuadraticGame& g) -> Vector {
                          return -(g.a.transpose() * x - 2.0 * (g.c_mat * y) + g.c);
                        },
                        [&](const ScalarGame& g) -> Vector {
                          return Vector::Constant(1, -g.gradient(x(0), y(0))[1]);
                        },
                    },
                    problem);
}

Vector grad_field(const Problem& problem, const Vector& w) {
  const Index nx = x_dim(problem);
  if (w.size() != nx + y_dim(problem))
    throw std::invalid_argument("grad_field: iterate dimension does not match problem");
  if (const auto* scalar = std::get_if<ScalarGame>(&problem)) {
    const auto grad = scalar->gradient(w(0), w(1));
    Vector v(2);
    v << grad[0], -grad[1];
    return v;
  }
  const auto x = w.head(nx);
  const auto y = w.tail(w.size() - nx);
  Vector v(w.size());
  v.head(nx) = field_x(problem, x, y);
  v.tail(w.size() - nx) = field_y(problem, x, y);
  return v;
}

JointIterate grad_field(const Problem& problem, const JointIterate& w) {
  return JointIterate::from_stacked(grad_field(problem, w.stacked()), w.x.size());
}

FixedPointMap fixed_point_map(const Problem& problem, GdaScheme scheme, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("fixed_point_map: eta must be > 0");

  auto affine_from = [&](const Matrix& a, const Matrix& bxx, const Matrix& cyy,
                         const Vector& b, const Vector& c) {
    // x' = (I - eta Bxx) x - eta A y - eta b
    // y' = (I - eta Cyy) y + eta A^T x~ + eta c, x~ = x (sim) or x' (alt)
    const Index n = a.rows();
    const Index m = a.cols();
    AffineFixedPointMap map;
    map.g = Matrix::Zero(n + m, n + m);
    map.offset = Vector::Zero(n + m);
    const Matrix gxx = Matrix::Identity(n, n) - eta * bxx;
    const Matrix gxy = -eta * a;
    map.g.topLeftCorner(n, n) = gxx;
    map.g.topRightCorner(n, m) = gxy;
    map.offset.head(n) = -eta * b;
    const Matrix gyy = Matrix::Identity(m, m) - eta * cyy;
    if (scheme == GdaScheme::kSimultaneous) {
      map.g.bottomLeftCorner(m, n) = eta * a.transpose();
      map.g.bottomRightCorner(m, m) = gyy;
      map.offset.tail(m) = eta * c;
    } else {
      map.g.bottomLeftCorner(m, n) = eta * a.transpose() * gxx;
      map.g.bottomRightCorner(m, m) = gyy + eta * a.transpose() * gxy;
      map.offset.tail(m) = eta * c - eta * eta * a.transpose() * b;
    }
    return map;
  };

  FixedPointMap out;
  if (const auto* g = std::get_if<BilinearGame>(&problem)) {
    const Index n = g->a.rows();
    const Index m = g->a.cols();
    out.affine = affine_from(g->a, Matrix::Zero(n, n), Matrix::Zero(m, m), g->b, g->c);
  } else if (const auto* q = std::get_if<BilinearQuadraticGame>(&problem)) {
    out.affine = affine_from(q->a, 2.0 * q->b_mat, 2.0 * q->c_mat, q->b, q->c);
  }

  if (out.affine) {
    out.apply = [map = *out.affine](const Vector& w) { return map.apply(w); };
    return out;
  }

  const ScalarGame game = std::get<ScalarGame>(problem);
  out.apply = [game, scheme, eta](const Vector& w) -> Vector {
    const double x = w(0);
    const double y = w(1);
    const double x_next = x - eta * game.gradient(x, y)[0];
    const double y_from = scheme == GdaScheme::kSimultaneous ? x : x_next;
    const double y_next = y + eta * game.gradient(y_from, y)[1];
    Vector next(2);
    next << x_next, y_next;
    return next;
  };
  return out;
}

}  // namespace gdaam
