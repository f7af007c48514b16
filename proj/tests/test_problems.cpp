#include "gdaam/linalg.hpp"
#include "gdaam/problems.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gdaam;

namespace {

double kappa(const Matrix& a) {
  const Vector s = singular_values(a);
  return s(0) / s(s.size() - 1);
}

Vector stacked_grad(const Problem& p, const Vector& w) { return grad_field(p, w); }

}  // namespace

TEST(MakeRandomBilinear, SizeOneHasUnitCondition) {
  const BilinearGame g = make_random_bilinear(1, 5);
  EXPECT_EQ(g.a.rows(), 1);
  EXPECT_EQ(g.b.size(), 1);
  EXPECT_DOUBLE_EQ(kappa(g.a), 1.0);
}

TEST(MakeRandomBilinear, HitsTargetCondition) {
  const BilinearGame g = make_random_bilinear(100, 7, 100.0);
  const double k = kappa(g.a);
  EXPECT_GE(k, 99.0);
  EXPECT_LE(k, 101.0);
  for (double target : {1.5, 10.0, 1000.0}) {
    EXPECT_NEAR(kappa(make_random_bilinear(30, 3, target).a), target, 0.01 * target);
  }
}

TEST(MakeRandomBilinear, DeterministicInSeed) {
  const BilinearGame g1 = make_random_bilinear(20, 11);
  const BilinearGame g2 = make_random_bilinear(20, 11);
  const BilinearGame g3 = make_random_bilinear(20, 12);
  EXPECT_EQ(g1.a, g2.a);
  EXPECT_EQ(g1.b, g2.b);
  EXPECT_EQ(g1.c, g2.c);
  EXPECT_NE(g1.a, g3.a);
}

TEST(MakeRandomBilinear, EntriesLookStandardNormal) {
  const BilinearGame g = make_random_bilinear(200, 1);
  const double mean = g.a.mean();
  const double var = (g.a.array() - mean).square().mean();
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(RescaleToUnitNorm, ScalesIdentity) {
  BilinearGame g{2.0 * Matrix::Identity(3, 3), Vector::Ones(3), -Vector::Ones(3)};
  const BilinearGame r = rescale_to_unit_norm(g);
  EXPECT_LE((r.a - Matrix::Identity(3, 3)).norm(), 1e-15);
  EXPECT_EQ(r.b, g.b);
  EXPECT_EQ(r.c, g.c);
}

TEST(RescaleToUnitNorm, PreservesConditionAndIsIdempotent) {
  const BilinearGame g = make_random_bilinear(40, 2, 25.0);
  const BilinearGame r1 = rescale_to_unit_norm(g);
  const BilinearGame r2 = rescale_to_unit_norm(r1);
  EXPECT_NEAR(singular_values(r1.a)(0), 1.0, 1e-12);
  EXPECT_NEAR(kappa(r1.a), kappa(g.a), 1e-9 * kappa(g.a));
  EXPECT_LE((r2.a - r1.a).norm(), 1e-12);
}

TEST(ExactNash, IdentityExample) {
  BilinearGame g{Matrix::Identity(2, 2), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
  const JointIterate w = exact_nash(g);
  EXPECT_LE((w.x - Eigen::Vector2d(0, -1)).norm(), 1e-15);
  EXPECT_LE((w.y - Eigen::Vector2d(-1, 0)).norm(), 1e-15);
}

TEST(ExactNash, ZeroLinearTermsGiveOrigin) {
  const BilinearGame base = make_random_bilinear(6, 4);
  BilinearGame g{base.a, Vector::Zero(6), Vector::Zero(6)};
  const JointIterate w = exact_nash(g);
  EXPECT_TRUE(w.x.isZero());
  EXPECT_TRUE(w.y.isZero());
}

TEST(ExactNash, FieldVanishesAtSolution) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(50, seed, 100.0));
    const Problem p = g;
    const Vector v = stacked_grad(p, exact_nash(g).stacked());
    EXPECT_LE(v.norm(), 1e-10 * (g.b.norm() + g.c.norm())) << "seed " << seed;
  }
}

TEST(ExactNash, QuadraticFieldVanishesAtSolution) {
  const BilinearQuadraticGame g = make_random_bilinear_quadratic(20, 3);
  const Problem p = g;
  EXPECT_LE(stacked_grad(p, exact_nash(g).stacked()).norm(), 1e-10 * (g.b.norm() + g.c.norm()));
}

TEST(ExactNash, SingularMatrixThrows) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  EXPECT_THROW(exact_nash(BilinearGame{a, Vector::Ones(3), Vector::Ones(3)}), SingularMatrix);
}

TEST(GradField, BilinearFormula) {
  const BilinearGame g = make_random_bilinear(5, 9);
  const Problem p = g;
  const JointIterate w = random_initial_point(5, 5, 1);
  const JointIterate v = grad_field(p, w);
  EXPECT_LE((v.x - (g.a * w.y + g.b)).norm(), 1e-12);
  EXPECT_LE((v.y + (g.a.transpose() * w.x + g.c)).norm(), 1e-12);
}

TEST(GradField, QuadraticFormula) {
  const BilinearQuadraticGame g = make_random_bilinear_quadratic(5, 9);
  const Problem p = g;
  const JointIterate w = random_initial_point(5, 5, 2);
  const JointIterate v = grad_field(p, w);
  EXPECT_LE((v.x - (g.a * w.y + 2.0 * g.b_mat * w.x + g.b)).norm(), 1e-12);
  EXPECT_LE((v.y + (g.a.transpose() * w.x - 2.0 * g.c_mat * w.y + g.c)).norm(), 1e-12);
}

TEST(BilinearQuadratic, BlocksArePositiveDefinite) {
  const BilinearQuadraticGame g = make_random_bilinear_quadratic(15, 4);
  EXPECT_LE((g.b_mat - g.b_mat.transpose()).norm(), 1e-14);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(g.b_mat).eigenvalues().minCoeff(), 0.0);
  EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(g.c_mat).eigenvalues().minCoeff(), 0.0);
}

TEST(GradField, NegQuadraticCrossHandExample) {
  const Problem p = ScalarGame{ScalarGameId::kNegQuadraticCross};
  const Vector v = stacked_grad(p, Eigen::Vector2d(1, 1));
  EXPECT_NEAR(v(0), -2.0, 1e-14);
  EXPECT_NEAR(v(1), -2.0, 1e-14);
}

TEST(ScalarGames, GradientAndHessianMatchFiniteDifferences) {
  std::mt19937 gen(123);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const double h = 1e-5;
  for (const ScalarGame& game : scalar_catalog()) {
    double worst_grad = 0.0;
    double worst_hess = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = u(gen);
      const double y = u(gen);
      const auto g = game.gradient(x, y);
      const double fx = (game.value(x + h, y) - game.value(x - h, y)) / (2 * h);
      const double fy = (game.value(x, y + h) - game.value(x, y - h)) / (2 * h);
      const double scale = std::max(1.0, std::abs(game.value(x, y)));
      worst_grad = std::max({worst_grad, std::abs(fx - g[0]) / scale, std::abs(fy - g[1]) / scale});
      const ScalarHessian hs = game.hessian(x, y);
      const auto gxp = game.gradient(x + h, y);
      const auto gxm = game.gradient(x - h, y);
      const auto gyp = game.gradient(x, y + h);
      const auto gym = game.gradient(x, y - h);
      const double gscale = std::max({1.0, std::abs(g[0]), std::abs(g[1])});
      worst_hess = std::max({worst_hess, std::abs((gxp[0] - gxm[0]) / (2 * h) - hs.xx) / gscale,
                             std::abs((gyp[0] - gym[0]) / (2 * h) - hs.xy) / gscale,
                             std::abs((gxp[1] - gxm[1]) / (2 * h) - hs.xy) / gscale,
                             std::abs((gyp[1] - gym[1]) / (2 * h) - hs.yy) / gscale});
    }
    EXPECT_LE(worst_grad, 1e-6) << game.name();
    EXPECT_LE(worst_hess, 1e-6) << game.name();
  }
}

TEST(ScalarGames, NamesRoundTrip) {
  for (ScalarGameId id : kAllScalarGames) {
    EXPECT_EQ(parse_scalar_game(to_string(id)), id);
  }
  EXPECT_FALSE(parse_scalar_game("rosenbrock").has_value());
}

TEST(ScalarGames, ReferencePointsAreStationary) {
  for (const ScalarGame& game : scalar_catalog()) {
    for (const ReferencePoint& r : game.reference_points()) {
      const auto g = game.gradient(r.x, r.y);
      EXPECT_LE(std::hypot(g[0], g[1]), 1e-12) << game.name() << " at " << r.x << "," << r.y;
    }
  }
}

TEST(ScalarGames, NegQuadraticCrossSchurComplement) {
  const ScalarGame game{ScalarGameId::kNegQuadraticCross};
  const ScalarHessian h = game.hessian(0.0, 0.0);
  EXPECT_DOUBLE_EQ(h.yy, -2.0);
  EXPECT_DOUBLE_EQ(h.xx - h.xy * h.xy / h.yy, 2.0);
}

TEST(ScalarGames, QuarticCubicStationaryPoints) {
  const ScalarGame game{ScalarGameId::kQuarticCubic};
  const double s2 = std::sqrt(2.0);
  int minimax = 0;
  for (double y : {0.0, 2.0 - s2, 2.0 + s2}) {
    const auto g = game.gradient(-y, y);
    EXPECT_LE(std::hypot(g[0], g[1]), 1e-12);
    const ScalarHessian h = game.hessian(-y, y);
    if (h.yy < 0.0 && h.xx - h.xy * h.xy / h.yy > 0.0) {
      ++minimax;
      EXPECT_NEAR(y, 2.0 + s2, 1e-12);
    }
  }
  EXPECT_EQ(minimax, 1);
}

TEST(ScalarGames, SaddleExpBumpOptimumIsNotOrigin) {
  const ScalarGame game{ScalarGameId::kSaddleExpBump};
  const auto g = game.gradient(0.0, 0.0);
  EXPECT_GT(std::hypot(g[0], g[1]), 1e-3);
}

TEST(FixedPointMap, SimExampleSizeOne) {
  const Problem p = BilinearGame{Matrix::Ones(1, 1), Vector::Zero(1), Vector::Zero(1)};
  const FixedPointMap m = fixed_point_map(p, GdaScheme::kSimultaneous, 0.5);
  ASSERT_TRUE(m.affine.has_value());
  Matrix expect(2, 2);
  expect << 1, -0.5, 0.5, 1;
  EXPECT_LE((m.affine->g - expect).norm(), 1e-15);
  EXPECT_TRUE(m.affine->offset.isZero());
}

TEST(FixedPointMap, AffineFormMatchesCallable) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(8, 21));
  const Problem p = g;
  for (GdaScheme s : {GdaScheme::kSimultaneous, GdaScheme::kAlternating}) {
    const FixedPointMap m = fixed_point_map(p, s, 0.7);
    ASSERT_TRUE(m.affine.has_value());
    const Vector w = random_initial_point(8, 8, 5).stacked();
    EXPECT_LE((m.affine->apply(w) - m.apply(w)).norm(), 1e-12 * w.norm());
  }
}

TEST(FixedPointMap, AlternatingEqualsSequentialUpdates) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(10, 22));
  const Problem p = g;
  const double eta = 0.9;
  const FixedPointMap m = fixed_point_map(p, GdaScheme::kAlternating, eta);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const JointIterate w = random_initial_point(10, 10, seed);
    const Vector x1 = w.x - eta * (g.a * w.y + g.b);
    const Vector y1 = w.y + eta * (g.a.transpose() * x1 + g.c);
    JointIterate expect{x1, y1};
    EXPECT_LE((m.affine->apply(w.stacked()) - expect.stacked()).norm(), 1e-12 * (1 + w.stacked().norm()));
  }
}

TEST(FixedPointMap, FixedPointIsNash) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(12, 23, 10.0));
  const Problem p = g;
  const Vector star = exact_nash(g).stacked();
  for (GdaScheme s : {GdaScheme::kSimultaneous, GdaScheme::kAlternating}) {
    const FixedPointMap m = fixed_point_map(p, s, 1.0);
    EXPECT_LE((m.apply(star) - star).norm(), 1e-12 * (1 + star.norm()));
  }
  const BilinearQuadraticGame q = make_random_bilinear_quadratic(12, 24);
  const Problem pq = q;
  const Vector qstar = exact_nash(q).stacked();
  for (GdaScheme s : {GdaScheme::kSimultaneous, GdaScheme::kAlternating}) {
    EXPECT_LE((fixed_point_map(pq, s, 0.3).apply(qstar) - qstar).norm(), 1e-12 * (1 + qstar.norm()));
  }
  const Problem sp = ScalarGame{ScalarGameId::kNegQuadraticCross};
  for (GdaScheme s : {GdaScheme::kSimultaneous, GdaScheme::kAlternating}) {
    EXPECT_LE(fixed_point_map(sp, s, 0.1).apply(Vector::Zero(2)).norm(), 1e-15);
  }
}

TEST(FixedPointMap, SimSpectralRadiusAtLeastOne) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(30, 25));
  const FixedPointMap m = fixed_point_map(Problem{g}, GdaScheme::kSimultaneous, 1.0);
  double rho = 0.0;
  for (const Complex& z : dense_eigenvalues(m.affine->g).eigenvalues) rho = std::max(rho, std::abs(z));
  EXPECT_GE(rho, 1.0);
}

TEST(FixedPointMap, RejectsNonPositiveEta) {
  const Problem p = ScalarGame{ScalarGameId::kCubicMix};
  EXPECT_THROW(fixed_point_map(p, GdaScheme::kSimultaneous, 0.0), std::invalid_argument);
}

TEST(JointIterate, StackRoundTrip) {
  const JointIterate w = random_initial_point(3, 4, 9);
  const JointIterate back = JointIterate::from_stacked(w.stacked(), 3);
  EXPECT_EQ(back.x, w.x);
  EXPECT_EQ(back.y, w.y);
}
