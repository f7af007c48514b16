#include "gdaam/analysis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace gdaam;

namespace {

BilinearGame scalar_bilinear(double a) {
  return {Matrix::Constant(1, 1, a), Vector::Zero(1), Vector::Zero(1)};
}

// A = U diag(s) V^T with prescribed singular values.
BilinearGame game_with_singular_values(const Vector& s, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  const Index n = s.size();
  Matrix u(n, n), v(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      u(i, j) = nd(gen);
      v(i, j) = nd(gen);
    }
  const Matrix qu = u.householderQr().householderQ();
  const Matrix qv = v.householderQr().householderQ();
  return {qu * s.asDiagonal() * qv.transpose(), Vector::Ones(n), Vector::Ones(n)};
}

double max_abs_real(const Spectrum& s) {
  double m = 0.0;
  for (const Complex& z : s.eigenvalues) m = std::max(m, std::abs(z.real()));
  return m;
}

Spectrum numeric(const BilinearGame& g, GdaScheme scheme, double eta) {
  const FixedPointMap m = fixed_point_map(Problem{g}, scheme, eta);
  const Index n = m.affine->g.rows();
  return dense_eigenvalues(Matrix::Identity(n, n) - m.affine->g);
}

}  // namespace

TEST(SimSpectrum, UnitExample) {
  const Spectrum s = sim_operator_spectrum(scalar_bilinear(1.0), 1.0);
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  EXPECT_LE(spectrum_mismatch(s.eigenvalues, {Complex(0, 1), Complex(0, -1)}), 1e-15);
}

TEST(SimSpectrum, PurelyImaginaryAndMatchesEigensolver) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(10, 31));
  const Spectrum s = sim_operator_spectrum(g, 1.0);
  EXPECT_EQ(max_abs_real(s), 0.0);
  EXPECT_LE(spectrum_mismatch(s.eigenvalues, numeric(g, GdaScheme::kSimultaneous, 1.0).eigenvalues),
            1e-8);
  EXPECT_LE(s.residual_bound, 1e-8);
}

TEST(AltSpectrum, UnitExample) {
  const Spectrum s = alt_operator_spectrum(scalar_bilinear(1.0), 1.0);
  const double r3 = std::sqrt(3.0);
  EXPECT_LE(spectrum_mismatch(s.eigenvalues, {Complex(0.5, r3 / 2), Complex(0.5, -r3 / 2)}), 1e-15);
  for (const Complex& z : s.eigenvalues) EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
}

TEST(AltSpectrum, DoubleEigenvalueAtTwo) {
  const Spectrum s = alt_operator_spectrum(scalar_bilinear(2.0), 1.0);
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  for (const Complex& z : s.eigenvalues) EXPECT_NEAR(std::abs(z - Complex(2.0, 0.0)), 0.0, 1e-12);
}

TEST(AltSpectrum, MatchesEigensolver) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(10, 32));
  const Spectrum s = alt_operator_spectrum(g, 1.0);
  EXPECT_LE(spectrum_mismatch(s.eigenvalues, numeric(g, GdaScheme::kAlternating, 1.0).eigenvalues),
            1e-8);
  const Vector sv = singular_values(g.a);
  for (const Complex& z : s.eigenvalues) {
    // Re = s^2 / 2 for each complex pair.
    const bool hit = (sv.array().square() / 2.0 - z.real()).abs().minCoeff() <= 1e-12;
    EXPECT_TRUE(hit);
  }
}

TEST(RateBoundSim, HandValues) {
  EXPECT_NEAR(rate_bound_sim(9.0, 1).factor, 0.8, 1e-15);
  EXPECT_NEAR(rate_bound_sim(9.0, 2).factor, 1.0 / 2.125, 1e-15);
  EXPECT_EQ(rate_bound_sim(1.0, 7).factor, 0.0);
  EXPECT_EQ(rate_bound_sim(9.0, 2).theorem, RateTheorem::kSimChebyshev);
  EXPECT_THROW(rate_bound_sim(0.5, 2), std::invalid_argument);
}

TEST(RateBoundSim, MonotoneInTableSizeAndCondition) {
  const double kappas[] = {1.5, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6};
  for (double k : kappas) {
    double prev = 1.0;
    for (int p = 1; p <= 64; ++p) {
      const double f = rate_bound_sim(k, p).factor;
      EXPECT_LT(f, 1.0);
      EXPECT_LE(f, prev);
      prev = f;
    }
  }
  for (int p : {1, 2, 5, 10, 20, 64}) {
    double prev = 0.0;
    for (double k : kappas) {
      const double f = rate_bound_sim(k, p).factor;
      EXPECT_GE(f, prev);
      prev = f;
    }
  }
}

TEST(AltDiskBound, UnitSingularValues) {
  const BilinearGame g = game_with_singular_values(Vector::Ones(4), 5);
  const auto [disk, bound] = alt_disk_bound(g, 1.0, 4);
  EXPECT_NEAR(disk.c, 2.0, 1e-6);
  EXPECT_NEAR(disk.r, std::sqrt(3.0), 1e-6);
  const double prefactor = std::sqrt(3.0);
  EXPECT_NEAR(bound.factor, prefactor * std::pow(std::sqrt(3.0) / 2.0, 4), 1e-6);
  EXPECT_LT(bound.factor, 1.0);
  EXPECT_GE(alt_disk_bound(g, 1.0, 3).second.factor, 1.0);
}

TEST(AltDiskBound, DiskContainsSpectrum) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(12, seed, 3.0));
    for (double eta : {0.3, 1.0, 1.7}) {
      const DiskBound d = alt_disk_bound(g, eta, 5).first;
      EXPECT_LT(d.r, d.c);
      for (const Complex& z : alt_operator_spectrum(g, eta).eigenvalues)
        EXPECT_LE(std::abs(z - d.c), d.r + 1e-10);
    }
  }
}

TEST(AltDiskBound, RejectsBadEta) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(5, 1));
  EXPECT_THROW(alt_disk_bound(g, 2.0, 5), InvalidEta);
  EXPECT_THROW(alt_disk_bound(g, 0.0, 5), InvalidEta);
}

TEST(RateBoundQuad, IdentityBlocksGiveZero) {
  BilinearQuadraticGame g{Matrix::Zero(1, 1), Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                          Vector::Zero(1), Vector::Zero(1)};
  EXPECT_NEAR(rate_bound_quad(g, 1.0).factor, 0.0, 1e-8);
}

TEST(RateBoundQuad, FactorInUnitInterval) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BilinearQuadraticGame g = make_random_bilinear_quadratic(10, seed);
    const double f = rate_bound_quad(g, 0.5).factor;
    EXPECT_GE(f, 0.0);
    EXPECT_LT(f, 1.0);
  }
}

TEST(RateBoundQuad, RejectsIndefiniteBlocks) {
  BilinearQuadraticGame g = make_random_bilinear_quadratic(4, 1);
  g.b_mat = -g.b_mat;
  EXPECT_THROW(rate_bound_quad(g, 1.0), NotPositiveDefinite);
}

TEST(QuadOperator, MatchesMapLinearPart) {
  const BilinearQuadraticGame g = make_random_bilinear_quadratic(6, 2);
  const FixedPointMap m = fixed_point_map(Problem{g}, GdaScheme::kSimultaneous, 0.4);
  EXPECT_LE((quad_operator(g, 0.4) - (Matrix::Identity(12, 12) - m.affine->g)).norm(), 1e-14);
}

TEST(NumericalRange, NormalMatrixIsHullOfEigenvalues) {
  // Real diagonal: the range is the segment [min, max].
  Vector d(4);
  d << -1.0, 0.5, 2.0, 3.0;
  const auto boundary = numerical_range_boundary(d.asDiagonal().toDenseMatrix(), 64);
  for (const Complex& z : boundary) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    EXPECT_GE(z.real(), -1.0 - 1e-12);
    EXPECT_LE(z.real(), 3.0 + 1e-12);
  }
  const auto [lo, hi] = std::minmax_element(boundary.begin(), boundary.end(),
                                            [](Complex a, Complex b) { return a.real() < b.real(); });
  EXPECT_NEAR(lo->real(), -1.0, 1e-12);
  EXPECT_NEAR(hi->real(), 3.0, 1e-12);
}

TEST(NumericalRange, RotationIsUnitSquareHull) {
  // Eigenvalues +-1 and +-i: a normal matrix whose range is the square with those corners.
  Matrix a = Matrix::Zero(4, 4);
  a(0, 0) = 1.0;
  a(1, 1) = -1.0;
  a(2, 3) = -1.0;
  a(3, 2) = 1.0;
  for (const Complex& z : numerical_range_boundary(a, 256))
    EXPECT_LE(std::abs(z.real()) + std::abs(z.imag()), 1.0 + 1e-9);
}

TEST(NumericalRange, NilpotentIsDiskOfRadiusHalf) {
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  const auto boundary = numerical_range_boundary(a, 128);
  for (const Complex& z : boundary) EXPECT_NEAR(std::abs(z), 0.5, 1e-12);
  // Dense sampling of z* A z stays inside.
  std::mt19937 gen(1);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector2cd z(Complex(nd(gen), nd(gen)), Complex(nd(gen), nd(gen)));
    z.normalize();
    const Complex q = z.dot(a.cast<Complex>() * z);
    EXPECT_LE(std::abs(q), 0.5 + 1e-12);
  }
}

TEST(NumericalRange, AlternatingBlockIsEllipse) {
  for (double s : {0.3, 1.0, 1.5}) {
    Matrix a(2, 2);
    a << 0, s, -s, s * s;
    const double h = s * s / 2.0;
    for (const Complex& z : numerical_range_boundary(a, 128)) {
      const double u = (z.real() - h) / h;
      const double v = z.imag() / s;
      EXPECT_NEAR(u * u + v * v, 1.0, 1e-9) << "s=" << s;
    }
  }
}

TEST(NumericalRange, BoundaryIsConvex) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(15, seed));
    const FixedPointMap m = fixed_point_map(Problem{g}, GdaScheme::kAlternating, 1.0);
    const auto boundary = numerical_range_boundary(Matrix::Identity(30, 30) - m.affine->g, 256);
    EXPECT_GE(min_turn(boundary), -1e-10);
  }
}

TEST(NumericalRange, RejectsBadInput) {
  EXPECT_THROW(numerical_range_boundary(Matrix::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(numerical_range_boundary(Matrix::Zero(2, 2), 4), std::invalid_argument);
}

TEST(Classify, CatalogReferencePoints) {
  for (const ScalarGame& game : scalar_catalog()) {
    for (const ReferencePoint& r : game.reference_points()) {
      EXPECT_EQ(classify_stationary(game, r.x, r.y).label, r.expected)
          << game.name() << " at " << r.x << "," << r.y;
    }
  }
}

TEST(Classify, HandExamples) {
  const StationaryClassification nq =
      classify_stationary(ScalarGame{ScalarGameId::kNegQuadraticCross}, 0.0, 0.0);
  EXPECT_EQ(nq.label, MinimaxLabel::kLocalMinimax);
  EXPECT_DOUBLE_EQ(nq.schur, 2.0);
  EXPECT_EQ(classify_stationary(ScalarGame{ScalarGameId::kQuarticCubic}, 0.0, 0.0).label,
            MinimaxLabel::kNotLocalMinimax);
  // f = x y at the origin: f_yy = 0.
  const StationaryClassification xy =
      classify_stationary(0.0, 0.0, {0.0, 0.0}, ScalarHessian{0.0, 1.0, 0.0});
  EXPECT_EQ(xy.label, MinimaxLabel::kIndeterminate);
}

TEST(Classify, MarginKeepsNearZeroCasesIndeterminate) {
  const auto tiny = classify_stationary(0.0, 0.0, {0.0, 0.0}, ScalarHessian{1e-10, 0.0, -1.0});
  EXPECT_NE(tiny.label, MinimaxLabel::kLocalMinimax);
}

TEST(Classify, NotStationaryThrows) {
  EXPECT_THROW(classify_stationary(ScalarGame{ScalarGameId::kNegQuadraticCross}, 1.0, 1.0),
               NotStationary);
}

TEST(CheckContraction, AtSolutionEverythingSkipped) {
  const std::vector<double> d(31, 0.0);
  ContractionOptions o;
  o.cycle_length = 5;
  const ContractionReport r = check_contraction(d, 0.5, o);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.checked, 0);
}

TEST(CheckContraction, GeometricSequence) {
  std::vector<double> d;
  for (int t = 0; t <= 40; ++t) d.push_back(std::pow(0.9, t));
  ContractionOptions o;
  o.cycle_length = 4;
  const ContractionReport ok = check_contraction(d, std::pow(0.9, 4), o);
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(ok.checked, 10);
  EXPECT_NEAR(ok.max_ratio, std::pow(0.9, 4), 1e-12);
  const ContractionReport bad = check_contraction(d, 0.5, o);
  EXPECT_EQ(bad.violations, 10);
}

TEST(CheckContraction, DivergingTrajectoryReportsRatiosAboveOne) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(10, 3));
  SolverConfig c;
  c.method = Method::kSimGda;
  c.max_iters = 200;
  const Trajectory t = run(Problem{g}, c, random_initial_point(10, 10, 3));
  ContractionOptions o;
  o.cycle_length = 10;
  const ContractionReport r = check_contraction(t, rate_bound_sim(10.0, 10), o);
  EXPECT_GT(r.checked, 0);
  EXPECT_GT(r.max_ratio, 1.0);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.summary().empty());
}

TEST(CheckContraction, NeedsDistances) {
  Trajectory t;
  t.records.resize(3);
  EXPECT_THROW(check_contraction(t, rate_bound_sim(4.0, 2), ContractionOptions{}),
               std::invalid_argument);
}
