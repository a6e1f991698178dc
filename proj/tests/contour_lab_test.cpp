#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "tauberian/contour_lab.hpp"
#include "tauberian/dirichlet_app.hpp"
#include "test_support.hpp"

using namespace tauberian;
using namespace tauberian::testing;

TEST(FudgeFactor, Values) {
  const double R = 3.0;
  EXPECT_EQ(std::abs(fudge_factor(Complex(0.0, R), R)), 0.0);
  EXPECT_NEAR(std::abs(fudge_factor(R, R) - 4.0), 0.0, 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (int k = 0; k < 100; ++k) {
    const Complex z = std::polar(R, u(rng));
    EXPECT_NEAR(std::abs(1.0 + z * z / (R * R)), 2.0 * std::abs(z.real()) / R, 1e-13);
    EXPECT_NEAR(std::abs(fudge_factor(z, R)), std::pow(2.0 * std::abs(z.real()) / R, 2), 1e-12);
  }
}

TEST(ContourGeometry, PiecesAndRegion) {
  const auto M = GrowthBound::affine(1.0);
  const double R = 4.0;
  const auto contour = build_contour(M, R, 2.0);
  ASSERT_EQ(contour.pieces.size(), 3u);
  EXPECT_DOUBLE_EQ(contour.left_abscissa, -1.0 / (2.0 * M(R)));
  const auto& g1 = contour.pieces[0];
  const auto& g1r = contour.pieces[1];
  ASSERT_EQ(g1.z.size(), g1r.z.size());
  for (std::size_t i = 0; i < g1.z.size(); ++i) {
    EXPECT_NEAR(std::abs(g1.z[i]), R, 1e-12);
    EXPECT_GE(g1.z[i].real(), 0.0);
    EXPECT_NEAR(std::abs(g1r.z[i] + g1.z[i]), 0.0, 1e-12);
  }
  for (const Complex z : contour.pieces[2].z) {
    EXPECT_GT(z.real(), -1.0 / M(std::abs(z.imag())));
    EXPECT_LE(z.real(), 0.0);
    EXPECT_LE(std::abs(z.imag()), R);
  }
  // weights integrate the length of each piece
  double len = 0.0;
  for (const Complex dz : contour.pieces[2].dz) len += std::abs(dz);
  EXPECT_NEAR(len, 2.0 * R + 2.0 / (2.0 * M(R)), 1e-12);
}

TEST(ContourGeometry, Preconditions) {
  EXPECT_THROW(build_contour(GrowthBound::constant(2.0), 0.5, 1.0), PreconditionError);
  EXPECT_THROW(build_contour(GrowthBound::constant(2.0), 2.0, 0.0), PreconditionError);
}

TEST(CauchyResidual, ExponentialDensity) {
  const auto rep = cauchy_residual(decaying_density(), ExtensionEvaluator::inv_one_plus_z(), GrowthBound::constant(2.0),
                                   5.0, 2.0);
  EXPECT_LE(rep.residual, 1e-6);
  EXPECT_NEAR(rep.reference[0].real(), -std::exp(-5.0), 1e-14);
  EXPECT_EQ(rep.route, TailRoute::tail_integral);
}

TEST(CauchyResidual, ZeroInstance) {
  const auto rep = cauchy_residual(BVFunction(), ExtensionEvaluator::zero(), GrowthBound::constant(2.0), 2.0, 2.0);
  EXPECT_LE(rep.lhs.norm(), 1e-12);
  EXPECT_EQ(rep.reference.norm(), 0.0);
}

TEST(CauchyResidual, AlternatingSeries) {
  const auto inst = build_instance(CoefficientSequence::alternating(), 1000);
  const auto rep =
      cauchy_residual(inst.A, ExtensionEvaluator::eta_shift(), GrowthBound::affine(2.0), 3.0, 1.5);
  EXPECT_EQ(rep.route, TailRoute::direct_difference);
  EXPECT_LE(rep.residual, 1e-5);
  double partial = 0.0;
  for (int n = 1; std::log(n) < 3.0; ++n) partial += (n % 2 ? 1.0 : -1.0) / n;
  EXPECT_NEAR(rep.reference[0].real(), partial - std::log(2.0), 1e-14);
}

TEST(CauchyResidual, DirectRouteRefusesLargeExponent) {
  const auto inst = build_instance(CoefficientSequence::alternating(), 1000);
  try {
    cauchy_residual(inst.A, ExtensionEvaluator::eta_shift(), GrowthBound::affine(2.0), 6.0, 6.0);
    FAIL();
  } catch (const RefusalError& e) {
    EXPECT_NE(std::string(e.what()).find("e^36"), std::string::npos);
  }
}

TEST(CauchyResidual, RationalFamilyGrid) {
  for (double t : {2.0, 5.0, 10.0}) {
    for (double R : {1.0, 2.0, 5.0}) {
      const auto rep =
          cauchy_residual(decaying_density(), ExtensionEvaluator::inv_one_plus_z(), GrowthBound::constant(2.0), t, R);
      EXPECT_LE(rep.residual, 1e-6) << "t=" << t << " R=" << R;
    }
  }
}

TEST(CauchyResidual, DensityDoublingConverges) {
  for (double t : {2.0, 5.0}) {
    ContourOptions coarse, fine;
    coarse.density = 0.5;
    fine.density = 1.0;
    const auto M = GrowthBound::constant(2.0);
    const auto f = ExtensionEvaluator::inv_one_plus_z();
    const double a = cauchy_residual(decaying_density(), f, M, t, 2.0, coarse).residual;
    const double b = cauchy_residual(decaying_density(), f, M, t, 2.0, fine).residual;
    EXPECT_GE(a, 4.0 * b) << "t=" << t << " coarse " << a << " fine " << b;
  }
}

TEST(CauchyResidual, JunctionIntegrandVanishes) {
  const double t = 5.0, R = 2.0;
  const auto A = decaying_density();
  const auto f = ExtensionEvaluator::inv_one_plus_z();
  const ContourIntegrands F(A, f, t, R, 1e-14);
  const auto contour = build_contour(GrowthBound::constant(2.0), R, t);
  double scale = 0.0;
  for (const Complex z : contour.pieces[0].z) scale = std::max(scale, F.integrand(PieceKind::gamma1, z).norm());
  for (const Complex z : {Complex(0.0, R), Complex(0.0, -R)}) {
    for (auto kind : {PieceKind::gamma1, PieceKind::gamma1_reflected, PieceKind::gamma2}) {
      EXPECT_LE(F.integrand(kind, z).norm(), 1e-8 * scale);
    }
  }
}

TEST(CauchyResidual, VectorValuedExtension) {
  const VectorValue coef({Complex(1.0, 0.0), Complex(0.0, 2.0)});
  DensityPiece d = exp_density(-1.0);
  d.coef = coef;
  const BVFunction A(2, NormKind::euclidean, {}, {d});
  const auto rep =
      cauchy_residual(A, ExtensionEvaluator::inv_one_plus_z(coef), GrowthBound::constant(2.0), 4.0, 2.0);
  EXPECT_LE(rep.residual, 1e-6);
  EXPECT_THROW(cauchy_residual(A, ExtensionEvaluator::inv_one_plus_z(), GrowthBound::constant(2.0), 4.0, 2.0),
               PreconditionError);
}

TEST(TermBounds, ExponentialDensity) {
  const TauberianCertificate cert{1.0, 1.0, 0.0, CutoffRule::infinite()};
  const auto M = GrowthBound::constant(2.0);
  const auto b = term_bounds(decaying_density(), cert, ExtensionEvaluator::inv_one_plus_z(), M, 10.0, 2.0);
  EXPECT_TRUE(b.holds());
  EXPECT_GE(b.margin_I_derived(), 0.0);
  EXPECT_GE(b.margin_II_derived(), 0.0);
  EXPECT_DOUBLE_EQ(b.I_bound, 3.0);
  EXPECT_DOUBLE_EQ(b.II_bound, 2.0);
}

TEST(TermBounds, ThirdTermFormula) {
  const TauberianCertificate cert{1.0, 1.0, 0.0, CutoffRule::infinite()};
  const auto b = term_bounds(decaying_density(), cert, ExtensionEvaluator::inv_one_plus_z(), GrowthBound::constant(2.0),
                             10.0, 1.0);
  EXPECT_NEAR(b.III_bound, 0.2 + 8.0 * std::exp(-2.5), 1e-14);
  EXPECT_NEAR(b.III_bound, 0.8567, 1e-4);
  EXPECT_LE(b.III, b.III_bound);
}

TEST(TermBounds, ThirdTermDecreasesInTime) {
  const TauberianCertificate cert{1.0, 1.0, 0.0, CutoffRule::infinite()};
  const auto f = ExtensionEvaluator::inv_one_plus_z();
  double prev_measured = kInfinity, prev_bound = kInfinity;
  for (double t : {10.0, 20.0, 40.0}) {
    const auto b = term_bounds(decaying_density(), cert, f, GrowthBound::constant(2.0), t, 2.0);
    EXPECT_LT(b.III, prev_measured);
    EXPECT_LT(b.III_bound, prev_bound);
    EXPECT_TRUE(b.holds());
    prev_measured = b.III;
    prev_bound = b.III_bound;
  }
}

TEST(TermBounds, Preconditions) {
  const TauberianCertificate cert{1.0, 1.0, 3.0, CutoffRule::constant(2.0)};
  const auto f = ExtensionEvaluator::inv_one_plus_z();
  EXPECT_THROW(term_bounds(decaying_density(), cert, f, GrowthBound::constant(2.0), 2.0, 2.0), PreconditionError);
  EXPECT_THROW(term_bounds(decaying_density(), cert, f, GrowthBound::constant(2.0), 5.0, 3.0), PreconditionError);
}

TEST(ContourDump, RowsCoverAllPieces) {
  const auto rows = contour_dump(decaying_density(), ExtensionEvaluator::inv_one_plus_z(), GrowthBound::constant(2.0),
                                 2.0, 2.0);
  std::set<std::string> names;
  for (const auto& r : rows) {
    names.insert(r.piece);
    EXPECT_TRUE(std::isfinite(r.magnitude));
  }
  EXPECT_EQ(names, (std::set<std::string>{"gamma1", "gamma1_reflected", "gamma2"}));
}
