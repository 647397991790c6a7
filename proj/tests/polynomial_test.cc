#include "sospack/polynomial.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace sospack {
namespace {

Polynomial X(int n, int i) { return Polynomial::Variable(n, i); }
Polynomial C(int n, double c) { return Polynomial(n, c); }

Polynomial Torus() {
  const Polynomial r2 = Polynomial::SquaredNorm(3);
  const Polynomial x1 = X(3, 0), x2 = X(3, 1), x3 = X(3, 2);
  return Pow(r2 + C(3, 1), 3) - 10.0 * (x1 * x1 + x2 * x2) * (x3 * x3 + C(3, 1));
}

// Random polynomial with small integer coefficients, so ring identities hold
// exactly in floating point.
Polynomial RandomIntegerPolynomial(std::mt19937_64& rng, int n, int d, int terms) {
  const auto basis = MonomialBasis(n, d);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(basis.size()) - 1);
  std::uniform_int_distribution<int> coef(-5, 5);
  Polynomial p(n);
  for (int t = 0; t < terms; ++t) p.AddTerm(basis[pick(rng)], coef(rng));
  return p;
}

Polynomial RandomPolynomial(std::mt19937_64& rng, int n, int d) {
  std::uniform_real_distribution<double> u(-1, 1);
  Polynomial p(n);
  for (const auto& m : MonomialBasis(n, d)) p.AddTerm(m, u(rng));
  return p;
}

AffineTransform RandomTransform(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) += 0.4 * u(rng);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return AffineTransform(s, v);
}

TEST(MonomialBasisTest, GradedLexOrder) {
  const auto b = MonomialBasis(2, 2);
  ASSERT_EQ(b.size(), 6u);
  const std::vector<std::vector<int>> expected = {{0, 0}, {0, 1}, {1, 0},
                                                  {0, 2}, {1, 1}, {2, 0}};
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i].exponents(), expected[i]);
}

TEST(MonomialBasisTest, Sizes) {
  EXPECT_EQ(MonomialBasis(3, 2).size(), 10u);
  EXPECT_EQ(MonomialBasis(1, 0).size(), 1u);
  EXPECT_EQ(MonomialBasis(2, 22).size(), 276u);  // C(24, 2)
  EXPECT_EQ(MonomialBasis(3, 6).size(), 84u);    // C(9, 3)
}

TEST(MonomialBasisTest, SortedUnderComparator) {
  const auto b = MonomialBasis(3, 4);
  EXPECT_TRUE(std::is_sorted(b.begin(), b.end(), GradedLexLess()));
}

TEST(PolynomialTest, TorusEvaluations) {
  const Polynomial c = Torus();
  EXPECT_DOUBLE_EQ(c.Evaluate(Eigen::Vector3d(1, 1, 0)), 7.0);
  EXPECT_DOUBLE_EQ(c.Evaluate(Eigen::Vector3d(1, 0, 0)), -2.0);
  EXPECT_EQ(c.degree(), 6);
}

TEST(PolynomialTest, ZeroPolynomial) {
  const Polynomial z(3);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.degree(), 0);
  EXPECT_EQ(z.Evaluate(Eigen::Vector3d(0.3, 2, -1)), 0.0);
}

TEST(PolynomialTest, EvaluateDimensionMismatchThrows) {
  EXPECT_THROW(X(2, 0).Evaluate(Eigen::Vector3d(1, 2, 3)), std::invalid_argument);
}

TEST(PolynomialTest, ArithmeticExamples) {
  const Polynomial x1 = X(1, 0);
  EXPECT_EQ((x1 + C(1, 1)) * (x1 - C(1, 1)), x1 * x1 - C(1, 1));
  const Polynomial p = Torus();
  EXPECT_TRUE((p + (-1.0) * p).is_zero());
  const Polynomial a = X(2, 0), b = X(2, 1);
  const Polynomial sq = (a + b) * (a + b);
  EXPECT_EQ(sq.coefficient(Monomial({1, 1})), 2.0);
  EXPECT_EQ(sq, a * a + 2.0 * a * b + b * b);
}

TEST(PolynomialTest, CanonicalFormDropsZeros) {
  Polynomial p(2);
  p.AddTerm(Monomial({1, 0}), 1.5);
  p.AddTerm(Monomial({1, 0}), -1.5);
  EXPECT_EQ(p.num_terms(), 0u);
  p.AddTerm(Monomial({0, 1}), 0.0);
  EXPECT_EQ(p.num_terms(), 0u);
}

TEST(PolynomialTest, DimensionMismatchThrows) {
  EXPECT_THROW(X(2, 0) + X(3, 0), std::invalid_argument);
  EXPECT_THROW(X(2, 0) * X(3, 0), std::invalid_argument);
}

TEST(ComposeAffineTest, Examples) {
  const Polynomial x1 = X(1, 0);
  const auto shift = AffineTransform::Translation(Eigen::VectorXd::Ones(1));
  EXPECT_EQ(ComposeAffine(x1 * x1, shift), x1 * x1 - 2.0 * x1 + C(1, 1));

  const Polynomial ball = Polynomial::SquaredNorm(3) - C(3, 1);
  const AffineTransform t(3.0 * Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 1, 0));
  const Polynomial y1 = X(3, 0) - C(3, 1), y2 = X(3, 1) - C(3, 1), y3 = X(3, 2);
  const Polynomial expected = 9.0 * y1 * y1 + 9.0 * y2 * y2 + 9.0 * y3 * y3 - C(3, 1);
  const Polynomial got = ComposeAffine(ball, t);
  EXPECT_LE((got - expected).MaxAbsCoefficient(), 1e-12);

  EXPECT_EQ(ComposeAffine(Torus(), AffineTransform::Identity(3)), Torus());
}

TEST(ComposeAffineTest, PreservesDegree) {
  std::mt19937_64 rng(5);
  const Polynomial p = RandomPolynomial(rng, 3, 6);
  EXPECT_EQ(ComposeAffine(p, RandomTransform(rng, 3)).degree(), 6);
}

TEST(ComposeAffineTest, EvaluatesAsSubstitution) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const Polynomial p = RandomPolynomial(rng, n, 5);
    const AffineTransform t = RandomTransform(rng, n);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    const double direct = p.Evaluate(t.ToLocal(x));
    const double composed = ComposeAffine(p, t).Evaluate(x);
    EXPECT_NEAR(composed, direct, 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST(ComposeAffineTest, CompositionOfTransforms) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const Polynomial p = RandomPolynomial(rng, n, 4);
    const AffineTransform t1 = RandomTransform(rng, n), t2 = RandomTransform(rng, n);
    // (p ∘ t1) ∘ t2 = p ∘ (t1 ∘ t2)
    const Polynomial lhs = ComposeAffine(ComposeAffine(p, t1), t2);
    const Polynomial rhs = ComposeAffine(p, Compose(t1, t2));
    EXPECT_LE((lhs - rhs).MaxAbsCoefficient(), 1e-10);
  }
}

TEST(AffineTransformTest, Validation) {
  EXPECT_THROW(AffineTransform(Eigen::Matrix2d::Zero(), Eigen::Vector2d::Zero()),
               std::invalid_argument);
  EXPECT_THROW(AffineTransform(2.0 * Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), true),
               std::invalid_argument);
  const double a = 0.3;
  Eigen::Matrix2d r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  EXPECT_NO_THROW(AffineTransform(r, Eigen::Vector2d(1, 2), true));
}

TEST(AffineTransformTest, WorldLocalRoundTrip) {
  std::mt19937_64 rng(2);
  const AffineTransform t = RandomTransform(rng, 3);
  const Eigen::Vector3d x(0.1, -0.4, 0.9);
  EXPECT_LE((t.ToWorld(t.ToLocal(x)) - x).norm(), 1e-12);
}

TEST(DerivativeTest, Examples) {
  const Polynomial x1 = X(2, 0), x2 = X(2, 1);
  const auto g = Gradient(x1 * x1 * x2);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], 2.0 * x1 * x2);
  EXPECT_EQ(g[1], x1 * x1);
  const auto h = Hessian(x1 * x1 + x2 * x2);
  EXPECT_EQ(h[0][0], C(2, 2));
  EXPECT_TRUE(h[0][1].is_zero());
  EXPECT_EQ(h[1][1], C(2, 2));
  EXPECT_EQ(RadialDerivative(Polynomial::SquaredNorm(3)), 2.0 * Polynomial::SquaredNorm(3));
}

TEST(DerivativeTest, HessianIsExactlySymmetric) {
  std::mt19937_64 rng(8);
  const auto h = Hessian(RandomPolynomial(rng, 3, 6));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(h[i][j], h[j][i]);
}

TEST(DerivativeTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  const Polynomial p = RandomPolynomial(rng, 2, 5);
  const auto g = Gradient(p);
  const Eigen::Vector2d x(0.2, -0.6);
  const double h = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e(i) = h;
    const double fd = (p.Evaluate(x + e) - p.Evaluate(x - e)) / (2 * h);
    EXPECT_NEAR(g[i].Evaluate(x), fd, 1e-7);
  }
}

TEST(IntegrateBoxTest, Examples) {
  EXPECT_DOUBLE_EQ(IntegrateBox(C(2, 1), Box::Cube(2, -1, 1)), 4.0);
  const Polynomial p = X(2, 0) * X(2, 0) * X(2, 1);
  EXPECT_NEAR(IntegrateBox(p, Box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2))), 2.0 / 3.0,
              1e-15);
}

TEST(IntegrateBoxTest, MatchesMonteCarlo) {
  std::mt19937_64 rng(99);
  const int n = 3;
  const Polynomial p = RandomPolynomial(rng, n, 6);
  const Box box(Eigen::Vector3d(-0.8, -0.3, 0.1), Eigen::Vector3d(0.5, 1.2, 0.9));
  const PolynomialEvaluator eval(p);
  std::uniform_real_distribution<double> u(0, 1);
  const long samples = 10'000'000;
  double sum = 0, sum2 = 0;
  double x[3];
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = box.lower()(i) + u(rng) * (box.upper()(i) - box.lower()(i));
    const double v = eval(x);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double stderr_ = std::sqrt((sum2 / samples - mean * mean) / samples);
  const double vol = box.Volume();
  EXPECT_NEAR(IntegrateBox(p, box), vol * mean, 3.0 * vol * stderr_);
}

TEST(IntegrateBoxTest, Linear) {
  std::mt19937_64 rng(4);
  const Box box = Box::Cube(2, -1, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = RandomIntegerPolynomial(rng, 2, 4, 6);
    const Polynomial q = RandomIntegerPolynomial(rng, 2, 4, 6);
    const double split = 3.0 * IntegrateBox(p, box) - 2.0 * IntegrateBox(q, box);
    // Equal up to summation order of the per-monomial terms.
    EXPECT_NEAR(IntegrateBox(3.0 * p + (-2.0) * q, box), split,
                1e-13 * std::max(1.0, std::abs(split)));
  }
}

TEST(RingAxiomsTest, RandomIntegerPolynomials) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const Polynomial a = RandomIntegerPolynomial(rng, n, 3, 5);
    const Polynomial b = RandomIntegerPolynomial(rng, n, 3, 5);
    const Polynomial c = RandomIntegerPolynomial(rng, n, 3, 5);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(EvaluatorTest, MatchesPolynomialEvaluate) {
  std::mt19937_64 rng(6);
  const Polynomial p = RandomPolynomial(rng, 3, 8);
  const PolynomialEvaluator eval(p);
  const Eigen::Vector3d x(0.7, -0.2, 0.45);
  EXPECT_NEAR(eval(x), p.Evaluate(x), 1e-12);
}

TEST(EmbedTest, AddsTrailingVariables) {
  const Polynomial p = X(2, 0) * X(2, 1);
  const Polynomial q = Embed(p, 4);
  EXPECT_EQ(q.dimension(), 4);
  EXPECT_EQ(q.coefficient(Monomial({1, 1, 0, 0})), 1.0);
}

TEST(LeadingFormTest, KeepsTopDegree) {
  const Polynomial x = X(2, 0), y = X(2, 1);
  EXPECT_EQ(LeadingForm(x * x * x * x + y * y + C(2, 3)), x * x * x * x);
}

}  // namespace
}  // namespace sospack
