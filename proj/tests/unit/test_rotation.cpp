#include "orthowrist/error.hpp"
#include "orthowrist/rotation.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace orthowrist {
namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), tol) << "a = " << a.transpose() << "\nb = " << b.transpose();
}

void expect_proper(const RotationMatrix& r) {
  EXPECT_LE(r.orthonormality_error(), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
}

TEST(ElementaryRotation, ZeroAngleIsIdentity) {
  EXPECT_TRUE(elementary_rotation(Axis::z, 0.0).matrix().isApprox(Mat3::Identity(), 0.0));
  EXPECT_TRUE(elementary_rotation(Axis::x, 0.0).matrix().isApprox(Mat3::Identity(), 0.0));
}

TEST(ElementaryRotation, QuarterTurnAboutZ) {
  expect_vec_near(elementary_rotation(Axis::z, kPi / 2) * Vec3::UnitX(), Vec3::UnitY(), 1e-15);
}

TEST(ElementaryRotation, HalfTurnAboutX) {
  expect_vec_near(elementary_rotation(Axis::x, kPi) * Vec3::UnitY(), -Vec3::UnitY(), 1e-15);
}

TEST(ElementaryRotation, RejectsNonFiniteAngle) {
  try {
    elementary_rotation(Axis::z, std::numeric_limits<double>::quiet_NaN());
    FAIL() << "expected invalid-input";
  } catch (const WristError& e) {
    EXPECT_EQ(e.category(), ErrorCategory::invalid_input);
  }
  EXPECT_THROW(dh_rotation(std::numeric_limits<double>::infinity(), 0.0), WristError);
}

TEST(DhRotation, ZeroIsIdentity) {
  EXPECT_TRUE(dh_rotation(0.0, 0.0).matrix().isApprox(Mat3::Identity(), 0.0));
}

TEST(DhRotation, PureTwistIsXQuarterTurn) {
  EXPECT_LE((dh_rotation(0.0, kPi / 2).matrix() - elementary_rotation(Axis::x, kPi / 2).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(DhRotation, ThirdColumnMatchesHandProduct) {
  // Rz(pi/2) Rx(pi/2): Rx sends Z to (0, -1, 0), Rz turns that into (1, 0, 0).
  expect_vec_near(dh_rotation(kPi / 2, kPi / 2).z_axis(), Vec3(1.0, 0.0, 0.0), 1e-15);
}

TEST(RotationMatrix, FromMatrixChecksInvariants) {
  Mat3 scaled = 1.001 * Mat3::Identity();
  EXPECT_THROW(RotationMatrix::from_matrix(scaled), WristError);
  Mat3 reflection = Mat3::Identity();
  reflection(2, 2) = -1.0;
  EXPECT_THROW(RotationMatrix::from_matrix(reflection), WristError);
  EXPECT_NO_THROW(RotationMatrix::from_matrix(elementary_rotation(Axis::z, 0.3).matrix()));
}

TEST(RotationMatrix, RandomCompositionsStayProper) {
  std::mt19937_64 rng(testing::kSeed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 500; ++trial) {
    RotationMatrix r;
    for (int k = 0; k < 8; ++k) r = r * dh_rotation(angle(rng), angle(rng));
    expect_proper(r);
  }
}

TEST(WristGeometry, Defaults) {
  const WristGeometry g;
  for (double a : g.alpha) EXPECT_EQ(a, kPi / 2);
  EXPECT_EQ(g.home_thetas[0], -kPi / 2);
  EXPECT_EQ(g.home_thetas[1], kPi / 2);
  EXPECT_EQ(g.home_thetas[2], kPi / 2);
  EXPECT_EQ(g.home_thetas[3], -kPi / 2);
  EXPECT_GT(g.tool_length, 0.0);
  EXPECT_NO_THROW(g.validate());
}

TEST(WristGeometry, RejectsNonPositiveToolLength) {
  WristGeometry g;
  g.tool_length = 0.0;
  EXPECT_THROW(g.validate(), WristError);
}

TEST(WristGeometry, BaseAxesAreHorizontalAndHomePointsDown) {
  const WristGeometry g;
  const RotationMatrix b = g.base_from_work();
  expect_proper(b);
  const Mat3 work_from_base = b.matrix().transpose();
  EXPECT_NEAR(work_from_base.col(2).z(), 0.0, 1e-15);  // e1
  const Vec3 e2 = work_from_base * leg_base_frame(Leg::two, g).z_axis();
  EXPECT_NEAR(e2.z(), 0.0, 1e-15);
  const std::array<double, 2> leg1{g.home_thetas[0], g.home_thetas[2]};
  const Vec3 tool = work_from_base * chain_frames(leg1, g, Leg::one).axes.back();
  expect_vec_near(tool, Vec3(0.0, 0.0, -1.0), 1e-15);
}

TEST(ChainFrames, HomeLegOneConsecutiveAxesOrthogonal) {
  const WristGeometry g;
  const std::array<double, 2> th{g.home_thetas[0], g.home_thetas[2]};
  const LegChain c = chain_frames(th, g, Leg::one);
  ASSERT_EQ(c.frames.size(), 3u);
  ASSERT_EQ(c.axes.size(), 3u);
  EXPECT_NEAR(c.axes[0].dot(c.axes[1]), 0.0, 1e-15);
  EXPECT_NEAR(c.axes[1].dot(c.axes[2]), 0.0, 1e-15);
  for (const Vec3& e : c.axes) EXPECT_NEAR(e.norm(), 1.0, 1e-12);
  expect_vec_near(c.axes[0], Vec3::UnitZ(), 0.0);
}

TEST(ChainFrames, ZeroAnglesAreCumulativeTwists) {
  const WristGeometry g;
  const std::array<double, 2> th{0.0, 0.0};
  const LegChain c = chain_frames(th, g, Leg::one);
  Mat3 rx;
  rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  EXPECT_LE((c.frames[1].matrix() - rx).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((c.frames[2].matrix() - rx * rx).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ChainFrames, HomeLegTwoAxesOrthogonal) {
  const WristGeometry g;
  const std::array<double, 2> th{g.home_thetas[1], g.home_thetas[3]};
  const LegChain c = chain_frames(th, g, Leg::two);
  EXPECT_NEAR(c.axes[0].dot(c.axes[1]), 0.0, 1e-15);
  expect_vec_near(c.axes[0], Vec3(1.0, 0.0, 0.0), 1e-15);
}

TEST(ChainFrames, WrongArityIsInvalidInput) {
  const WristGeometry g;
  const std::array<double, 3> th{0.0, 0.0, 0.0};
  try {
    chain_frames(th, g, Leg::one);
    FAIL();
  } catch (const WristError& e) {
    EXPECT_EQ(e.category(), ErrorCategory::invalid_input);
  }
}

TEST(ChainFrames, RandomAnglesGiveUnitOrthogonalAxes) {
  std::mt19937_64 rng(testing::kSeed + 1);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const WristGeometry g;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::array<double, 2> th{angle(rng), angle(rng)};
    for (Leg leg : {Leg::one, Leg::two}) {
      const LegChain c = chain_frames(th, g, leg);
      for (const auto& f : c.frames) expect_proper(f);
      for (const Vec3& e : c.axes) EXPECT_NEAR(e.norm(), 1.0, 1e-12);
      EXPECT_NEAR(c.axes[0].dot(c.axes[1]), 0.0, 1e-12);
      EXPECT_NEAR(c.axes[1].dot(c.axes[2]), 0.0, 1e-12);
    }
  }
}

TimeSeries sample(double dt, std::size_t n, double (*f)(double)) {
  TimeSeries s{dt, {}};
  for (std::size_t i = 0; i < n; ++i) s.values.push_back(f(static_cast<double>(i) * dt));
  return s;
}

TEST(CentralDifference, ConstantGivesZero) {
  const TimeSeries d = central_difference(TimeSeries{0.1, std::vector<double>(7, 3.5)});
  ASSERT_EQ(d.values.size(), 7u);
  for (double v : d.values) EXPECT_EQ(v, 0.0);
}

TEST(CentralDifference, RampGivesSlope) {
  const TimeSeries d = central_difference(sample(0.01, 50, [](double t) { return 5.0 * t - 2.0; }));
  for (double v : d.values) EXPECT_NEAR(v, 5.0, 1e-10);
}

TEST(CentralDifference, QuadraticIsExactEverywhere) {
  const TimeSeries d = central_difference(sample(0.1, 11, [](double t) { return t * t; }));
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    EXPECT_NEAR(d.values[i], 2.0 * 0.1 * static_cast<double>(i), 1e-12);
  }
}

double sine_error(double dt) {
  const auto n = static_cast<std::size_t>(std::llround(2.0 / dt)) + 1;
  const TimeSeries d = central_difference(sample(dt, n, [](double t) { return std::sin(t); }));
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(d.values[i] - std::cos(static_cast<double>(i) * dt)));
  }
  return err;
}

TEST(CentralDifference, SineConvergesAtOrderTwo) {
  const double e1 = sine_error(1e-3);
  const double e2 = sine_error(5e-4);
  EXPECT_LE(e1, 1e-6);
  EXPECT_NEAR(e1 / e2, 4.0, 0.8);
}

TEST(CentralDifference, RejectsShortOrBadStep) {
  EXPECT_THROW(central_difference(TimeSeries{0.1, {1.0, 2.0}}), WristError);
  EXPECT_THROW(central_difference(TimeSeries{0.0, {1.0, 2.0, 3.0}}), WristError);
  EXPECT_THROW(central_difference(TimeSeries{-1.0, {1.0, 2.0, 3.0}}), WristError);
}

TEST(UnwrapAngles, RemovesTwoPiJumps) {
  std::vector<double> raw;
  for (int i = 0; i < 200; ++i) raw.push_back(principal_angle(0.1 * i));
  const auto u = unwrap_angles(raw);
  for (int i = 0; i < 200; ++i) EXPECT_NEAR(u[i], 0.1 * i, 1e-12);
}

TEST(UnwrapAngles, RandomWalkNeverJumpsMoreThanPi) {
  std::mt19937_64 rng(testing::kSeed + 2);
  std::uniform_real_distribution<double> step(-3.0, 3.0);
  std::vector<double> raw{0.0};
  double truth = 0.0;
  for (int i = 0; i < 2000; ++i) {
    truth += step(rng);
    raw.push_back(principal_angle(truth));
  }
  const auto u = unwrap_angles(raw);
  for (std::size_t i = 1; i < u.size(); ++i) EXPECT_LE(std::abs(u[i] - u[i - 1]), kPi + 1e-12);
}

TEST(PrincipalAngle, RangeIsHalfOpen) {
  EXPECT_EQ(principal_angle(kPi), kPi);
  EXPECT_NEAR(principal_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(principal_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(principal_angle(0.25), 0.25, 0.0);
}

TEST(Skew, MatchesCrossProduct) {
  const Vec3 a(0.3, -1.2, 2.0), b(-0.7, 0.4, 1.1);
  expect_vec_near(skew(a) * b, a.cross(b), 1e-15);
}

}  // namespace
}  // namespace orthowrist
