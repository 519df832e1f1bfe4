#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bezknot/errors.hpp"
#include "bezknot/fixtures.hpp"
#include "bezknot/geometry.hpp"

using namespace bezknot;

namespace {

// Direct sum with binomials built from lgamma, in long double.
Point3 bernstein_oracle(std::span<const Point3> pts, double t) {
  const std::size_t n = pts.size() - 1;
  long double x = 0, y = 0, z = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const long double c = std::round(std::exp(std::lgamma(n + 1.0L) - std::lgamma(i + 1.0L) -
                                              std::lgamma(n - i + 1.0L)));
    const long double w = c * std::pow(static_cast<long double>(t), static_cast<long double>(i)) *
                          std::pow(1.0L - t, static_cast<long double>(n - i));
    x += w * pts[i].x;
    y += w * pts[i].y;
    z += w * pts[i].z;
  }
  return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
}

std::vector<Point3> random_net(std::mt19937_64& rng, std::size_t count, double scale = 5.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Point3> pts(count);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return pts;
}

double max_diff(const Point3& a, const Point3& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

}  // namespace

TEST(Binomial, PascalRowsMatchFactorialFormula) {
  EXPECT_EQ(binomial(10, 3), 120u);
  EXPECT_EQ(binomial(30, 15), 155117520u);
  EXPECT_EQ(binomial(6, 0), 1u);
  EXPECT_EQ(binomial(6, 7), 0u);
  EXPECT_THROW(binomial(31, 2), UnsupportedDegree);
}

TEST(ControlPolygon, StoresClosureAndValidates) {
  const auto p = ControlPolygon::from_open({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  EXPECT_EQ(p.degree(), 3u);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.vertices().back(), p.vertices().front());
  EXPECT_THROW(ControlPolygon({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}), DegenerateInput);
  EXPECT_THROW(ControlPolygon({{0, 0, 0}, {0, 0, 0}}), DegenerateInput);
  EXPECT_THROW(ControlPolygon::from_open({{0, 0, 0}, {NAN, 0, 0}, {0, 1, 0}}), DegenerateInput);
}

TEST(ControlPolygon, EditingVertexZeroEditsClosure) {
  const auto p = ControlPolygon::from_open({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
  const auto q = p.with_vertex(0, {5, 5, 5});
  EXPECT_EQ(q.vertices().front(), (Point3{5, 5, 5}));
  EXPECT_EQ(q.vertices().back(), (Point3{5, 5, 5}));
  const auto r = p.with_vertex(p.degree(), {7, 7, 7});
  EXPECT_EQ(r.vertices().front(), (Point3{7, 7, 7}));
  const auto ins = p.with_inserted(1, {2, 2, 2});
  EXPECT_EQ(ins.size(), 4u);
  EXPECT_EQ(ins[2], (Point3{2, 2, 2}));
  const auto del = ins.without_vertex(0);
  EXPECT_EQ(del.size(), 3u);
  EXPECT_EQ(del.vertices().front(), del.vertices().back());
  EXPECT_THROW(p.with_inserted(3, {0, 0, 0}), DomainError);
}

TEST(Evaluate, EndpointsInterpolate) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const BezierCurve c(random_net(rng, 2 + trial % 9));
    for (auto m : {EvalMethod::bernstein, EvalMethod::de_casteljau, EvalMethod::horner}) {
      EXPECT_EQ(c.evaluate(0.0, m), c.control().front());
      EXPECT_LT(max_diff(c.evaluate(1.0, m), c.control().back()), 1e-12);
    }
  }
}

TEST(Evaluate, LinearSegment) {
  const BezierCurve c(std::vector<Point3>{{0, 0, 0}, {2, 0, 0}});
  EXPECT_LT(max_diff(c.evaluate(0.25), {0.5, 0, 0}), 1e-15);
}

TEST(Evaluate, AllMethodsAgreeWithLongDoubleOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net = random_net(rng, 3 + trial % 20);
    const BezierCurve c(net);
    const double t = ut(rng);
    const Point3 ref = bernstein_oracle(net, t);
    EXPECT_LT(max_diff(c.evaluate(t, EvalMethod::bernstein), ref), 1e-9);
    EXPECT_LT(max_diff(c.evaluate(t, EvalMethod::de_casteljau), ref), 1e-9);
    EXPECT_LT(max_diff(c.evaluate(t, EvalMethod::horner), ref), 1e-9);
  }
}

TEST(Evaluate, RejectsOutOfRangeParameterAndDegree) {
  const BezierCurve c(fixtures::trefoil_polygon());
  EXPECT_THROW(c.evaluate(-1e-9), DomainError);
  EXPECT_THROW(c.evaluate(1.0 + 1e-9), DomainError);
  EXPECT_THROW(c.evaluate(NAN), DomainError);
  std::mt19937_64 rng(3);
  EXPECT_NO_THROW(BezierCurve(random_net(rng, 31)));
  EXPECT_THROW(BezierCurve(random_net(rng, 32)), UnsupportedDegree);
}

TEST(Evaluate, TrefoilPointAtFirstCrossing) {
  const BezierCurve c(fixtures::trefoil_polygon());
  EXPECT_EQ(c.degree(), 10u);
  EXPECT_LT(max_diff(c.evaluate(0.0306), {-2.0539, 2.8001, -2.6929}), 1e-3);
}

TEST(Evaluate, AffineInvariance) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2, 2), ut(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    double A[3][3];
    for (auto& row : A) for (auto& a : row) a = u(rng);
    const Point3 b{u(rng), u(rng), u(rng)};
    auto map = [&](const Point3& p) {
      return Point3{A[0][0] * p.x + A[0][1] * p.y + A[0][2] * p.z + b.x,
                    A[1][0] * p.x + A[1][1] * p.y + A[1][2] * p.z + b.y,
                    A[2][0] * p.x + A[2][1] * p.y + A[2][2] * p.z + b.z};
    };
    const auto net = random_net(rng, 7);
    std::vector<Point3> mapped;
    for (const auto& p : net) mapped.push_back(map(p));
    const double t = ut(rng);
    EXPECT_LT(max_diff(BezierCurve(mapped).evaluate(t), map(BezierCurve(net).evaluate(t))), 1e-10);
  }
}

TEST(Evaluate, StaysInsideControlHull) {
  // Support-function test: for every direction d, d.C(t) <= max_i d.P_i.
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> ut(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto net = random_net(rng, 6 + trial % 5);
    const BezierCurve c(net);
    for (int k = 0; k < 50; ++k) {
      const Point3 p = c.evaluate(ut(rng));
      for (int d = 0; d < 20; ++d) {
        const Point3 dir{g(rng), g(rng), g(rng)};
        double support = -INFINITY;
        for (const auto& q : net) support = std::max(support, dot(dir, q));
        EXPECT_LE(dot(dir, p), support + 1e-12);
      }
    }
  }
}

TEST(Projection, TrefoilPlanarControlPoints) {
  const auto planar = project_xy(BezierCurve(fixtures::trefoil_polygon()));
  const double xs[] = {-5.9, 10.3, -2.6, -10, 1.9, 11.2, -15.3, -11.7, 17.9, 2.9, -5.9};
  const double ys[] = {4.7, -1.1, -12.4, 7, -12, 7.5, -1.7, 20, -1.1, -13.7, 4.7};
  ASSERT_EQ(planar.control().size(), 11u);
  for (std::size_t i = 0; i < 11; ++i) {
    EXPECT_EQ(planar.control()[i].x, xs[i]);
    EXPECT_EQ(planar.control()[i].y, ys[i]);
  }
}

TEST(Projection, CommutesWithEvaluation) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const BezierCurve c(random_net(rng, 3 + trial % 12));
    const Point3 p = c.evaluate(0.5);
    const Point2 q = project_xy(c).evaluate(0.5);
    EXPECT_LT(std::abs(p.x - q.x), 1e-14);
    EXPECT_LT(std::abs(p.y - q.y), 1e-14);
  }
}

TEST(Projection, IdempotentOnPlanarInput) {
  const auto pentagon = fixtures::convex_pentagon();
  const auto planar = project_xy(BezierCurve(pentagon));
  for (std::size_t i = 0; i < pentagon.vertices().size(); ++i) {
    EXPECT_EQ(planar.control()[i].x, pentagon[i].x);
    EXPECT_EQ(planar.control()[i].y, pentagon[i].y);
  }
}

TEST(Subdivision, MidpointSplitOfSegment) {
  const BezierCurve c(std::vector<Point3>{{0, 0, 0}, {2, 0, 0}});
  const auto [left, right] = decasteljau_subdivide(c, 0.5);
  ASSERT_EQ(left.control().size(), 2u);
  EXPECT_EQ(left.control()[0], (Point3{0, 0, 0}));
  EXPECT_EQ(left.control()[1], (Point3{1, 0, 0}));
  EXPECT_EQ(right.control()[0], (Point3{1, 0, 0}));
  EXPECT_EQ(right.control()[1], (Point3{2, 0, 0}));
}

TEST(Subdivision, ReparameterizationIdentity) {
  const BezierCurve c(fixtures::trefoil_polygon());
  for (double u : {0.5, 0.3, 0.77}) {
    const auto [left, right] = decasteljau_subdivide(c, u);
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      EXPECT_LT(max_diff(left.evaluate(s), c.evaluate(u * s)), 1e-10);
      EXPECT_LT(max_diff(right.evaluate(s), c.evaluate(u + (1 - u) * s)), 1e-10);
    }
  }
}

TEST(Subdivision, RejectsParameterOutsideOpenInterval) {
  const BezierCurve c(fixtures::trefoil_polygon());
  EXPECT_THROW(decasteljau_subdivide(c, 0.0), DomainError);
  EXPECT_THROW(decasteljau_subdivide(c, 1.0), DomainError);
  EXPECT_THROW(decasteljau_subdivide(c, 1.5), DomainError);
}

TEST(Subdivision, ControlNetsConvergeToCurve) {
  // Max distance from each piece's control points to its dense samples.
  const BezierCurve c(fixtures::trefoil_polygon());
  double previous = INFINITY;
  for (std::size_t k = 1; k <= 8; ++k) {
    double worst = 0.0;
    for (const auto& piece : subdivide(c, 0.5, k)) {
      const auto samples = sample_curve(piece.curve, 64);
      for (const auto& q : piece.curve.control()) {
        double nearest = INFINITY;
        for (const auto& p : samples) nearest = std::min(nearest, distance(p, q));
        worst = std::max(worst, nearest);
      }
    }
    EXPECT_LT(worst, previous) << "depth " << k;
    previous = worst;
  }
}

TEST(Subdivision, PiecesCoverUnitIntervalWithEndpointsOnCurve) {
  const BezierCurve c(fixtures::trefoil_polygon());
  const auto pieces = subdivide(c, 0.5, 3);
  ASSERT_EQ(pieces.size(), 8u);
  double t = 0.0;
  for (const auto& piece : pieces) {
    EXPECT_NEAR(piece.t_begin, t, 1e-15);
    t = piece.t_end;
    EXPECT_LT(distance(piece.curve.control().front(), c.evaluate(piece.t_begin)), 1e-9);
    EXPECT_LT(distance(piece.curve.control().back(), c.evaluate(piece.t_end)), 1e-9);
  }
  EXPECT_EQ(t, 1.0);
}

TEST(TotalCurvature, ConvexPolygonsGiveTwoPi) {
  const auto square = ControlPolygon::from_open({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  EXPECT_NEAR(total_curvature(square), 2 * std::numbers::pi, 1e-12);
  std::vector<Point3> hex;
  for (int k = 0; k < 6; ++k) hex.push_back({std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3), 0});
  EXPECT_NEAR(total_curvature(ControlPolygon::from_open(hex)), 2 * std::numbers::pi, 1e-12);
}

TEST(TotalCurvature, TrefoilPolygonExceedsFourPi) {
  EXPECT_GT(total_curvature(fixtures::trefoil_polygon()), 4 * std::numbers::pi);
}

TEST(TotalCurvature, AtLeastTwoPiForRandomPolygons) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_GE(total_curvature(ControlPolygon::from_open(random_net(rng, 3 + trial % 8))),
              2 * std::numbers::pi - 1e-9);
  }
}

TEST(TotalCurvature, ZeroLengthEdgeIsDegenerate) {
  const ControlPolygon p({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  EXPECT_THROW(total_curvature(p), DegenerateInput);
}

TEST(TotalCurvature, SampledCurveOfCircleLikeCurve) {
  // A closed planar convex curve: sampled total curvature approaches 2 pi.
  const BezierCurve c(fixtures::convex_pentagon());
  EXPECT_NEAR(sampled_total_curvature(c, 1024), 2 * std::numbers::pi, 1e-6);
}
