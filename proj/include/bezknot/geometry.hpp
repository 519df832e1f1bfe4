#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace bezknot {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Point3& operator+=(const Point3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Point3& operator-=(const Point3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Point3& operator*=(double k) {
    x *= k;
    y *= k;
    z *= k;
    return *this;
  }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;
};

constexpr Point3 operator+(Point3 a, const Point3& b) { return a += b; }
constexpr Point3 operator-(Point3 a, const Point3& b) { return a -= b; }
constexpr Point3 operator-(const Point3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Point3 operator*(Point3 a, double k) { return a *= k; }
constexpr Point3 operator*(double k, Point3 a) { return a *= k; }
constexpr Point3 operator/(const Point3& a, double k) { return {a.x / k, a.y / k, a.z / k}; }

constexpr double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Point3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }
inline bool is_finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Point2& operator*=(double k) {
    x *= k;
    y *= k;
    return *this;
  }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr Point2 operator+(Point2 a, const Point2& b) { return a += b; }
constexpr Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
constexpr Point2 operator*(Point2 a, double k) { return a *= k; }
constexpr Point2 operator*(double k, Point2 a) { return a *= k; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

// Closed PL curve P0..Pn with Pn == P0 stored explicitly. Also the control
// data of a degree-n closed Bezier curve.
class ControlPolygon {
 public:
  // Requires vertices.size() >= 3, vertices.back() == vertices.front() and
  // finite coordinates; throws DegenerateInput otherwise.
  explicit ControlPolygon(std::vector<Point3> vertices);

  // Appends the closing vertex unless the input already ends with P0.
  static ControlPolygon from_open(std::vector<Point3> vertices);

  std::size_t degree() const { return vertices_.size() - 1; }
  // Distinct vertex count (closure duplicate excluded); equals degree().
  std::size_t size() const { return vertices_.size() - 1; }
  std::span<const Point3> vertices() const { return vertices_; }
  std::span<const Point3> distinct_vertices() const {
    return std::span<const Point3>(vertices_).first(size());
  }
  const Point3& operator[](std::size_t i) const { return vertices_[i]; }
  // Edge vector P_{i+1} - P_i, i in [0, degree).
  Point3 edge(std::size_t i) const { return vertices_[i + 1] - vertices_[i]; }

  // Edits keep closure: writing vertex 0 or n writes both.
  ControlPolygon with_vertex(std::size_t i, const Point3& p) const;
  // Inserts p between distinct vertices i and i+1.
  ControlPolygon with_inserted(std::size_t i, const Point3& p) const;
  // Removes distinct vertex i; the result must still have >= 2 distinct vertices.
  ControlPolygon without_vertex(std::size_t i) const;

  friend bool operator==(const ControlPolygon&, const ControlPolygon&) = default;

 private:
  std::vector<Point3> vertices_;
};

enum class EvalMethod { bernstein, de_casteljau, horner };

inline constexpr std::size_t kMaxDegree = 30;

// Exact binomial coefficient C(n, k) for n <= kMaxDegree.
std::uint64_t binomial(std::size_t n, std::size_t k);

// Bezier curve with Point3 control net. Open nets are allowed (subdivision
// pieces and plain segments are not closed).
class BezierCurve {
 public:
  // Throws DegenerateInput for an empty net or non-finite coordinates and
  // UnsupportedDegree above kMaxDegree.
  explicit BezierCurve(std::vector<Point3> control);
  explicit BezierCurve(const ControlPolygon& polygon);

  std::size_t degree() const { return control_.size() - 1; }
  std::span<const Point3> control() const { return control_; }
  bool is_closed() const { return control_.front() == control_.back(); }

  // C(t) = sum_i B_{i,n}(t) P_i; throws DomainError unless 0 <= t <= 1.
  Point3 evaluate(double t, EvalMethod method = EvalMethod::bernstein) const;

 private:
  std::vector<Point3> control_;
};

// Image of a BezierCurve under orthogonal projection onto the x-y plane.
class PlanarCurve {
 public:
  explicit PlanarCurve(std::vector<Point2> control);

  std::size_t degree() const { return control_.size() - 1; }
  std::span<const Point2> control() const { return control_; }
  Point2 evaluate(double t, EvalMethod method = EvalMethod::bernstein) const;

 private:
  std::vector<Point2> control_;
};

// Projection along -z: keeps (x, y) of every control point.
PlanarCurve project_xy(const BezierCurve& curve);

// Splits at u in (0,1): left covers [0,u], right covers [u,1].
std::pair<BezierCurve, BezierCurve> decasteljau_subdivide(const BezierCurve& curve, double u);

struct SubdivisionPiece {
  double t_begin = 0.0;  // global parameter interval of this piece
  double t_end = 1.0;
  BezierCurve curve;
};

// Recursively splits every piece at local parameter u, `depth` times, giving
// 2^depth pieces ordered along the curve.
std::vector<SubdivisionPiece> subdivide(const BezierCurve& curve, double u, std::size_t depth);

// Sum of exterior turning angles at every vertex of the closed polygon.
// Throws DegenerateInput on a zero-length edge.
double total_curvature(const ControlPolygon& polygon);

// Total curvature of the closed PL curve through `samples` uniform curve
// samples; approximates the smooth curve's total curvature.
double sampled_total_curvature(const BezierCurve& curve, std::size_t samples = 1024);

// Uniform parameter samples t_k = k/(count-1), count >= 2.
std::vector<Point3> sample_curve(const BezierCurve& curve, std::size_t count);

}  // namespace bezknot
