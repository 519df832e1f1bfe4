#include "bezknot/geometry.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <string>

#include "bezknot/errors.hpp"

namespace bezknot {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, kMaxDegree + 1>, kMaxDegree + 1>;

constexpr BinomialTable make_pascal() {
  BinomialTable table{};
  for (std::size_t n = 0; n <= kMaxDegree; ++n) {
    table[n][0] = 1;
    for (std::size_t k = 1; k <= n; ++k) table[n][k] = table[n - 1][k - 1] + table[n - 1][k];
  }
  return table;
}

constexpr BinomialTable kPascal = make_pascal();

void check_parameter(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("curve parameter " + std::to_string(t) + " outside [0,1]");
  }
}

template <class P>
void check_net(const std::vector<P>& control) {
  if (control.empty()) throw DegenerateInput("Bezier control net is empty");
  if (control.size() - 1 > kMaxDegree) {
    throw UnsupportedDegree("degree " + std::to_string(control.size() - 1) +
                            " exceeds supported maximum " + std::to_string(kMaxDegree));
  }
}

template <class P>
P eval_bernstein(std::span<const P> control, double t) {
  const std::size_t n = control.size() - 1;
  P sum{};
  for (std::size_t i = 0; i <= n; ++i) {
    const double basis = static_cast<double>(kPascal[n][i]) * std::pow(t, static_cast<double>(i)) *
                         std::pow(1.0 - t, static_cast<double>(n - i));
    sum += control[i] * basis;
  }
  return sum;
}

template <class P>
P eval_de_casteljau(std::span<const P> control, double t) {
  std::vector<P> work(control.begin(), control.end());
  for (std::size_t level = work.size() - 1; level > 0; --level) {
    for (std::size_t i = 0; i < level; ++i) work[i] = work[i] * (1.0 - t) + work[i + 1] * t;
  }
  return work.front();
}

// Horner in the variable t/(1-t), switching to (1-t)/t for t > 1/2.
template <class P>
P eval_horner(std::span<const P> control, double t) {
  const std::size_t n = control.size() - 1;
  if (n == 0) return control[0];
  if (t > 0.5) {
    std::vector<P> reversed(control.rbegin(), control.rend());
    return eval_horner<P>(reversed, 1.0 - t);
  }
  const double s = 1.0 - t;
  const double ratio = t / s;
  P acc = control[n];
  for (std::size_t k = n; k-- > 0;) {
    acc = acc * (ratio * static_cast<double>(n - k) / static_cast<double>(k + 1)) + control[k];
  }
  return acc * std::pow(s, static_cast<double>(n));
}

template <class P>
P eval_with(std::span<const P> control, double t, EvalMethod method) {
  check_parameter(t);
  switch (method) {
    case EvalMethod::de_casteljau:
      return eval_de_casteljau(control, t);
    case EvalMethod::horner:
      return eval_horner(control, t);
    case EvalMethod::bernstein:
    default:
      return eval_bernstein(control, t);
  }
}

double turning_angle(const Point3& incoming, const Point3& outgoing) {
  return std::atan2(norm(cross(incoming, outgoing)), dot(incoming, outgoing));
}

}  // namespace

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (n > kMaxDegree) throw UnsupportedDegree("binomial order above " + std::to_string(kMaxDegree));
  return k > n ? 0 : kPascal[n][k];
}

ControlPolygon::ControlPolygon(std::vector<Point3> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw DegenerateInput("closed control polygon needs at least 2 distinct vertices");
  }
  for (const auto& p : vertices_) {
    if (!is_finite(p)) throw DegenerateInput("control point has a non-finite coordinate");
  }
  if (!(vertices_.front() == vertices_.back())) {
    throw DegenerateInput("control polygon is not closed (last vertex differs from first)");
  }
}

ControlPolygon ControlPolygon::from_open(std::vector<Point3> vertices) {
  if (!vertices.empty() && (vertices.size() == 1 || !(vertices.front() == vertices.back()))) {
    vertices.push_back(vertices.front());
  }
  return ControlPolygon(std::move(vertices));
}

ControlPolygon ControlPolygon::with_vertex(std::size_t i, const Point3& p) const {
  if (i > degree()) throw DomainError("vertex index " + std::to_string(i) + " out of range");
  auto v = vertices_;
  if (i == 0 || i == degree()) {
    v.front() = p;
    v.back() = p;
  } else {
    v[i] = p;
  }
  return ControlPolygon(std::move(v));
}

ControlPolygon ControlPolygon::with_inserted(std::size_t i, const Point3& p) const {
  if (i >= size()) throw DomainError("vertex index " + std::to_string(i) + " out of range");
  auto v = vertices_;
  v.insert(v.begin() + static_cast<std::ptrdiff_t>(i) + 1, p);
  return ControlPolygon(std::move(v));
}

ControlPolygon ControlPolygon::without_vertex(std::size_t i) const {
  if (i >= size()) throw DomainError("vertex index " + std::to_string(i) + " out of range");
  if (size() <= 2) throw DegenerateInput("cannot delete below 2 distinct vertices");
  std::vector<Point3> v(vertices_.begin(), vertices_.end() - 1);
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
  v.push_back(v.front());
  return ControlPolygon(std::move(v));
}

BezierCurve::BezierCurve(std::vector<Point3> control) : control_(std::move(control)) {
  check_net(control_);
  for (const auto& p : control_) {
    if (!is_finite(p)) throw DegenerateInput("control point has a non-finite coordinate");
  }
}

BezierCurve::BezierCurve(const ControlPolygon& polygon)
    : BezierCurve(std::vector<Point3>(polygon.vertices().begin(), polygon.vertices().end())) {}

Point3 BezierCurve::evaluate(double t, EvalMethod method) const {
  return eval_with<Point3>(control_, t, method);
}

PlanarCurve::PlanarCurve(std::vector<Point2> control) : control_(std::move(control)) {
  check_net(control_);
}

Point2 PlanarCurve::evaluate(double t, EvalMethod method) const {
  return eval_with<Point2>(control_, t, method);
}

PlanarCurve project_xy(const BezierCurve& curve) {
  std::vector<Point2> planar;
  planar.reserve(curve.control().size());
  for (const auto& p : curve.control()) planar.push_back({p.x, p.y});
  return PlanarCurve(std::move(planar));
}

std::pair<BezierCurve, BezierCurve> decasteljau_subdivide(const BezierCurve& curve, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("subdivision parameter " + std::to_string(u) + " outside (0,1)");
  }
  const auto control = curve.control();
  const std::size_t n = curve.degree();
  std::vector<Point3> work(control.begin(), control.end());
  std::vector<Point3> left(n + 1), right(n + 1);
  left[0] = work[0];
  right[n] = work[n];
  for (std::size_t level = 1; level <= n; ++level) {
    for (std::size_t i = 0; i + level <= n; ++i) work[i] = work[i] * (1.0 - u) + work[i + 1] * u;
    left[level] = work[0];
    right[n - level] = work[n - level];
  }
  return {BezierCurve(std::move(left)), BezierCurve(std::move(right))};
}

std::vector<SubdivisionPiece> subdivide(const BezierCurve& curve, double u, std::size_t depth) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("subdivision parameter " + std::to_string(u) + " outside (0,1)");
  }
  if (depth > 20) throw DomainError("subdivision depth above 20");
  std::vector<SubdivisionPiece> pieces{{0.0, 1.0, curve}};
  for (std::size_t level = 0; level < depth; ++level) {
    std::vector<SubdivisionPiece> next;
    next.reserve(pieces.size() * 2);
    for (const auto& piece : pieces) {
      auto [left, right] = decasteljau_subdivide(piece.curve, u);
      const double mid = piece.t_begin + u * (piece.t_end - piece.t_begin);
      next.push_back({piece.t_begin, mid, std::move(left)});
      next.push_back({mid, piece.t_end, std::move(right)});
    }
    pieces = std::move(next);
  }
  return pieces;
}

double total_curvature(const ControlPolygon& polygon) {
  const auto v = polygon.distinct_vertices();
  const std::size_t m = v.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point3 incoming = v[i] - v[(i + m - 1) % m];
    const Point3 outgoing = v[(i + 1) % m] - v[i];
    if (dot(incoming, incoming) == 0.0 || dot(outgoing, outgoing) == 0.0) {
      throw DegenerateInput("zero-length edge at vertex " + std::to_string(i));
    }
    total += turning_angle(incoming, outgoing);
  }
  return total;
}

std::vector<Point3> sample_curve(const BezierCurve& curve, std::size_t count) {
  if (count < 2) throw DomainError("need at least 2 samples");
  std::vector<Point3> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = k + 1 == count ? 1.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    out.push_back(curve.evaluate(t));
  }
  return out;
}

double sampled_total_curvature(const BezierCurve& curve, std::size_t samples) {
  if (samples < 3) throw DomainError("need at least 3 samples");
  auto pts = sample_curve(curve, samples + 1);
  if (!curve.is_closed()) throw DegenerateInput("total curvature needs a closed curve");
  pts.back() = pts.front();
  return total_curvature(ControlPolygon(std::move(pts)));
}

}  // namespace bezknot
