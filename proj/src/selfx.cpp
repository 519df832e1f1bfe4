#include <algorithm>
#include <cmath>
#include <numbers>

#include "bezknot/errors.hpp"
#include "bezknot/knot.hpp"
#include "bezknot/selfx.hpp"

namespace bezknot::selfx {

namespace {

std::vector<double> powers(double base, std::size_t n) {
  std::vector<double> p(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) p[k] = p[k - 1] * base;
  return p;
}

double wrap_parameter(double t) {
  const double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

Point3 unit_vector(double phi, double theta) {
  return {std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi)};
}

}  // namespace

EdgeVectors EdgeVectors::of(const ControlPolygon& polygon, double r) {
  EdgeVectors e;
  e.r = r;
  for (std::size_t i = 0; i < polygon.degree(); ++i) e.q.push_back(polygon.edge(i));
  return e;
}

ControlPolygon EdgeVectors::reconstruct(const Point3& origin) const {
  if (q.size() < 2) throw DegenerateInput("need at least 2 edge vectors");
  std::vector<Point3> pts{origin};
  for (std::size_t i = 0; i + 1 < q.size(); ++i) pts.push_back(pts.back() + q[i]);
  pts.push_back(origin);
  return ControlPolygon(std::move(pts));
}

double EdgeVectors::edge_length_spread() const {
  double spread = 0.0;
  for (const auto& v : q) spread = std::max(spread, std::abs(norm(v) - r));
  return spread;
}

std::vector<double> SphericalEdgeParams::flatten() const {
  std::vector<double> x(phi);
  x.insert(x.end(), theta.begin(), theta.end());
  x.push_back(s);
  x.push_back(t);
  return x;
}

SphericalEdgeParams SphericalEdgeParams::unflatten(std::span<const double> x) {
  if (x.size() < 4 || x.size() % 2 != 0) {
    throw std::invalid_argument("flat parameter vector must have even length >= 4");
  }
  const std::size_t free_edges = (x.size() - 2) / 2;
  SphericalEdgeParams p;
  p.phi.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(free_edges));
  p.theta.assign(x.begin() + static_cast<std::ptrdiff_t>(free_edges),
                 x.begin() + static_cast<std::ptrdiff_t>(2 * free_edges));
  p.s = x[2 * free_edges];
  p.t = x[2 * free_edges + 1];
  return p;
}

EdgeVectors SphericalEdgeParams::edges() const {
  if (phi.size() != theta.size() || phi.empty()) {
    throw std::invalid_argument("phi and theta must be non-empty and of equal length");
  }
  EdgeVectors e;
  Point3 sum{};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    e.q.push_back(unit_vector(phi[i], theta[i]));
    sum += e.q.back();
  }
  e.q.push_back(-sum);
  return e;
}

SphericalEdgeParams SphericalEdgeParams::normalized() const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SphericalEdgeParams out = *this;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    double p = std::fmod(phi[i], two_pi);
    if (p < 0) p += two_pi;
    double th = theta[i];
    if (p > std::numbers::pi) {
      p = two_pi - p;  // (phi, theta) and (2pi - phi, theta + pi) give the same vector
      th += std::numbers::pi;
    }
    th = std::fmod(th, two_pi);
    if (th < 0) th += two_pi;
    out.phi[i] = p;
    out.theta[i] = th;
  }
  return out;
}

Point3 eval_S(const EdgeVectors& edges, double s, double t) {
  const std::size_t n = edges.degree();
  if (n < 2) throw DegenerateInput("S needs degree >= 2");
  if (n > kMaxDegree) throw UnsupportedDegree("S degree above supported maximum");
  const auto& q = edges.q;
  const auto ps = powers(s, n), pms = powers(1.0 - s, n);
  const auto pt = powers(t, n), pmt = powers(1.0 - t, n);
  Point3 total{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + i < n; ++j) {
      Point3 inner{};
      for (std::size_t k = 0; k <= i; ++k) {
        inner += q[j + k] * (static_cast<double>(binomial(i, k)) * pmt[i - k] * pt[k]);
      }
      total += inner * (static_cast<double>(binomial(n - 1 - i, j)) * ps[n - 1 - i - j] * pms[j]);
    }
  }
  return total / static_cast<double>(n);
}

double closure_defect_F(const SphericalEdgeParams& params) {
  const auto e = params.edges();
  const Point3& last = e.q.back();
  return std::abs(dot(last, last) - 1.0);
}

double eval_SF(const SphericalEdgeParams& params) {
  const auto e = params.edges();
  const Point3& last = e.q.back();
  return norm(eval_S(e, params.s, params.t)) + std::abs(dot(last, last) - 1.0);
}

bool in_domain(double s, double t) { return s >= 0.0 && t >= 0.0 && s + t < 1.0 && (s > 0.0 || t > 0.0); }

double witness_separation(double s, double t) { return knot::cyclic_separation(1.0 - s, t); }

SelfIntersectionWitness make_witness(const ControlPolygon& polygon, double s, double t) {
  const BezierCurve curve(polygon);
  SelfIntersectionWitness w;
  w.s = s;
  w.t = t;
  w.residual = norm(eval_S(EdgeVectors::of(polygon), s, t));
  w.point_a = curve.evaluate(1.0 - s);
  w.point_b = curve.evaluate(t);
  w.gap = distance(w.point_a, w.point_b);
  return w;
}

std::optional<SelfIntersectionWitness> find_self_intersection(const ControlPolygon& polygon,
                                                              const WitnessSearchConfig& config) {
  const BezierCurve curve(polygon);
  const std::size_t m = config.samples;
  if (m < 8) throw DomainError("witness search needs at least 8 samples");
  std::vector<Point3> pts(m);
  for (std::size_t k = 0; k < m; ++k) pts[k] = curve.evaluate(static_cast<double>(k) / m);
  std::vector<float> dist(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const auto d = static_cast<float>(distance(pts[i], pts[j]));
      dist[i * m + j] = d;
      dist[j * m + i] = d;
    }
  }
  auto at = [&](std::size_t i, std::size_t j) { return dist[(i % m) * m + (j % m)]; };
  auto gap = [&curve](std::span<const double> x) {
    return distance(curve.evaluate(wrap_parameter(x[0])), curve.evaluate(wrap_parameter(x[1])));
  };
  optimize::SimplexConfig simplex = config.simplex;
  simplex.initial_step = 2.0 / static_cast<double>(m);

  // Refine the few deepest local minima of the sampled distance.
  std::vector<std::pair<float, std::pair<std::size_t, std::size_t>>> seeds;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double ti = static_cast<double>(i) / m, tj = static_cast<double>(j) / m;
      if (knot::cyclic_separation(ti, tj) <= config.parameter_separation) continue;
      const float d = dist[i * m + j];
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && at(i + m + di, j + m + dj) < d) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) seeds.push_back({d, {i, j}});
    }
  }
  std::sort(seeds.begin(), seeds.end());
  if (seeds.size() > 16) seeds.resize(16);

  std::optional<SelfIntersectionWitness> best;
  for (const auto& [d, ij] : seeds) {
    const auto r = optimize::minimize(
        gap, {static_cast<double>(ij.first) / m, static_cast<double>(ij.second) / m}, simplex);
    double a = wrap_parameter(r.argmin[0]);
    double b = wrap_parameter(r.argmin[1]);
    if (a > b) std::swap(a, b);
    if (knot::cyclic_separation(a, b) <= config.parameter_separation) continue;
    // u1 = t, u2 = 1 - s with u1 < u2 puts (s, t) in D.
    auto w = make_witness(polygon, 1.0 - b, a);
    if (!best || w.gap < best->gap) best = w;
  }
  return best;
}

}  // namespace bezknot::selfx
