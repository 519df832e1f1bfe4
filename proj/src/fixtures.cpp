#include "bezknot/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bezknot::fixtures {

ControlPolygon trefoil_polygon() {
  return ControlPolygon::from_open({{-5.9, 4.7, -6.2},
                                    {10.3, -1.1, 8.9},
                                    {-2.6, -12.4, -6.3},
                                    {-10, 7, -0.3},
                                    {1.9, -12, -0.6},
                                    {11.2, 7.5, -7.6},
                                    {-15.3, -1.7, -4.1},
                                    {-11.7, 20, 3.5},
                                    {17.9, -1.1, 2.9},
                                    {2.9, -13.7, 4.8}});
}

std::array<CrossingReference, 3> trefoil_crossings() {
  return {{
      {0.0306, 0.5573, 2.9567e-4, {-2.0539, 2.8001, -2.6929}, {-2.0530, 2.7987, -2.0143}},
      {0.1573, 0.9244, 1.5848e-4, {0.4376, -2.5212, -0.0576}, {0.4364, -2.5206, -0.5547}},
      {0.3731, 0.9493, 1.4637e-4, {-1.3613, -1.4239, -2.2944}, {-1.3624, -1.4232, -1.9067}},
  }};
}

std::vector<knot::Sense> trefoil_word() {
  using knot::Sense;
  return {Sense::under, Sense::over, Sense::under, Sense::over, Sense::under, Sense::over};
}

std::vector<knot::ScriptEntry> trefoil_push_script() {
  return {{3, "2b"}, {0, "1b"}, {1, "2b"}, {2, "2b+1b"}, {4, "none"}};
}

ControlPolygon equilateral_polygon() {
  return ControlPolygon::from_open({{0, 0, 0},
                                    {0.0305, 0.0810, 0.9962},
                                    {-0.2074, -0.2671, 1.9030},
                                    {-0.1792, -0.3402, 0.9063},
                                    {0.0189, 0.0782, 0.0185},
                                    {0.1557, 0.2329, -0.9600}});
}

selfx::SphericalEdgeParams equilateral_params() {
  selfx::SphericalEdgeParams p;
  p.phi = {0.0867, 0.4353, 3.2225, 2.6633, 2.9336};
  p.theta = {1.2107, 4.1128, 2.0119, 7.4240, 0.8465};
  p.s = 0.2969;
  p.t = 0.0633;
  return p;
}

ControlPolygon equilateral_polygon_from_params() {
  return equilateral_params().edges().reconstruct();
}

ControlPolygon six_stick_trefoil() {
  return ControlPolygon::from_open(
      {{-2, 5, 2}, {3, -5, -1}, {4, 2, 0}, {-1, 0, 4}, {2, -4, -4}, {3, 0, 5}});
}

ControlPolygon convex_pentagon() {
  std::vector<Point3> pts;
  for (int k = 0; k < 5; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 5.0;
    pts.push_back({std::cos(a), std::sin(a), 0.0});
  }
  return ControlPolygon::from_open(std::move(pts));
}

std::vector<std::string> names() {
  return {"trefoil", "equilateral", "six-stick-trefoil", "pentagon"};
}

ControlPolygon by_name(const std::string& name) {
  if (name == "trefoil") return trefoil_polygon();
  if (name == "equilateral") return equilateral_polygon();
  if (name == "six-stick-trefoil") return six_stick_trefoil();
  if (name == "pentagon") return convex_pentagon();
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace bezknot::fixtures
