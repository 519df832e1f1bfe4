#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bezknot/geometry.hpp"
#include "bezknot/knot.hpp"
#include "bezknot/selfx.hpp"

// Reference data sets compiled into the binary.
namespace bezknot::fixtures {

// Degree-10 closed control polygon whose curve is a trefoil.
ControlPolygon trefoil_polygon();

struct CrossingReference {
  double t_first;
  double t_second;
  double gap;  // reference planar distance at the rounded parameters
  Point3 point_first;
  Point3 point_second;
};

// Reference crossing parameters, gaps and 3D curve points, in traversal order
// of t_first. The x of the second point of the middle pair is stored as
// +0.4364: the reference listing has a minus sign, but its own planar
// crossing needs x(t_first) == x(t_second).
std::array<CrossingReference, 3> trefoil_crossings();
constexpr bool kTrefoilSignCorrected = true;

// Expected traversal word.
std::vector<knot::Sense> trefoil_word();

// Push script for the trefoil polygon, addressed by original vertex labels.
// Only the first push comes with the reference data; the rest was found by
// exhaustive exact search. Move labels are informational.
std::vector<knot::ScriptEntry> trefoil_push_script();
constexpr bool kPushScriptReconstructed = true;

// Six listed control points of the equilateral counterexample, closed.
ControlPolygon equilateral_polygon();

// Optimizer output for the same example: five (phi, theta) pairs plus (s, t).
selfx::SphericalEdgeParams equilateral_params();

// Polygon rebuilt from the angles above, P_0 at the origin.
ControlPolygon equilateral_polygon_from_params();

// Reference S and F at the reported solution.
constexpr std::array<double, 3> kEquilateralSvalue{-3.861e-4, -9.70e-5, 1.462e-4};
constexpr double kEquilateralFvalue = 2.2329e-5;

// Six-stick trefoil with integer vertices; its projection is the alternating
// three-crossing diagram with height gaps of at least 2.
ControlPolygon six_stick_trefoil();

// Regular planar pentagon, a convex closed control polygon.
ControlPolygon convex_pentagon();

// Named lookup used by the CLI and the server: "trefoil", "equilateral",
// "six-stick-trefoil", "pentagon". Throws std::invalid_argument otherwise.
ControlPolygon by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace bezknot::fixtures
