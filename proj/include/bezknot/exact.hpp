#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "bezknot/geometry.hpp"

// Exact rational geometry for PL predicates. Doubles enter through their
// shortest round-trip decimal spelling, so a coordinate written as -5.9 is
// the rational -59/10, not the nearest binary fraction.
namespace bezknot::exact {

using Rational = mpq_class;

// Parses a decimal literal ("-5.9", "1e-05", "17") into an exact rational.
// Throws ParseError on malformed input.
Rational parse_decimal(const std::string& text);

// Exact value of the shortest decimal that round-trips to `value`.
Rational from_double(double value);

std::string to_string(const Rational& q);

struct Point {
  Rational x, y, z;
  friend bool operator==(const Point&, const Point&) = default;
};

Point from_double(const Point3& p);
// Nearest double.
double to_double(const Rational& q);
Point3 to_double(const Point& p);

Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(const Point& a, const Rational& k);
Rational dot(const Point& a, const Point& b);
Point cross(const Point& a, const Point& b);
bool is_zero(const Point& a);
Point midpoint(const Point& a, const Point& b);

// True when a, b, c lie on one line (including coincident points).
bool collinear(const Point& a, const Point& b, const Point& c);

// Closed segments [a0,a1] and [b0,b1] share at least one point.
bool segments_intersect(const Point& a0, const Point& a1, const Point& b0, const Point& b1);

// How the segment/triangle system was decided.
enum class SystemCase {
  unique_solution,  // regular 3x3 system; solution tested against the constraints
  parallel_off_plane,  // segment direction parallel to the plane, segment not in it
  coplanar,  // segment lies in the triangle plane; decided by exact 2D overlap
};

struct TriangleSolution {
  Rational t, a, b;  // P_i + (P_{i+1}-P_i) t = apex + a (left-apex) + b (right-apex)
};

struct SegmentTriangleResult {
  bool disjoint = true;
  SystemCase system = SystemCase::unique_solution;
  std::optional<TriangleSolution> solution;  // set for unique_solution
};

// Decides whether the closed segment [p, q] meets the closed triangle
// (apex, left, right), interior included. Throws DegenerateInput for
// collinear triangle vertices or a zero-length segment.
SegmentTriangleResult segment_triangle(const Point& p, const Point& q, const Point& apex,
                                       const Point& left, const Point& right);

// |(b-a) x (c-a)|^2, i.e. (2 * area)^2, exactly.
Rational doubled_area_squared(const Point& a, const Point& b, const Point& c);

}  // namespace bezknot::exact
