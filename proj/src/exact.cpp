#include "bezknot/exact.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "bezknot/errors.hpp"

namespace bezknot::exact {

namespace {

Rational det3(const Point& c0, const Point& c1, const Point& c2) { return dot(c0, cross(c1, c2)); }

Rational pow10(unsigned exponent) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, exponent);
  return Rational(p);
}

// Sign of the orientation of x relative to directed edge (from, to), measured
// against the plane normal.
int side(const Point& from, const Point& to, const Point& x, const Point& normal) {
  return sgn(dot(cross(to - from, x - from), normal));
}

bool coplanar_point_in_triangle(const Point& x, const Point& a, const Point& b, const Point& c,
                                const Point& normal) {
  const int s0 = side(a, b, x, normal);
  const int s1 = side(b, c, x, normal);
  const int s2 = side(c, a, x, normal);
  const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0;
  const bool has_pos = s0 > 0 || s1 > 0 || s2 > 0;
  return !(has_neg && has_pos);
}

bool in_unit_interval(const Rational& v) { return sgn(v) >= 0 && cmp(v, 1) <= 0; }

}  // namespace

Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits.push_back(text[pos++]);
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      --exponent;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw ParseError("not a decimal number: '" + text + "'", 0);
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    long e = 0;
    const auto* first = text.data() + pos;
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last) {
      throw ParseError("bad exponent in '" + text + "'", 0);
    }
    exponent += e;
    pos = text.size();
  }
  if (pos != text.size()) throw ParseError("trailing characters in '" + text + "'", 0);
  if (exponent > 4000 || exponent < -4000) throw ParseError("exponent out of range", 0);

  Rational value(mpz_class(digits, 10));
  if (exponent >= 0) {
    value *= pow10(static_cast<unsigned>(exponent));
  } else {
    value /= pow10(static_cast<unsigned>(-exponent));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

Rational from_double(double value) {
  if (!std::isfinite(value)) throw DegenerateInput("cannot convert a non-finite value exactly");
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw DegenerateInput("decimal conversion failed");
  return parse_decimal(std::string(buffer.data(), ptr));
}

std::string to_string(const Rational& q) { return q.get_str(); }

Point from_double(const Point3& p) { return {from_double(p.x), from_double(p.y), from_double(p.z)}; }

double to_double(const Rational& q) {
  // get_d truncates; pick the nearest of it and its two neighbours.
  const double d = q.get_d();
  double best = d;
  Rational best_err = abs(q - Rational(d));
  for (double c : {std::nextafter(d, -INFINITY), std::nextafter(d, INFINITY)}) {
    if (!std::isfinite(c)) continue;
    const Rational err = abs(q - Rational(c));
    if (err < best_err) best = c, best_err = err;
  }
  return best;
}

Point3 to_double(const Point& p) { return {to_double(p.x), to_double(p.y), to_double(p.z)}; }

Point operator+(const Point& a, const Point& b) {
  return {Rational(a.x + b.x), Rational(a.y + b.y), Rational(a.z + b.z)};
}
Point operator-(const Point& a, const Point& b) {
  return {Rational(a.x - b.x), Rational(a.y - b.y), Rational(a.z - b.z)};
}
Point operator*(const Point& a, const Rational& k) {
  return {Rational(a.x * k), Rational(a.y * k), Rational(a.z * k)};
}
Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Point cross(const Point& a, const Point& b) {
  return {Rational(a.y * b.z - a.z * b.y), Rational(a.z * b.x - a.x * b.z),
          Rational(a.x * b.y - a.y * b.x)};
}
bool is_zero(const Point& a) { return sgn(a.x) == 0 && sgn(a.y) == 0 && sgn(a.z) == 0; }
Point midpoint(const Point& a, const Point& b) { return (a + b) * Rational(1, 2); }

bool collinear(const Point& a, const Point& b, const Point& c) {
  return is_zero(cross(b - a, c - a));
}

bool segments_intersect(const Point& a0, const Point& a1, const Point& b0, const Point& b1) {
  const Point d = a1 - a0;
  const Point e = b1 - b0;
  const Point w = b0 - a0;
  if (sgn(det3(d, e, w)) != 0) return false;  // skew lines
  const Point n = cross(d, e);
  if (is_zero(n)) {
    // parallel (or degenerate): intersect only if collinear with overlapping extents
    const Point dir = is_zero(d) ? e : d;
    if (is_zero(dir)) return a0 == b0;
    if (!is_zero(cross(w, dir)) || !is_zero(cross(b1 - a0, dir))) return false;
    const Rational sa0 = 0, sa1 = dot(a1 - a0, dir);
    const Rational sb0 = dot(b0 - a0, dir), sb1 = dot(b1 - a0, dir);
    const Rational alo = std::min(sa0, sa1), ahi = std::max(sa0, sa1);
    const Rational blo = std::min(sb0, sb1), bhi = std::max(sb0, sb1);
    return cmp(alo, bhi) <= 0 && cmp(blo, ahi) <= 0;
  }
  const Rational nn = dot(n, n);
  const Rational lambda = dot(cross(w, e), n) / nn;
  const Rational mu = dot(cross(w, d), n) / nn;
  return in_unit_interval(lambda) && in_unit_interval(mu);
}

SegmentTriangleResult segment_triangle(const Point& p, const Point& q, const Point& apex,
                                       const Point& left, const Point& right) {
  const Point e1 = left - apex;
  const Point e2 = right - apex;
  const Point normal = cross(e1, e2);
  if (is_zero(normal)) throw DegenerateInput("triangle vertices are collinear");
  const Point d = q - p;
  if (is_zero(d)) throw DegenerateInput("segment has zero length");

  SegmentTriangleResult result;
  // t d - a e1 - b e2 = apex - p
  const Point rhs = apex - p;
  const Point ne1 = e1 * Rational(-1);
  const Point ne2 = e2 * Rational(-1);
  const Rational m = det3(d, ne1, ne2);
  if (sgn(m) != 0) {
    TriangleSolution sol{det3(rhs, ne1, ne2) / m, det3(d, rhs, ne2) / m, det3(d, ne1, rhs) / m};
    result.system = SystemCase::unique_solution;
    result.disjoint = !(in_unit_interval(sol.t) && sgn(sol.a) >= 0 && sgn(sol.b) >= 0 &&
                        cmp(sol.a + sol.b, 1) <= 0);
    result.solution = std::move(sol);
    return result;
  }
  if (sgn(dot(p - apex, normal)) != 0) {
    result.system = SystemCase::parallel_off_plane;
    result.disjoint = true;
    return result;
  }
  result.system = SystemCase::coplanar;
  const bool meets = coplanar_point_in_triangle(p, apex, left, right, normal) ||
                     coplanar_point_in_triangle(q, apex, left, right, normal) ||
                     segments_intersect(p, q, apex, left) ||
                     segments_intersect(p, q, left, right) ||
                     segments_intersect(p, q, right, apex);
  result.disjoint = !meets;
  return result;
}

Rational doubled_area_squared(const Point& a, const Point& b, const Point& c) {
  const Point n = cross(b - a, c - a);
  return dot(n, n);
}

}  // namespace bezknot::exact
