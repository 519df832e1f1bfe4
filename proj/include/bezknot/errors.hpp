#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bezknot {

// Parameter outside the operation's admissible range (t not in [0,1], etc.).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedDegree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Zero-length edges, collinear triangles, non-finite coordinates.
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ObjectiveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Planar crossing whose two preimages are too close in height to call.
class AmbiguousCrossing : public std::runtime_error {
 public:
  AmbiguousCrossing(const std::string& what, double t_first, double t_second)
      : std::runtime_error(what), t_first(t_first), t_second(t_second) {}
  double t_first;
  double t_second;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line(line) {}
  std::size_t line;  // 1-based; 0 when no line applies
};

}  // namespace bezknot
