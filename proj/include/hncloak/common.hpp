#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace hncloak {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};
// Degenerate or self-intersecting geometry.
struct GeometryError : Error {
  using Error::Error;
};
// Quadrature non-convergence, ill-conditioned solve, solvability violation.
struct NumericError : Error {
  using Error::Error;
};
// A caller broke a documented precondition between modules.
struct ContractError : Error {
  using Error::Error;
};
// Bad user-facing parameter (node counts, CLI values).
struct ParamError : Error {
  using Error::Error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  // clockwise quarter turn; maps the tangent of a ccw curve to its outward normal
  Vec2 rot_cw() const { return {y, -x}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline constexpr double two_pi = 6.283185307179586476925286766559;

}  // namespace hncloak
