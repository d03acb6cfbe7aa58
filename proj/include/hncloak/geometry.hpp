#pragma once

#include <vector>

#include "hncloak/common.hpp"

namespace hncloak {

// Confocal elliptic coordinate system with foci at (+-l, 0).
struct EllipticFrame {
  double l = 1.0;  // focal half-distance

  explicit EllipticFrame(double l_ = 1.0) : l(l_) {
    if (!(l > 0.0)) throw DomainError("EllipticFrame: focal half-distance must be > 0");
  }
};

struct EllipticCoords {
  double xi = 0.0;   // >= 0
  double eta = 0.0;  // in [0, 2*pi)
};

// x = (l cosh(xi) cos(eta), l sinh(xi) sin(eta))
Vec2 elliptic_to_cartesian(const EllipticFrame& frame, double xi, double eta);
EllipticCoords cartesian_to_elliptic(const EllipticFrame& frame, Vec2 p);

// gamma(xi_a, eta) = l sqrt(sinh^2 xi_a + sin^2 eta); the metric factor of the
// coordinate system and the parameterization speed of the ellipse xi = xi_a.
double metric_gamma(const EllipticFrame& frame, double xi_a, double eta);

// Cosine coefficients of 1/gamma(xi_a, .): entry m holds c_{a,2m} with
// c_{a,0} = (1/2pi) \int 1/gamma and c_{a,2m} = (1/pi) \int cos(2m eta)/gamma.
// Only even modes exist; computed by the periodic trapezoid rule with a
// node-doubling convergence check (tolerance 1e-10).
std::vector<double> gamma_inverse_fourier(const EllipticFrame& frame, double xi_a, int M);

// Truncated real Fourier series h(t) = c0/2 + sum_{m>=1} c_m cos(mt) + s_m sin(mt).
// The constant is stored as c0 (the raw coefficient); the 1/2 is applied at
// evaluation time.
class FourierShape {
 public:
  FourierShape() = default;
  FourierShape(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs);

  static FourierShape zero() { return FourierShape(); }
  static FourierShape constant(double c0);        // h == c0/2
  static FourierShape cosine(int m, double amp);  // amp*cos(mt), or constant for m=0
  static FourierShape sine(int m, double amp);

  double eval(double t) const;
  double deriv(double t) const;
  double deriv2(double t) const;

  double cos_coeff(int m) const;  // c_m (0 beyond stored range)
  double sin_coeff(int m) const;  // s_m, m >= 1
  void set_cos(int m, double v);
  void set_sin(int m, double v);

  // largest m with |c_m| + |s_m| > 1e-14; -1 for the zero shape, 0 for a constant
  int max_mode() const;
  double max_abs() const;
  bool is_zero() const { return max_mode() < 0; }
  bool even_symmetric() const;  // all sine coefficients vanish

  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }

  FourierShape operator*(double s) const;

 private:
  std::vector<double> cos_;  // cos_[m] multiplies cos(mt); cos_[0] stores c0
  std::vector<double> sin_;  // sin_[m] multiplies sin(mt); sin_[0] unused
};

// point, outward unit normal, unit tangent (ccw), curvature, |dx/dt|
struct CurveFrame {
  Vec2 point;
  Vec2 normal;
  Vec2 tangent;
  double curvature = 0.0;
  double speed = 0.0;
};

// Closed C^2 curve parameterized over [0, 2*pi), positively oriented.
class Curve {
 public:
  enum class Kind { circle, ellipse, generic };

  static Curve circle(double radius);
  static Curve ellipse(const EllipticFrame& frame, double xi_a);
  // Coordinates given as truncated Fourier series in the parameter; derivatives
  // are taken analytically from the series.
  static Curve generic(FourierShape x_series, FourierShape y_series);

  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  const EllipticFrame& frame() const { return frame_; }
  double xi_a() const { return xi_a_; }
  const FourierShape& x_series() const { return xs_; }
  const FourierShape& y_series() const { return ys_; }

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;
  Vec2 d3(double t) const;

 private:
  Curve() = default;
  Kind kind_ = Kind::circle;
  double radius_ = 1.0;
  EllipticFrame frame_{1.0};
  double xi_a_ = 0.0;
  FourierShape xs_, ys_;
};

CurveFrame curve_frame(const Curve& curve, double t);

// The curve t -> x(t) + eps*h(t)*nu(t). Frames are exact (computed from the
// perturbed parameterization, not from the first-order expansion).
class PerturbedCurve {
 public:
  PerturbedCurve(Curve base, FourierShape shape, double epsilon);
  explicit PerturbedCurve(Curve base) : PerturbedCurve(std::move(base), FourierShape(), 0.0) {}

  const Curve& base() const { return base_; }
  const FourierShape& shape() const { return shape_; }
  double epsilon() const { return eps_; }
  bool is_unperturbed() const { return eps_ == 0.0 || shape_.is_zero(); }

  Vec2 point(double t) const;
  Vec2 d1(double t) const;
  Vec2 d2(double t) const;

  // Distance from p to the curve and an even-odd point-in-region test, both
  // against a dense sampled polyline (resolution picked internally). Radial
  // bounds give O(1) accept/reject away from the annulus containing the curve.
  double distance(Vec2 p) const;
  bool contains(Vec2 p) const;
  double max_radius() const { return max_radius_; }
  double min_radius() const { return min_radius_; }

 private:
  bool contains_poly(Vec2 p) const;

  Curve base_;
  FourierShape shape_;
  double eps_ = 0.0;
  std::vector<Vec2> poly_;  // cached polyline for distance/containment
  double min_radius_ = 0.0, max_radius_ = 0.0;
  bool winds_origin_ = false;
};

CurveFrame perturbed_frame(const PerturbedCurve& pc, double t);

}  // namespace hncloak
