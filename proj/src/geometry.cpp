#include "hncloak/geometry.hpp"

#include <algorithm>
#include <complex>

namespace hncloak {

Vec2 elliptic_to_cartesian(const EllipticFrame& frame, double xi, double eta) {
  if (xi < 0.0) throw DomainError("elliptic_to_cartesian: xi must be >= 0");
  return {frame.l * std::cosh(xi) * std::cos(eta), frame.l * std::sinh(xi) * std::sin(eta)};
}

EllipticCoords cartesian_to_elliptic(const EllipticFrame& frame, Vec2 p) {
  // z = l cosh(xi + i eta); principal acosh gives Re >= 0, Im in (-pi, pi]
  std::complex<double> w = std::acosh(std::complex<double>(p.x / frame.l, p.y / frame.l));
  double xi = w.real();
  double eta = w.imag();
  if (xi < 0.0) {  // acosh may return a negative real part on the branch cut
    xi = -xi;
    eta = -eta;
  }
  if (eta < 0.0) eta += two_pi;
  if (eta >= two_pi) eta -= two_pi;
  return {xi, eta};
}

double metric_gamma(const EllipticFrame& frame, double xi_a, double eta) {
  if (!(xi_a > 0.0))
    throw DomainError("metric_gamma: xi_a must be > 0 (gamma degenerates at the focal segment)");
  double sh = std::sinh(xi_a);
  double sn = std::sin(eta);
  return frame.l * std::sqrt(sh * sh + sn * sn);
}

std::vector<double> gamma_inverse_fourier(const EllipticFrame& frame, double xi_a, int M) {
  if (!(xi_a > 0.0)) throw DomainError("gamma_inverse_fourier: xi_a must be > 0");
  if (M < 0) throw ParamError("gamma_inverse_fourier: M must be >= 0");

  auto compute = [&](int N) {
    std::vector<double> c(M + 1, 0.0);
    const double h = two_pi / N;
    for (int j = 0; j < N; ++j) {
      const double eta = j * h;
      const double gi = 1.0 / metric_gamma(frame, xi_a, eta);
      c[0] += gi;
      for (int m = 1; m <= M; ++m) c[m] += gi * std::cos(2.0 * m * eta);
    }
    c[0] *= h / two_pi;                              // (1/2pi) * integral
    for (int m = 1; m <= M; ++m) c[m] *= 2.0 * h / two_pi;  // (1/pi) * integral
    return c;
  };

  int N = std::max(256, 16 * M + 64);
  std::vector<double> prev = compute(N);
  for (int iter = 0; iter < 12; ++iter) {
    N *= 2;
    std::vector<double> next = compute(N);
    double diff = 0.0;
    for (int m = 0; m <= M; ++m) diff = std::max(diff, std::abs(next[m] - prev[m]));
    if (diff < 1e-10) return next;
    prev = std::move(next);
  }
  throw NumericError("gamma_inverse_fourier: trapezoid quadrature did not converge");
}

// ---------------------------------------------------------------- FourierShape

FourierShape::FourierShape(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {}

FourierShape FourierShape::constant(double c0) {
  FourierShape s;
  s.set_cos(0, c0);
  return s;
}

FourierShape FourierShape::cosine(int m, double amp) {
  FourierShape s;
  s.set_cos(m, amp);
  return s;
}

FourierShape FourierShape::sine(int m, double amp) {
  if (m < 1) throw ParamError("FourierShape::sine: mode must be >= 1");
  FourierShape s;
  s.set_sin(m, amp);
  return s;
}

double FourierShape::eval(double t) const {
  double v = cos_.empty() ? 0.0 : 0.5 * cos_[0];
  for (std::size_t m = 1; m < cos_.size(); ++m) v += cos_[m] * std::cos(m * t);
  for (std::size_t m = 1; m < sin_.size(); ++m) v += sin_[m] * std::sin(m * t);
  return v;
}

double FourierShape::deriv(double t) const {
  double v = 0.0;
  for (std::size_t m = 1; m < cos_.size(); ++m) v -= m * cos_[m] * std::sin(m * t);
  for (std::size_t m = 1; m < sin_.size(); ++m) v += m * sin_[m] * std::cos(m * t);
  return v;
}

double FourierShape::deriv2(double t) const {
  double v = 0.0;
  for (std::size_t m = 1; m < cos_.size(); ++m) v -= m * m * cos_[m] * std::cos(m * t);
  for (std::size_t m = 1; m < sin_.size(); ++m) v -= m * m * sin_[m] * std::sin(m * t);
  return v;
}

double FourierShape::cos_coeff(int m) const {
  return (m >= 0 && m < static_cast<int>(cos_.size())) ? cos_[m] : 0.0;
}

double FourierShape::sin_coeff(int m) const {
  return (m >= 1 && m < static_cast<int>(sin_.size())) ? sin_[m] : 0.0;
}

void FourierShape::set_cos(int m, double v) {
  if (m < 0) throw ParamError("FourierShape::set_cos: negative mode");
  if (m >= static_cast<int>(cos_.size())) cos_.resize(m + 1, 0.0);
  cos_[m] = v;
}

void FourierShape::set_sin(int m, double v) {
  if (m < 1) throw ParamError("FourierShape::set_sin: mode must be >= 1");
  if (m >= static_cast<int>(sin_.size())) sin_.resize(m + 1, 0.0);
  sin_[m] = v;
}

int FourierShape::max_mode() const {
  int m_max = -1;
  for (std::size_t m = 0; m < cos_.size(); ++m)
    if (std::abs(cos_[m]) > 1e-14) m_max = std::max(m_max, static_cast<int>(m));
  for (std::size_t m = 1; m < sin_.size(); ++m)
    if (std::abs(sin_[m]) > 1e-14) m_max = std::max(m_max, static_cast<int>(m));
  return m_max;
}

double FourierShape::max_abs() const {
  double v = 0.0;
  for (double c : cos_) v = std::max(v, std::abs(c));
  for (std::size_t m = 1; m < sin_.size(); ++m) v = std::max(v, std::abs(sin_[m]));
  return v;
}

bool FourierShape::even_symmetric() const {
  for (std::size_t m = 1; m < sin_.size(); ++m)
    if (std::abs(sin_[m]) > 1e-14) return false;
  return true;
}

FourierShape FourierShape::operator*(double s) const {
  FourierShape out = *this;
  for (double& c : out.cos_) c *= s;
  for (double& c : out.sin_) c *= s;
  return out;
}

// ---------------------------------------------------------------- Curve

Curve Curve::circle(double radius) {
  if (!(radius > 0.0)) throw GeometryError("Curve::circle: radius must be > 0");
  Curve c;
  c.kind_ = Kind::circle;
  c.radius_ = radius;
  return c;
}

Curve Curve::ellipse(const EllipticFrame& frame, double xi_a) {
  if (!(xi_a > 0.0)) throw GeometryError("Curve::ellipse: elliptic radius must be > 0");
  Curve c;
  c.kind_ = Kind::ellipse;
  c.frame_ = frame;
  c.xi_a_ = xi_a;
  return c;
}

Curve Curve::generic(FourierShape x_series, FourierShape y_series) {
  Curve c;
  c.kind_ = Kind::generic;
  c.xs_ = std::move(x_series);
  c.ys_ = std::move(y_series);
  for (int j = 0; j < 512; ++j) {
    const double t = two_pi * j / 512;
    if (c.d1(t).norm() < 1e-12)
      throw GeometryError("Curve::generic: parameterization speed vanishes");
  }
  return c;
}

Vec2 Curve::point(double t) const {
  switch (kind_) {
    case Kind::circle:
      return {radius_ * std::cos(t), radius_ * std::sin(t)};
    case Kind::ellipse:
      return elliptic_to_cartesian(frame_, xi_a_, t);
    case Kind::generic:
      return {xs_.eval(t), ys_.eval(t)};
  }
  return {};
}

Vec2 Curve::d1(double t) const {
  switch (kind_) {
    case Kind::circle:
      return {-radius_ * std::sin(t), radius_ * std::cos(t)};
    case Kind::ellipse:
      return {-frame_.l * std::cosh(xi_a_) * std::sin(t), frame_.l * std::sinh(xi_a_) * std::cos(t)};
    case Kind::generic:
      return {xs_.deriv(t), ys_.deriv(t)};
  }
  return {};
}

Vec2 Curve::d2(double t) const {
  switch (kind_) {
    case Kind::circle:
      return {-radius_ * std::cos(t), -radius_ * std::sin(t)};
    case Kind::ellipse:
      return {-frame_.l * std::cosh(xi_a_) * std::cos(t), -frame_.l * std::sinh(xi_a_) * std::sin(t)};
    case Kind::generic:
      return {xs_.deriv2(t), ys_.deriv2(t)};
  }
  return {};
}

Vec2 Curve::d3(double t) const {
  switch (kind_) {
    case Kind::circle:
      return {radius_ * std::sin(t), -radius_ * std::cos(t)};
    case Kind::ellipse:
      return {frame_.l * std::cosh(xi_a_) * std::sin(t), -frame_.l * std::sinh(xi_a_) * std::cos(t)};
    case Kind::generic: {
      // third derivative of the coordinate series
      double x3 = 0.0, y3 = 0.0;
      const auto& xc = xs_.cos_coeffs();
      const auto& xs = xs_.sin_coeffs();
      const auto& yc = ys_.cos_coeffs();
      const auto& ys = ys_.sin_coeffs();
      for (std::size_t m = 1; m < xc.size(); ++m) x3 += m * m * m * xc[m] * std::sin(m * t);
      for (std::size_t m = 1; m < xs.size(); ++m) x3 -= m * m * m * xs[m] * std::cos(m * t);
      for (std::size_t m = 1; m < yc.size(); ++m) y3 += m * m * m * yc[m] * std::sin(m * t);
      for (std::size_t m = 1; m < ys.size(); ++m) y3 -= m * m * m * ys[m] * std::cos(m * t);
      return {x3, y3};
    }
  }
  return {};
}

namespace {

CurveFrame frame_from_derivs(Vec2 p, Vec2 v, Vec2 a) {
  const double speed = v.norm();
  if (speed < 1e-12) throw GeometryError("curve frame: degenerate parameterization speed");
  CurveFrame f;
  f.point = p;
  f.speed = speed;
  f.tangent = v / speed;
  f.normal = f.tangent.rot_cw();
  f.curvature = (v.x * a.y - v.y * a.x) / (speed * speed * speed);
  return f;
}

}  // namespace

CurveFrame curve_frame(const Curve& curve, double t) {
  return frame_from_derivs(curve.point(t), curve.d1(t), curve.d2(t));
}

// ---------------------------------------------------------------- PerturbedCurve

PerturbedCurve::PerturbedCurve(Curve base, FourierShape shape, double epsilon)
    : base_(std::move(base)), shape_(std::move(shape)), eps_(epsilon) {
  if (!is_unperturbed()) {
    // sufficient condition for the normal offset to stay an embedding
    double max_h = 0.0, max_tau = 0.0, min_speed = 1e300;
    const int K = 2048;
    for (int j = 0; j < K; ++j) {
      const double t = two_pi * j / K;
      max_h = std::max(max_h, std::abs(shape_.eval(t)));
      max_tau = std::max(max_tau, std::abs(curve_frame(base_, t).curvature));
      min_speed = std::min(min_speed, d1(t).norm());
    }
    if (eps_ * max_h * max_tau >= 1.0 || min_speed < 1e-6)
      throw GeometryError("PerturbedCurve: perturbation too large, offset curve may self-intersect");
  }
  const int K = 4 * 1024;
  poly_.resize(K);
  min_radius_ = 1e300;
  for (int j = 0; j < K; ++j) {
    poly_[j] = point(two_pi * j / K);
    const double r = poly_[j].norm();
    min_radius_ = std::min(min_radius_, r);
    max_radius_ = std::max(max_radius_, r);
  }
  winds_origin_ = min_radius_ > 0.0 && contains_poly({0.0, 0.0});
}

Vec2 PerturbedCurve::point(double t) const {
  if (is_unperturbed()) return base_.point(t);
  return base_.point(t) + eps_ * shape_.eval(t) * curve_frame(base_, t).normal;
}

namespace {

// nu(t) and its first two parameter derivatives from base derivatives up to d3
struct NormalDerivs {
  Vec2 nu, nu1, nu2;
};

NormalDerivs normal_derivs(const Curve& c, double t) {
  const Vec2 v = c.d1(t), a = c.d2(t), j = c.d3(t);
  const double s = v.norm();
  const double s1 = v.dot(a) / s;
  const double s2 = (a.dot(a) + v.dot(j) - s1 * s1) / s;
  // nu = rot_cw(v)/s, differentiate the quotient twice
  const Vec2 rv = v.rot_cw(), ra = a.rot_cw(), rj = j.rot_cw();
  NormalDerivs nd;
  nd.nu = rv / s;
  nd.nu1 = ra / s - rv * (s1 / (s * s));
  nd.nu2 = rj / s - ra * (2.0 * s1 / (s * s)) - rv * (s2 / (s * s)) + rv * (2.0 * s1 * s1 / (s * s * s));
  return nd;
}

}  // namespace

Vec2 PerturbedCurve::d1(double t) const {
  if (is_unperturbed()) return base_.d1(t);
  const NormalDerivs nd = normal_derivs(base_, t);
  return base_.d1(t) + eps_ * (shape_.deriv(t) * nd.nu + shape_.eval(t) * nd.nu1);
}

Vec2 PerturbedCurve::d2(double t) const {
  if (is_unperturbed()) return base_.d2(t);
  const NormalDerivs nd = normal_derivs(base_, t);
  return base_.d2(t) + eps_ * (shape_.deriv2(t) * nd.nu + 2.0 * shape_.deriv(t) * nd.nu1 +
                               shape_.eval(t) * nd.nu2);
}

CurveFrame perturbed_frame(const PerturbedCurve& pc, double t) {
  return frame_from_derivs(pc.point(t), pc.d1(t), pc.d2(t));
}

double PerturbedCurve::distance(Vec2 p) const {
  double d2min = 1e300;
  const std::size_t K = poly_.size();
  for (std::size_t j = 0; j < K; ++j) {
    const Vec2 a = poly_[j], b = poly_[(j + 1) % K];
    const Vec2 ab = b - a;
    double s = (p - a).dot(ab) / ab.norm2();
    s = std::clamp(s, 0.0, 1.0);
    d2min = std::min(d2min, (p - (a + s * ab)).norm2());
  }
  return std::sqrt(d2min);
}

bool PerturbedCurve::contains_poly(Vec2 p) const {
  // even-odd ray crossing against the cached polyline
  bool inside = false;
  const std::size_t K = poly_.size();
  for (std::size_t j = 0; j < K; ++j) {
    const Vec2 a = poly_[j], b = poly_[(j + 1) % K];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xint) inside = !inside;
    }
  }
  return inside;
}

bool PerturbedCurve::contains(Vec2 p) const {
  const double r = p.norm();
  if (r > max_radius_) return false;
  if (winds_origin_ && r < min_radius_) return true;
  return contains_poly(p);
}

}  // namespace hncloak
