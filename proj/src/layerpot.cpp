#include "hncloak/layerpot.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace hncloak {

double green(Vec2 x, Vec2 y) {
  const double r = (x - y).norm();
  if (r == 0.0) throw DomainError("green: x = y");
  return std::log(r) / two_pi;
}

// ---------------------------------------------------------------- basis actions

double basis_action_circle(CircleBasisOp kind, TrigMode mode, int m, double r_a, Vec2 x) {
  if (m == 0) throw ParamError("basis_action_circle: m = 0 is handled only by the Nystrom path");
  if (m < 0) throw ParamError("basis_action_circle: m must be positive");
  if (!(r_a > 0.0)) throw DomainError("basis_action_circle: r_a must be > 0");
  if (kind == CircleBasisOp::Kstar) return 0.0;  // K* annihilates every m != 0 mode

  const double r = x.norm();
  const double theta = std::atan2(x.y, x.x);
  const double trig = (mode == TrigMode::cos) ? std::cos(m * theta) : std::sin(m * theta);
  const double ratio = (r <= r_a) ? std::pow(r / r_a, m) : std::pow(r_a / r, m);
  return -(r_a / (2.0 * m)) * ratio * trig;
}

double ellipse_kstar_eigenvalue(TrigMode mode, int m, double xi_a) {
  if (m < 1) throw ParamError("ellipse_kstar_eigenvalue: m must be >= 1");
  const double lam = 0.5 * std::exp(-2.0 * m * xi_a);
  return (mode == TrigMode::cos) ? lam : -lam;
}

double basis_action_ellipse(EllipseBasisOp kind, TrigMode mode, int m, const EllipticFrame& frame,
                            double xi_a, Vec2 x) {
  if (m == 0) throw ParamError("basis_action_ellipse: m = 0 is handled only by the Nystrom path");
  if (m < 0) throw ParamError("basis_action_ellipse: m must be positive");
  if (!(xi_a > 0.0)) throw DomainError("basis_action_ellipse: xi_a must be > 0");

  const EllipticCoords ec = cartesian_to_elliptic(frame, x);
  const double xi = ec.xi, eta = ec.eta;
  const bool interior = xi < xi_a;
  const double tc = std::cos(m * eta), ts = std::sin(m * eta);

  switch (kind) {
    case EllipseBasisOp::S_beta:
      if (mode == TrigMode::cos)
        return interior ? -std::cosh(m * xi) / (m * std::exp(m * xi_a)) * tc
                        : -std::cosh(m * xi_a) / (m * std::exp(m * xi)) * tc;
      return interior ? -std::sinh(m * xi) / (m * std::exp(m * xi_a)) * ts
                      : -std::sinh(m * xi_a) / (m * std::exp(m * xi)) * ts;
    case EllipseBasisOp::Kstar_beta: {
      const double beta = ((mode == TrigMode::cos) ? tc : ts) / metric_gamma(frame, xi_a, eta);
      return ellipse_kstar_eigenvalue(mode, m, xi_a) * beta;
    }
    case EllipseBasisOp::D_trig:
      // Regular interior harmonics are cosh*cos and sinh*sin; the decaying
      // exterior branches follow from the value jump D|_- - D|_+ = density.
      if (std::abs(xi - xi_a) < 1e-13)  // principal value on the curve
        return ellipse_kstar_eigenvalue(mode, m, xi_a) * ((mode == TrigMode::cos) ? tc : ts);
      if (mode == TrigMode::cos)
        return interior ? std::exp(-m * xi_a) * std::cosh(m * xi) * tc
                        : -std::sinh(m * xi_a) * std::exp(-m * xi) * tc;
      return interior ? std::exp(-m * xi_a) * std::sinh(m * xi) * ts
                      : -std::cosh(m * xi_a) * std::exp(-m * xi) * ts;
    case EllipseBasisOp::K_trig:
      return ellipse_kstar_eigenvalue(mode, m, xi_a) * ((mode == TrigMode::cos) ? tc : ts);
  }
  return 0.0;
}

// ---------------------------------------------------------------- DensityGrid

double DensityGrid::weighted_mean() const {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    num += w[j] * values[j];
    den += w[j];
  }
  return num / den;
}

void DensityGrid::assert_zero_mean(double tol) const {
  double num = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    num += w[j] * values[j];
    scale = std::max(scale, std::abs(values[j]));
  }
  if (std::abs(num) > tol * std::max(1.0, scale))
    throw ContractError("DensityGrid: density must lie in L^2_0 but has nonzero mean");
}

std::string DensityGrid::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "t,weight,value\n";
  for (std::size_t j = 0; j < values.size(); ++j)
    os << t[j] << "," << w[j] << "," << values[j] << "\n";
  return os.str();
}

// ---------------------------------------------------------------- NystromSystem

namespace {

// Quadrature weights R_k for the 2pi-periodic logarithmic kernel
// ln(4 sin^2((t-s)/2)), exact on trigonometric polynomials of degree < N/2.
std::vector<double> kress_log_weights(int N) {
  const int n = N / 2;
  std::vector<double> R(N);
  for (int k = 0; k < N; ++k) {
    double acc = 0.0;
    for (int m = 1; m < n; ++m) acc += std::cos(m * k * M_PI / n) / m;
    R[k] = -(two_pi / n) * acc - (M_PI / (n * n)) * std::cos(k * M_PI);
  }
  return R;
}

}  // namespace

NystromSystem::NystromSystem(PerturbedCurve curve, int N) : curve_(std::move(curve)), N_(N) {
  if (N < 16 || N % 2 != 0) throw ParamError("NystromSystem: N must be even and >= 16");

  t_.resize(N);
  w_.resize(N);
  speed_.resize(N);
  tau_.resize(N);
  x_.resize(N);
  nu_.resize(N);
  tan_.resize(N);
  for (int j = 0; j < N; ++j) {
    t_[j] = two_pi * j / N;
    const CurveFrame f = perturbed_frame(curve_, t_[j]);
    x_[j] = f.point;
    nu_[j] = f.normal;
    tan_[j] = f.tangent;
    speed_[j] = f.speed;
    tau_[j] = f.curvature;
    w_[j] = f.speed * two_pi / N;
    max_spacing_ = std::max(max_spacing_, w_[j]);
  }

  // adjoint double-layer kernel; continuous on C^2 curves with limit tau/(4pi)
  kstar_.resize(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) {
        kstar_(i, i) = w_[i] * tau_[i] / (2.0 * two_pi);
      } else {
        const Vec2 r = x_[i] - x_[j];
        kstar_(i, j) = w_[j] * r.dot(nu_[i]) / (two_pi * r.norm2());
      }
    }
  }

  // on-curve single layer: ln|x-y| = (1/2) ln(4 sin^2((t-s)/2)) + (1/2) ln r~,
  // with r~ = |x(t)-x(s)|^2 / (4 sin^2((t-s)/2)) smooth and r~(t,t) = speed^2
  const std::vector<double> R = kress_log_weights(N);
  son_.resize(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      double log_smooth;
      if (i == j) {
        log_smooth = 2.0 * std::log(speed_[i]);
      } else {
        const double sn = 2.0 * std::sin(0.5 * (t_[i] - t_[j]));
        log_smooth = std::log((x_[i] - x_[j]).norm2() / (sn * sn));
      }
      const int k = std::abs(i - j);
      son_(i, j) = speed_[j] * (R[k] / (2.0 * two_pi) + log_smooth / (2.0 * N));
    }
  }

  // spectral differentiation of 2pi-periodic nodal values (even N)
  dt_.resize(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j) {
        dt_(i, j) = 0.0;
      } else {
        const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
        dt_(i, j) = 0.5 * sign / std::tan(0.5 * (t_[i] - t_[j]));
      }
    }
  }
}

DensityGrid NystromSystem::make_density(std::vector<double> values, bool zero_mean) const {
  if (static_cast<int>(values.size()) != N_)
    throw ParamError("make_density: value count does not match node count");
  DensityGrid g;
  g.t = t_;
  g.w = w_;
  g.values = std::move(values);
  g.zero_mean_required = zero_mean;
  if (zero_mean) g.assert_zero_mean();
  return g;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& NystromSystem::factor(double sign) const {
  const std::scoped_lock lock(factor_mutex_);
  auto& slot = (sign > 0) ? lu_plus_ : lu_minus_;
  if (!slot) {
    Eigen::MatrixXd A = kstar_;
    A.diagonal().array() += sign;
    slot = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(A);
    if (slot->rcond() < 1e-12) throw NumericError("solve_second_kind: system is ill-conditioned");
  }
  return *slot;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& NystromSystem::factor_bordered(double sign) const {
  const std::scoped_lock lock(factor_mutex_);
  auto& slot = (sign > 0) ? lub_plus_ : lub_minus_;
  if (!slot) {
    Eigen::MatrixXd A(N_ + 1, N_ + 1);
    A.topLeftCorner(N_, N_) = kstar_;
    A.topLeftCorner(N_, N_).diagonal().array() += sign;
    for (int j = 0; j < N_; ++j) {
      A(j, N_) = w_[j];  // Lagrange multiplier column
      A(N_, j) = w_[j];  // discrete zero-mean row
    }
    A(N_, N_) = 0.0;
    slot = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(A);
    if (slot->rcond() < 1e-12) throw NumericError("solve_second_kind: system is ill-conditioned");
  }
  return *slot;
}

DensityGrid NystromSystem::solve_second_kind(const DensityGrid& rhs, double sign,
                                             bool zero_mean) const {
  if (static_cast<int>(rhs.values.size()) != N_)
    throw ParamError("solve_second_kind: rhs size mismatch");
  double bscale = 0.0;
  for (double v : rhs.values) bscale = std::max(bscale, std::abs(v));

  Eigen::VectorXd x;
  if (zero_mean) {
    double mean = 0.0;
    for (int j = 0; j < N_; ++j) mean += w_[j] * rhs.values[j];
    if (std::abs(mean) > 1e-8 * std::max(1.0, bscale))
      throw ContractError("solve_second_kind: rhs violates the zero-mean solvability condition");
    Eigen::VectorXd b(N_ + 1);
    for (int j = 0; j < N_; ++j) b[j] = rhs.values[j];
    b[N_] = 0.0;
    x = factor_bordered(sign).solve(b);
    x.conservativeResize(N_);
  } else {
    Eigen::VectorXd b(N_);
    for (int j = 0; j < N_; ++j) b[j] = rhs.values[j];
    x = factor(sign).solve(b);
  }

  // residual of the (unbordered) collocation equations
  Eigen::VectorXd Ax = kstar_ * x + sign * x;
  double res = 0.0;
  for (int j = 0; j < N_; ++j) res = std::max(res, std::abs(Ax[j] - rhs.values[j]));
  if (res > 1e-10 * std::max(1.0, bscale))
    throw NumericError("solve_second_kind: residual exceeds tolerance");

  std::vector<double> vals(x.data(), x.data() + N_);
  return make_density(std::move(vals), zero_mean);
}

std::vector<double> NystromSystem::single_layer_on_curve(const DensityGrid& phi) const {
  Eigen::Map<const Eigen::VectorXd> v(phi.values.data(), N_);
  Eigen::VectorXd out = son_ * v;
  return {out.data(), out.data() + N_};
}

std::vector<double> NystromSystem::single_layer_dn(const DensityGrid& phi, double side) const {
  Eigen::Map<const Eigen::VectorXd> v(phi.values.data(), N_);
  Eigen::VectorXd out = kstar_ * v + 0.5 * side * v;
  return {out.data(), out.data() + N_};
}

EvalResult NystromSystem::eval_layer(LayerKind kind, const DensityGrid& density, Vec2 x) const {
  EvalResult r;
  double dmin = 1e300;
  for (int j = 0; j < N_; ++j) {
    const Vec2 d = x - x_[j];
    const double n2 = d.norm2();
    dmin = std::min(dmin, n2);
    if (kind == LayerKind::single) {
      r.value += 0.5 * std::log(n2) / two_pi * density.values[j] * w_[j];
    } else {
      r.value += -d.dot(nu_[j]) / (two_pi * n2) * density.values[j] * w_[j];
    }
  }
  r.near_boundary = std::sqrt(dmin) < 3.0 * max_spacing_;
  return r;
}

GradResult NystromSystem::grad_layer(LayerKind kind, const DensityGrid& density, Vec2 x) const {
  GradResult r;
  double dmin = 1e300;
  for (int j = 0; j < N_; ++j) {
    const Vec2 d = x - x_[j];
    const double n2 = d.norm2();
    dmin = std::min(dmin, n2);
    const double fw = density.values[j] * w_[j];
    if (kind == LayerKind::single) {
      r.value += d * (fw / (two_pi * n2));
    } else {
      // grad_x of <y-x,nu(y)>/(2pi |x-y|^2)
      const double rn = d.dot(nu_[j]);
      r.value += (2.0 * rn * d - n2 * nu_[j]) * (fw / (two_pi * n2 * n2));
    }
  }
  r.near_boundary = std::sqrt(dmin) < 3.0 * max_spacing_;
  return r;
}

std::vector<double> NystromSystem::param_deriv(const std::vector<double>& nodal) const {
  Eigen::Map<const Eigen::VectorXd> v(nodal.data(), N_);
  Eigen::VectorXd out = dt_ * v;
  return {out.data(), out.data() + N_};
}

std::vector<double> NystromSystem::arclength_deriv(const std::vector<double>& nodal) const {
  std::vector<double> out = param_deriv(nodal);
  for (int j = 0; j < N_; ++j) out[j] /= speed_[j];
  return out;
}

NystromSystem assemble_nystrom(const Curve& curve, int N) { return NystromSystem(curve, N); }
NystromSystem assemble_nystrom(const PerturbedCurve& curve, int N) { return NystromSystem(curve, N); }

}  // namespace hncloak
