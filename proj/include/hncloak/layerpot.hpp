#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hncloak/geometry.hpp"

namespace hncloak {

// G(x,y) = (1/2pi) ln|x-y|
double green(Vec2 x, Vec2 y);

enum class TrigMode { cos, sin };

// Closed-form actions on the unit Fourier basis of a circle of radius r_a.
// kind S: single layer of e^{im theta}; kind Kstar: adjoint NP operator.
enum class CircleBasisOp { S, Kstar };
double basis_action_circle(CircleBasisOp kind, TrigMode mode, int m, double r_a, Vec2 x);

// Closed-form actions on a confocal ellipse xi = xi_a.
//   S_beta:     single layer of beta_m = cos/sin(m eta)/gamma_a
//   Kstar_beta: adjoint NP operator on beta_m (eigenvalue times beta_m; the
//               returned value is the full density value at x, i.e. lambda*beta_m(x))
//   D_trig:     double layer of cos/sin(m eta)
//   K_trig:     NP operator on cos/sin(m eta) (value lambda*trig(m eta) at x)
enum class EllipseBasisOp { S_beta, Kstar_beta, D_trig, K_trig };
double basis_action_ellipse(EllipseBasisOp kind, TrigMode mode, int m, const EllipticFrame& frame,
                            double xi_a, Vec2 x);

// Eigenvalue of K* on beta_m^{c/s} (and of K on cos/sin(m eta)): +-1/(2 e^{2 m xi_a}).
double ellipse_kstar_eigenvalue(TrigMode mode, int m, double xi_a);

// Real density sampled at the N equispaced parameter nodes of a curve,
// together with arclength quadrature weights w_j = speed(t_j) * 2pi/N.
struct DensityGrid {
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> values;
  bool zero_mean_required = false;

  double weighted_mean() const;
  void assert_zero_mean(double tol = 1e-10) const;
  std::string to_csv() const;  // "t,weight,value" lines
};

// Result of a potential evaluation; near_boundary marks targets closer to the
// curve than three node spacings, where the plain quadrature loses accuracy.
struct EvalResult {
  double value = 0.0;
  bool near_boundary = false;
};

struct GradResult {
  Vec2 value;
  bool near_boundary = false;
};

enum class LayerKind { single, double_ };

// Dense Nystrom discretization of the layer-potential operators of one curve:
// K* with the continuous-kernel diagonal, and the on-curve single layer via
// log-singularity splitting with spectrally accurate product quadrature.
class NystromSystem {
 public:
  NystromSystem(PerturbedCurve curve, int N);
  NystromSystem(const Curve& curve, int N) : NystromSystem(PerturbedCurve(curve), N) {}

  int size() const { return N_; }
  const PerturbedCurve& curve() const { return curve_; }
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<Vec2>& points() const { return x_; }
  const std::vector<Vec2>& normals() const { return nu_; }
  const std::vector<Vec2>& tangents() const { return tan_; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<double>& speeds() const { return speed_; }
  const std::vector<double>& curvatures() const { return tau_; }

  const Eigen::MatrixXd& kstar_matrix() const { return kstar_; }
  const Eigen::MatrixXd& single_layer_matrix() const { return son_; }

  DensityGrid make_density(std::vector<double> values, bool zero_mean = false) const;

  // Solve (sign*I + K*)[phi] = rhs. sign is +1/2 or -1/2. When zero_mean is
  // set the discrete mean is pinned by a bordered (Lagrange) row and the rhs
  // mean is checked against the solvability tolerance.
  DensityGrid solve_second_kind(const DensityGrid& rhs, double sign, bool zero_mean = true) const;

  // On-curve values of S[phi] at the nodes.
  std::vector<double> single_layer_on_curve(const DensityGrid& phi) const;
  // One-sided normal derivatives of S[phi] at the nodes: (+-1/2 I + K*)[phi].
  std::vector<double> single_layer_dn(const DensityGrid& phi, double side) const;

  // Off-curve evaluation (plain periodic trapezoid; flagged near the curve).
  EvalResult eval_layer(LayerKind kind, const DensityGrid& density, Vec2 x) const;
  GradResult grad_layer(LayerKind kind, const DensityGrid& density, Vec2 x) const;

  // Spectral differentiation of a periodic nodal function with respect to t.
  std::vector<double> param_deriv(const std::vector<double>& nodal) const;
  // Arclength derivative: param_deriv / speed.
  std::vector<double> arclength_deriv(const std::vector<double>& nodal) const;

  double max_node_spacing() const { return max_spacing_; }

 private:
  const Eigen::PartialPivLU<Eigen::MatrixXd>& factor(double sign) const;
  const Eigen::PartialPivLU<Eigen::MatrixXd>& factor_bordered(double sign) const;

  PerturbedCurve curve_;
  int N_ = 0;
  std::vector<double> t_, w_, speed_, tau_;
  std::vector<Vec2> x_, nu_, tan_;
  Eigen::MatrixXd kstar_;  // adjoint NP operator (includes quadrature weights)
  Eigen::MatrixXd son_;    // on-curve single layer (includes weights)
  Eigen::MatrixXd dt_;     // spectral differentiation in the parameter
  double max_spacing_ = 0.0;

  // factorizations of (sign*I + K*), plain and bordered, built on first use;
  // the lock keeps concurrent solves race-free (everything else is immutable)
  mutable std::mutex factor_mutex_;
  mutable std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_plus_, lu_minus_;
  mutable std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lub_plus_, lub_minus_;
};

NystromSystem assemble_nystrom(const Curve& curve, int N);
NystromSystem assemble_nystrom(const PerturbedCurve& curve, int N);

}  // namespace hncloak
