#include "hncloak/fullsolve.hpp"

#include <cmath>

namespace hncloak {

PerturbedProblem::PerturbedProblem(const CloakConfig& cfg, const FourierShape& f,
                                   const FourierShape& g, double epsilon)
    : inner(cfg.inner_curve(), f, epsilon), outer(cfg.outer_curve(), g, epsilon), config(cfg) {
  config.validate();
  for (int j = 0; j < 128; ++j) {
    const Vec2 p = inner.point(two_pi * j / 128);
    if (!outer.contains(p)) throw GeometryError("PerturbedProblem: perturbed curves intersect");
  }
}

std::shared_ptr<FieldSolution> solve_perturbed(const PerturbedProblem& prob, int N) {
  return solve_background_nystrom(prob.inner, prob.outer, prob.config, N);
}

std::vector<TraceSample> scattered_trace(const FieldSolution& sol, double radius, int K) {
  if (radius <= sol.outer_curve().max_radius())
    throw DomainError("scattered_trace: circle must enclose the outer boundary");
  std::vector<TraceSample> out(K);
  for (int k = 0; k < K; ++k) {
    const double th = two_pi * k / K;
    out[k].arc = radius * th;
    out[k].value = sol.scattered({radius * std::cos(th), radius * std::sin(th)});
  }
  return out;
}

QResult evaluate_Q(const FieldSolution& sol, const QRegion& region) {
  const double s = region.half_width;
  if (s <= sol.outer_curve().max_radius())
    throw ParamError("evaluate_Q: half-width must exceed the outer boundary extent");
  const double h = (region.spacing > 0.0) ? region.spacing : s / 200.0;
  const int nc = static_cast<int>(std::llround(2.0 * s / h));
  const double cell_area = h * h;

  // quadrature degrades near the boundary; drop a two-node-spacing collar
  double collar = 0.0;
  if (const NystromSolution* ns = as_nystrom(sol))
    collar = 2.0 * ns->outer_system().max_node_spacing();

  const PerturbedCurve& outer = sol.outer_curve();
  QResult res;
  res.cell_area = cell_area;
  double q2 = 0.0;
  for (int iy = 0; iy < nc; ++iy) {
    for (int ix = 0; ix < nc; ++ix) {
      const Vec2 x{-s + (ix + 0.5) * h, -s + (iy + 0.5) * h};
      if (outer.contains(x)) continue;  // not part of X
      // |x| - max_radius is a distance lower bound: exact distances are only
      // needed in the thin annulus around the boundary
      const double lower = x.norm() - outer.max_radius();
      if (collar > 0.0 && lower < collar && outer.distance(x) < collar) {
        res.excluded_area += cell_area;
        continue;
      }
      const double d = sol.scattered(x);
      q2 += d * d * cell_area;
      ++res.included_cells;
    }
  }
  res.Q = std::sqrt(q2);
  return res;
}

Vec2 velocity_field(const FieldSolution& sol, Vec2 x) {
  const FieldSolution::Region reg = sol.region(x);
  if (reg == FieldSolution::Region::core)
    throw DomainError("velocity_field: point lies inside the core D");
  Vec2 u = sol.grad_pressure(x) * (-1.0 / 12.0);
  if (reg == FieldSolution::Region::shell) u += sol.grad_phi(x) * (-sol.zeta0());
  return u;
}

VelocityResult velocity_field_flagged(const FieldSolution& sol, Vec2 x) {
  VelocityResult res;
  res.u = velocity_field(sol, x);
  if (const NystromSolution* ns = as_nystrom(sol)) {
    const double din = 3.0 * ns->inner_system().max_node_spacing();
    const double dout = 3.0 * ns->outer_system().max_node_spacing();
    res.near_boundary = sol.inner_curve().distance(x) < din || sol.outer_curve().distance(x) < dout;
  }
  return res;
}

}  // namespace hncloak
