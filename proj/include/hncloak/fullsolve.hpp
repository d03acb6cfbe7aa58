#pragma once

#include "hncloak/perturb.hpp"

namespace hncloak {

// Perturbed cloak: inner/outer boundaries offset by eps*f and eps*g along the
// normals, zeta0 held at the base value stored in config.
struct PerturbedProblem {
  PerturbedCurve inner;
  PerturbedCurve outer;
  CloakConfig config;

  PerturbedProblem(const CloakConfig& cfg, const FourierShape& f, const FourierShape& g,
                   double epsilon);
};

// Full solve of the perturbed transmission problem on the deformed curves.
std::shared_ptr<FieldSolution> solve_perturbed(const PerturbedProblem& prob, int N);

struct TraceSample {
  double arc = 0.0;  // arclength position radius*theta
  double value = 0.0;
};

// Scattered pressure p - P sampled on a circle enclosing the outer boundary.
std::vector<TraceSample> scattered_trace(const FieldSolution& sol, double radius, int K);

struct QRegion {
  double half_width = 3.0;
  double spacing = 0.0;  // 0 -> half_width/200
};

struct QResult {
  double Q = 0.0;
  double excluded_area = 0.0;  // near-boundary cells dropped from X
  long included_cells = 0;
  double cell_area = 0.0;
};

// Q = L2 norm of p - P over the square [-s,s]^2 minus the closed outer curve,
// excluding (and reporting) cells within two node spacings of the boundary.
QResult evaluate_Q(const FieldSolution& sol, const QRegion& region);

// u = -grad p / 12 outside the cloak, -grad p / 12 - zeta0 grad phi in the shell.
Vec2 velocity_field(const FieldSolution& sol, Vec2 x);

struct VelocityResult {
  Vec2 u;
  bool near_boundary = false;  // same exclusion zone as the layer evaluators
};
VelocityResult velocity_field_flagged(const FieldSolution& sol, Vec2 x);

}  // namespace hncloak
