#pragma once

#include "hncloak/forward.hpp"

namespace hncloak {

// Boundary data of the first-order coupled system, sampled on the Nystrom
// grids of the unperturbed curves. C references dphi1/dnu on the outer
// boundary, so the electrostatic part is solved during construction and its
// density is carried along.
struct BoundaryData {
  DensityGrid E, A;  // Neumann data on the inner boundary
  DensityGrid B, C;  // value / normal-derivative jumps on the outer boundary
  DensityGrid phi1_density;  // density of phi1 = S_D[phi1_density]
};

// E = f' dphi/dT - f d2phi/dnu2 etc., with the second normal derivatives taken
// as the straight-line Hessian form (computed via -d2/ds2 - tau d/dnu).
BoundaryData boundary_data(const FieldSolution& background, const NystromSystem& sysD,
                           const NystromSystem& sysOm, const FourierShape& f,
                           const FourierShape& g);

struct ModeCoefficient {
  int m = 0;
  double M1 = 0.0;  // multiplies the background-parity trig (cos for cos, sin for sin)
  double M2 = 0.0;  // multiplies the opposite trig
};

struct ScatteringReport {
  Family family = Family::disks;
  int n = 1;
  TrigMode background = TrigMode::cos;
  int m_max = 0;
  std::vector<ModeCoefficient> modes;  // m = n .. m_max

  double max_abs() const;
  // exterior first-order pressure sum_{m} r^-m (..) or e^{-m xi} (..)
  double eval_exterior(const CloakConfig& config, Vec2 x) const;
};

// First-order scattering coefficients of the perturbed perfect cloak.
// Requires config.zeta0 to match the perfect-cloak value. Truncation defaults
// to max_mode(f,g) + 2n + 8 with a tail-magnitude check.
ScatteringReport scattering_coeffs_annulus(const CloakConfig& config, const FourierShape& f,
                                           const FourierShape& g, int m_max = 0);

// Leading-part coefficients for confocal ellipses: only the constant Fourier
// modes c_{i,0}, c_{e,0} of 1/gamma enter.
ScatteringReport scattering_coeffs_ellipse(const CloakConfig& config, const FourierShape& f,
                                           const FourierShape& g, int m_max = 0);

// Closed-form first-order electrostatic potential for the disks family.
struct Phi1Annulus {
  int n = 1;
  TrigMode background = TrigMode::cos;
  std::vector<double> c, s;  // coefficients of r^-m cos(m th) / sin(m th)

  double eval(Vec2 x) const;
};
Phi1Annulus phi1_annulus(const CloakConfig& config, const FourierShape& f);

// Generic solver for the first-order system via the single-density
// representations: phi1 = S_D[phi1_dens], p1 = S_D[psi1] + S_Om[C] + D_Om[-B].
class FirstOrderSolution {
 public:
  FirstOrderSolution(std::shared_ptr<const NystromSystem> sysD,
                     std::shared_ptr<const NystromSystem> sysOm, BoundaryData data);

  double phi1(Vec2 x) const;
  double p1(Vec2 x) const { return p1_flagged(x).value; }
  EvalResult p1_flagged(Vec2 x) const;

  const BoundaryData& data() const { return data_; }
  const DensityGrid& psi1() const { return psi1_; }

 private:
  std::shared_ptr<const NystromSystem> sysD_, sysOm_;
  BoundaryData data_;
  DensityGrid psi1_, psi2_, psi3_;
};

FirstOrderSolution solve_first_order(std::shared_ptr<const NystromSystem> sysD,
                                     std::shared_ptr<const NystromSystem> sysOm,
                                     BoundaryData data);

// Boundary data of the ellipse leading system (the 1/gamma factors replaced by
// their constant Fourier modes); feeds the generic solver in cross-checks of
// the closed-form leading coefficients.
BoundaryData leading_boundary_data(const CloakConfig& config, const NystromSystem& sysD,
                                   const NystromSystem& sysOm, const FourierShape& f,
                                   const FourierShape& g);

}  // namespace hncloak
