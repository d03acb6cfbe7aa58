#pragma once

#include <memory>
#include <string>

#include "hncloak/layerpot.hpp"

namespace hncloak {

enum class Family { disks, ellipses };

struct CloakConfig {
  Family family = Family::disks;
  double r_i = 1.0, r_e = 2.0;  // disks
  EllipticFrame frame{1.0};
  double xi_i = 0.5, xi_e = 1.0;  // ellipses
  int n = 1;
  TrigMode background = TrigMode::cos;
  double zeta0 = 0.0;

  static CloakConfig disks(double r_i, double r_e, int n, TrigMode bg, double zeta0 = 0.0);
  static CloakConfig ellipses(double l, double xi_i, double xi_e, int n, TrigMode bg,
                              double zeta0 = 0.0);

  Curve inner_curve() const;
  Curve outer_curve() const;
  void validate() const;
};

// Cloaking zeta potential: disks 2 ri^2n re^2n/(re^4n - ri^4n); ellipses the
// sinh/cosh variant matching the background. The unified exponential form is
// evaluated as a cross-check and must agree to 1e-12.
double perfect_zeta(const CloakConfig& config);
CloakConfig with_perfect_zeta(CloakConfig config);

// Applied harmonic background: H = r^n cos/sin(n theta) for disks,
// cosh/sinh(n xi) cos/sin(n eta) for ellipses; P = 12 H.
class BackgroundField {
 public:
  BackgroundField(Family family, int n, TrigMode bg, EllipticFrame frame = EllipticFrame(1.0));

  double H(Vec2 x) const;
  Vec2 grad_H(Vec2 x) const;
  double P(Vec2 x) const { return 12.0 * H(x); }
  Vec2 grad_P(Vec2 x) const { return 12.0 * grad_H(x); }

  Family family() const { return family_; }
  int n() const { return n_; }
  TrigMode type() const { return bg_; }

 private:
  Family family_;
  int n_;
  TrigMode bg_;
  EllipticFrame frame_;
};

// Closed-form radial profile A*grow(xi) + B*e^{-n xi} in the conformal radial
// coordinate (xi = ln r for disks); grow is e^{n xi}, cosh(n xi) or sinh(n xi).
struct RadialProfile {
  double A = 0.0, B = 0.0;
  int n = 1;
  int grow = 0;  // 0: exp, 1: cosh, 2: sinh

  double val(double xi) const;
  double d1(double xi) const;
};

// Profiles of the analytic background solution (phi, shell p, exterior p)
// together with the conformal radial coordinates of the two boundaries.
struct BackgroundProfiles {
  RadialProfile phi, p_shell, p_ext;
  double xi_i = 0.0, xi_e = 0.0;
};
BackgroundProfiles background_profiles(const CloakConfig& config);

// First and second derivative traces of the base fields on the inner boundary.
// Second normal derivatives are the straight-line Hessian form nu^T (Hess u) nu.
struct InnerTraces {
  double phi_T = 0.0;     // tangential (arclength) derivative
  double phi_nunu = 0.0;  // nu^T Hess(phi) nu, shell side
  double p_T = 0.0;
  double p_nunu = 0.0;
};

struct OuterTraces {
  double phi_nu = 0.0;
  double phi_T = 0.0;
  double phi_nunu = 0.0;
  double p_nu_minus = 0.0;  // inside limit
  double p_nu_plus = 0.0;   // outside limit
  double p_nunu_minus = 0.0;
  double p_nunu_plus = 0.0;
};

class FieldSolution {
 public:
  enum class Region { exterior, shell, core };
  virtual ~FieldSolution() = default;

  virtual double phi(Vec2 x) const = 0;
  virtual Vec2 grad_phi(Vec2 x) const = 0;
  virtual double pressure(Vec2 x) const = 0;
  virtual Vec2 grad_pressure(Vec2 x) const = 0;
  virtual Region region(Vec2 x) const = 0;
  virtual InnerTraces inner_traces(double t) const = 0;
  virtual OuterTraces outer_traces(double t) const = 0;
  virtual const PerturbedCurve& inner_curve() const = 0;
  virtual const PerturbedCurve& outer_curve() const = 0;
  virtual std::string provenance() const = 0;  // "series" | "nystrom"

  const BackgroundField& applied() const { return *bg_; }
  double zeta0() const { return zeta0_; }
  double scattered(Vec2 x) const { return pressure(x) - bg_->P(x); }

 protected:
  std::shared_ptr<const BackgroundField> bg_;
  double zeta0_ = 0.0;
};

// Closed-form solution of the unperturbed problem on concentric disks or
// confocal ellipses, valid for any zeta0 (perfect cloak when zeta0 matches
// perfect_zeta).
std::shared_ptr<FieldSolution> analytic_background(const CloakConfig& config);

// Layer-potential solve of the same problem on arbitrary smooth curves:
// (1/2 I + K*_D)[phi] = -dH/dnu_D, then psi_e = 12 zeta0 dphi/dnu_Omega,
// then (1/2 I + K*_D)[psi_i] = -dP/dnu_D - dS_Omega[psi_e]/dnu_D.
// The electrostatic solve must precede the pressure solve.
std::shared_ptr<FieldSolution> solve_background_nystrom(const PerturbedCurve& inner,
                                                        const PerturbedCurve& outer,
                                                        const CloakConfig& config, int N);

// Access to the densities/systems of a Nystrom solution (tests, diagnostics).
class NystromSolution;
const NystromSolution* as_nystrom(const FieldSolution& sol);

class NystromSolution final : public FieldSolution {
 public:
  NystromSolution(std::shared_ptr<const NystromSystem> sysD,
                  std::shared_ptr<const NystromSystem> sysOm, const CloakConfig& config);

  double phi(Vec2 x) const override;
  Vec2 grad_phi(Vec2 x) const override;
  double pressure(Vec2 x) const override;
  Vec2 grad_pressure(Vec2 x) const override;
  Region region(Vec2 x) const override;
  InnerTraces inner_traces(double t) const override;
  OuterTraces outer_traces(double t) const override;
  const PerturbedCurve& inner_curve() const override { return sysD_->curve(); }
  const PerturbedCurve& outer_curve() const override { return sysOm_->curve(); }
  std::string provenance() const override { return "nystrom"; }

  const NystromSystem& inner_system() const { return *sysD_; }
  const NystromSystem& outer_system() const { return *sysOm_; }
  std::shared_ptr<const NystromSystem> inner_system_ptr() const { return sysD_; }
  std::shared_ptr<const NystromSystem> outer_system_ptr() const { return sysOm_; }
  const DensityGrid& phi_density() const { return phi_dens_; }
  const DensityGrid& psi_i() const { return psi_i_; }
  const DensityGrid& psi_e() const { return psi_e_; }

  // pressure evaluation with the near-boundary accuracy flag
  EvalResult pressure_flagged(Vec2 x) const;

 private:
  double boundary_interp(const std::vector<double>& nodal, double t_query,
                         const NystromSystem& sys) const;

  std::shared_ptr<const NystromSystem> sysD_, sysOm_;
  DensityGrid phi_dens_, psi_i_, psi_e_;
  // cached nodal traces for inner_traces/outer_traces
  std::vector<double> phiD_T_, phiD_nunu_, pD_T_, pD_nunu_;
  std::vector<double> phiOm_nu_, phiOm_T_, phiOm_nunu_;
  std::vector<double> pOm_nu_m_, pOm_nu_p_, pOm_nunu_m_, pOm_nunu_p_;
};

}  // namespace hncloak
