#pragma once

#include "hncloak/perturb.hpp"

namespace hncloak {

struct RecursionStep {
  char series = 'd';  // 'd' (cos chain) or 'h' (sin chain)
  int m = 0;
  double value = 0.0;
  std::string branch;  // which recursion produced it
};

struct DesignResult {
  FourierShape g;
  int m_max = -1;  // largest non-vanishing mode of f
  Family family = Family::disks;
  TrigMode background = TrigMode::cos;
  std::vector<RecursionStep> trace;
  // The mode-n scattering condition of the sin chain references h_0, which a
  // sine series does not have. When f carries sin content on the {2n, 4n, ...}
  // lattice that condition cannot be met by the finite recursion and a
  // residual at mode n remains.
  bool mode_n_residual = false;
};

// Back-substitution of the cloak-shape recursions: d_{m_max+1..m_max+2n} = 0,
// then downward in steps of one, coupling stride 2n.
DesignResult design_annulus(double r_i, double r_e, int n, TrigMode background,
                            const FourierShape& f);
DesignResult design_ellipse(double l, double xi_i, double xi_e, int n, TrigMode background,
                            const FourierShape& f);

DesignResult design_for(const CloakConfig& config, const FourierShape& f);

struct VerifyReport {
  double max_abs_M = 0.0;     // closed-form coefficients with the candidate g
  double generic_norm = 0.0;  // generic-route exterior sup norm on a sampling ring
  double baseline_norm = 0.0; // same with g = 0
  bool closed_form_pass = false;  // max_abs_M < 1e-8
  // disks: generic_norm < 1e-5 * baseline (full cancellation);
  // ellipses: generic_norm < baseline (only the leading part is cancelled)
  bool generic_pass = false;
  bool pass() const { return closed_form_pass && generic_pass; }
};

VerifyReport verify_design(const CloakConfig& config, const FourierShape& f, const FourierShape& g,
                           int nodes = 192);

}  // namespace hncloak
