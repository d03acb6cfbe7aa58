#include "hncloak/perturb.hpp"

#include <cmath>

namespace hncloak {

namespace {

double safe_cos(const FourierShape& s, int m) { return m >= 0 ? s.cos_coeff(m) : 0.0; }
double safe_sin(const FourierShape& s, int m) { return m >= 1 ? s.sin_coeff(m) : 0.0; }

int default_m_max(const FourierShape& f, const FourierShape& g, int n) {
  return std::max({f.max_mode(), g.max_mode(), 0}) + 2 * n + 8;
}

void check_perfect_zeta(const CloakConfig& config) {
  const double z = perfect_zeta(config);
  if (std::abs(config.zeta0 - z) > 1e-10 * std::max(1.0, std::abs(z)))
    throw ContractError("scattering coefficients assume the perfect-cloak zeta0");
}

void check_tail(const std::vector<ModeCoefficient>& modes) {
  double scale = 0.0;
  for (const ModeCoefficient& mc : modes)
    scale = std::max({scale, std::abs(mc.M1), std::abs(mc.M2)});
  if (scale == 0.0) return;
  const std::size_t tail = std::min<std::size_t>(4, modes.size());
  for (std::size_t k = modes.size() - tail; k < modes.size(); ++k)
    if (std::abs(modes[k].M1) > 1e-12 * scale || std::abs(modes[k].M2) > 1e-12 * scale)
      throw NumericError("scattering coefficients: truncation m_max too small for this shape");
}

// plain Fourier coefficients (c0 = mean) of a sampled periodic function
struct ModeSplit {
  std::vector<double> c, s;
};

ModeSplit project_modes(const std::vector<double>& samples, int m_max) {
  const int K = static_cast<int>(samples.size());
  ModeSplit ms;
  ms.c.assign(m_max + 1, 0.0);
  ms.s.assign(m_max + 1, 0.0);
  for (int m = 0; m <= m_max; ++m) {
    double cc = 0.0, ss = 0.0;
    for (int k = 0; k < K; ++k) {
      const double t = two_pi * k / K;
      cc += samples[k] * std::cos(m * t);
      ss += samples[k] * std::sin(m * t);
    }
    ms.c[m] = (m == 0 ? 1.0 : 2.0) * cc / K;
    ms.s[m] = 2.0 * ss / K;
  }
  // The inputs are trigonometric polynomials with exact finite support; drop
  // projection dust so empty modes stay exactly empty (downstream mode solves
  // scale them by exponentially large factors).
  double scale = 0.0;
  for (int m = 0; m <= m_max; ++m) scale = std::max({scale, std::abs(ms.c[m]), std::abs(ms.s[m])});
  for (int m = 0; m <= m_max; ++m) {
    if (std::abs(ms.c[m]) < 1e-13 * scale) ms.c[m] = 0.0;
    if (std::abs(ms.s[m]) < 1e-13 * scale) ms.s[m] = 0.0;
  }
  return ms;
}

}  // namespace

// ---------------------------------------------------------------- reports

double ScatteringReport::max_abs() const {
  double v = 0.0;
  for (const ModeCoefficient& mc : modes) v = std::max({v, std::abs(mc.M1), std::abs(mc.M2)});
  return v;
}

double ScatteringReport::eval_exterior(const CloakConfig& config, Vec2 x) const {
  double radial_base, ang;
  if (family == Family::disks) {
    radial_base = x.norm();
    ang = std::atan2(x.y, x.x);
  } else {
    const EllipticCoords ec = cartesian_to_elliptic(config.frame, x);
    radial_base = std::exp(ec.xi);
    ang = ec.eta;
  }
  double v = 0.0;
  for (const ModeCoefficient& mc : modes) {
    const double rm = std::pow(radial_base, -mc.m);
    const double cs = std::cos(mc.m * ang), sn = std::sin(mc.m * ang);
    const double align = (background == TrigMode::cos) ? cs : sn;
    const double anti = (background == TrigMode::cos) ? sn : cs;
    v += rm * (mc.M1 * align + mc.M2 * anti);
  }
  return v;
}

// ---------------------------------------------------------------- annulus closed forms

ScatteringReport scattering_coeffs_annulus(const CloakConfig& config, const FourierShape& f,
                                           const FourierShape& g, int m_max) {
  if (config.family != Family::disks)
    throw ParamError("scattering_coeffs_annulus: disks family required");
  config.validate();
  check_perfect_zeta(config);
  const int n = config.n;
  if (m_max <= 0) m_max = default_m_max(f, g, n);

  const double ri = config.r_i, re = config.r_e, z0 = config.zeta0;
  ScatteringReport rep;
  rep.family = Family::disks;
  rep.n = n;
  rep.background = config.background;
  rep.m_max = m_max;
  for (int m = n; m <= m_max; ++m) {
    const double F = std::pow(ri, 3 * m + n - 1) +
                     std::pow(re, 2 * (m - n)) *
                         (std::pow(ri, 3 * n + m - 1) +
                          2.0 * std::pow(ri, n + m - 1) * std::pow(re, 2 * n) / z0);
    const double G1 = std::pow(ri, 2 * (m + n)) + std::pow(re, 2 * (m + n));
    const double G2 = std::pow(ri, 2 * m) * std::pow(re, 2 * n) +
                      std::pow(ri, 2 * n) * std::pow(re, 2 * m);
    const double pre = 6.0 * n * z0 / std::pow(re, 2 * m);
    const double rw = std::pow(re, m - n - 1);
    ModeCoefficient mc;
    mc.m = m;
    if (config.background == TrigMode::cos) {
      mc.M1 = pre * (F * (safe_cos(f, m - n) - safe_cos(f, m + n)) -
                     rw * (G1 * safe_cos(g, m - n) - G2 * safe_cos(g, m + n)));
      mc.M2 = pre * (F * (safe_sin(f, m - n) - safe_sin(f, m + n)) -
                     rw * (G1 * safe_sin(g, m - n) - G2 * safe_sin(g, m + n)));
    } else {
      mc.M1 = pre * (F * (safe_cos(f, m - n) + safe_cos(f, m + n)) -
                     rw * (G1 * safe_cos(g, m - n) + G2 * safe_cos(g, m + n)));
      mc.M2 = -pre * (F * (safe_sin(f, m - n) + safe_sin(f, m + n)) -
                      rw * (G1 * safe_sin(g, m - n) + G2 * safe_sin(g, m + n)));
    }
    rep.modes.push_back(mc);
  }
  check_tail(rep.modes);
  return rep;
}

Phi1Annulus phi1_annulus(const CloakConfig& config, const FourierShape& f) {
  if (config.family != Family::disks) throw ParamError("phi1_annulus: disks family required");
  config.validate();
  const int n = config.n;
  const int m_top = std::max(f.max_mode(), 0) + n;
  Phi1Annulus out;
  out.n = n;
  out.background = config.background;
  out.c.assign(m_top + 1, 0.0);
  out.s.assign(m_top + 1, 0.0);
  for (int m = n; m <= m_top; ++m) {
    const double w = n * std::pow(config.r_i, m + n - 1);
    if (config.background == TrigMode::cos) {
      out.c[m] = w * (safe_cos(f, m - n) - safe_cos(f, m + n));
      out.s[m] = w * (safe_sin(f, m - n) - safe_sin(f, m + n));
    } else {
      out.s[m] = w * (safe_cos(f, m - n) + safe_cos(f, m + n));
      out.c[m] = -w * (safe_sin(f, m - n) + safe_sin(f, m + n));
    }
  }
  return out;
}

double Phi1Annulus::eval(Vec2 x) const {
  const double r = x.norm();
  const double th = std::atan2(x.y, x.x);
  double v = 0.0;
  for (std::size_t m = 1; m < c.size(); ++m)
    v += std::pow(r, -double(m)) * (c[m] * std::cos(m * th) + s[m] * std::sin(m * th));
  return v;
}

// ---------------------------------------------------------------- ellipse closed forms

namespace {

// Exact solve of one Fourier mode of the leading first-order system:
// shell al e^{m xi} + be e^{-m xi}, exterior de e^{-m xi}, with Neumann data
// Ahat at xi_i, value jump Bhat and derivative jump Chat at xi_e (all in the
// d/dxi normalization; the 1/gamma factors cancel against dnu = dxi/gamma).
double leading_mode_exterior(int m, double xi_i, double xi_e, double Ahat, double Bhat,
                             double Chat) {
  const double al = -(m * Bhat + Chat) / (2.0 * m * std::exp(m * xi_e));
  const double be = al * std::exp(2.0 * m * xi_i) - Ahat * std::exp(m * xi_i) / m;
  return std::exp(m * xi_e) * Bhat + al * std::exp(2.0 * m * xi_e) + be;
}

struct LeadingData {
  // plain Fourier data of the leading system in the d/dxi normalization
  ModeSplit A;  // d/dxi of p10 at xi_i  (equals gamma * Neumann data)
  ModeSplit B;  // value jump of p10 at xi_e
  ModeSplit C;  // d/dxi jump of p10 at xi_e
  ModeSplit E;  // d/dxi of phi10 at xi_i
  std::vector<double> E_samples, A_samples, B_samples, C_samples;  // on the K-grid
  int K = 0;
};

LeadingData ellipse_leading_data(const CloakConfig& config, const FourierShape& f,
                                 const FourierShape& g, int m_max) {
  const BackgroundProfiles bp = background_profiles(config);
  const int n = config.n;
  const double z0 = config.zeta0;
  const double ci0 = gamma_inverse_fourier(config.frame, config.xi_i, 0)[0];
  const double ce0 = gamma_inverse_fourier(config.frame, config.xi_e, 0)[0];
  const double Ks = bp.p_shell.A / bp.phi.A;  // shell pressure = Ks * phi
  const double Ri = bp.phi.val(bp.xi_i);
  const double Re = bp.phi.val(bp.xi_e);
  const double Rpe = bp.phi.d1(bp.xi_e);
  const bool cosbg = config.background == TrigMode::cos;

  const int K = 16 * (m_max + n) + 64;
  LeadingData ld;
  ld.K = K;
  ld.E_samples.resize(K);
  ld.A_samples.resize(K);
  ld.B_samples.resize(K);
  ld.C_samples.resize(K);

  auto tr = [&](double eta) { return cosbg ? std::cos(n * eta) : std::sin(n * eta); };
  auto trd = [&](double eta) {
    return cosbg ? -n * std::sin(n * eta) : n * std::cos(n * eta);
  };

  for (int k = 0; k < K; ++k) {
    const double eta = two_pi * k / K;
    const double br = f.deriv(eta) * Ri * trd(eta) - f.eval(eta) * n * n * Ri * tr(eta);
    ld.E_samples[k] = ci0 * br;
    ld.A_samples[k] = ci0 * Ks * br;
    ld.B_samples[k] = -12.0 * z0 * ce0 * g.eval(eta) * Rpe * tr(eta);
  }
  ld.E = project_modes(ld.E_samples, m_max);
  ld.A = project_modes(ld.A_samples, m_max);
  ld.B = project_modes(ld.B_samples, m_max);

  // C needs d/dxi of phi10 at xi_e; phi10 = sum kap_m e^{-m xi} trig(m eta)
  std::vector<double> kap_c(m_max + 1, 0.0), kap_s(m_max + 1, 0.0);
  for (int m = 1; m <= m_max; ++m) {
    kap_c[m] = -ld.E.c[m] * std::exp(m * config.xi_i) / m;
    kap_s[m] = -ld.E.s[m] * std::exp(m * config.xi_i) / m;
  }
  for (int k = 0; k < K; ++k) {
    const double eta = two_pi * k / K;
    double dphi1 = 0.0;
    for (int m = 1; m <= m_max; ++m)
      dphi1 += -m * std::exp(-m * config.xi_e) *
               (kap_c[m] * std::cos(m * eta) + kap_s[m] * std::sin(m * eta));
    ld.C_samples[k] =
        12.0 * z0 *
        (dphi1 + ce0 * (g.eval(eta) * n * n * Re * tr(eta) - g.deriv(eta) * Re * trd(eta)));
  }
  ld.C = project_modes(ld.C_samples, m_max);
  return ld;
}

}  // namespace

ScatteringReport scattering_coeffs_ellipse(const CloakConfig& config, const FourierShape& f,
                                           const FourierShape& g, int m_max) {
  if (config.family != Family::ellipses)
    throw ParamError("scattering_coeffs_ellipse: ellipses family required");
  config.validate();
  check_perfect_zeta(config);
  const int n = config.n;
  if (m_max <= 0) m_max = default_m_max(f, g, n);

  ScatteringReport rep;
  rep.family = Family::ellipses;
  rep.n = n;
  rep.background = config.background;
  rep.m_max = m_max;

  const double xii = config.xi_i, xie = config.xi_e;
  if (config.background == TrigMode::cos) {
    // displayed closed forms of the leading coefficients (cos background)
    const double z0 = config.zeta0;
    const double ci0 = gamma_inverse_fourier(config.frame, xii, 0)[0];
    const double ce0 = gamma_inverse_fourier(config.frame, xie, 0)[0];
    const double Se = std::sinh(n * xie) - std::exp(n * (xii - xie)) * std::sinh(n * xii);
    const double Te = std::cosh(n * xie) + std::exp(n * (xii - xie)) * std::sinh(n * xii);
    for (int m = n; m <= m_max; ++m) {
      const double tail = -std::exp(m * xii - n * xie) * (Se - std::exp(n * xie) / z0);
      const double F1 = std::exp(n * xii) * (std::exp(m * (2 * xii - 2 * xie)) * std::sinh(m * xii) +
                                             std::exp(m * (xii - xie)) * std::cosh(m * xie) + tail);
      const double F2 = std::exp(n * xii) * (std::exp(m * (2 * xii - 2 * xie)) * std::cosh(m * xii) +
                                             std::exp(m * (xii - xie)) * std::sinh(m * xie) + tail);
      ModeCoefficient mc;
      mc.m = m;
      mc.M1 = 6.0 * n * z0 *
              (F1 * ci0 * (safe_cos(f, m - n) - safe_cos(f, m + n)) -
               Te * (std::exp(m * (xii - xie)) * std::sinh(m * xii) + std::cosh(m * xie)) * ce0 *
                   (safe_cos(g, m - n) - safe_cos(g, m + n)) +
               Se * (std::exp(m * (xii - xie)) * std::cosh(m * xii) - std::cosh(m * xie)) * ce0 *
                   (safe_cos(g, m - n) + safe_cos(g, m + n)));
      mc.M2 = 6.0 * n * z0 *
              (F2 * ci0 * (safe_sin(f, m - n) - safe_sin(f, m + n)) -
               Te * (std::exp(m * (xii - xie)) * std::cosh(m * xii) + std::sinh(m * xie)) * ce0 *
                   (safe_sin(g, m - n) - safe_sin(g, m + n)) +
               Se * (std::exp(m * (xii - xie)) * std::sinh(m * xii) - std::sinh(m * xie)) * ce0 *
                   (safe_sin(g, m - n) + safe_sin(g, m + n)));
      rep.modes.push_back(mc);
    }
  } else {
    // sin background: exact mode solve of the same leading system
    const LeadingData ld = ellipse_leading_data(config, f, g, m_max);
    for (int m = n; m <= m_max; ++m) {
      ModeCoefficient mc;
      mc.m = m;
      const double d_sin =
          leading_mode_exterior(m, xii, xie, ld.A.s[m], ld.B.s[m], ld.C.s[m]);
      const double d_cos =
          leading_mode_exterior(m, xii, xie, ld.A.c[m], ld.B.c[m], ld.C.c[m]);
      mc.M1 = d_sin;  // aligns with the sin background
      mc.M2 = d_cos;
      rep.modes.push_back(mc);
    }
  }
  check_tail(rep.modes);
  return rep;
}

// ---------------------------------------------------------------- generic first order

BoundaryData boundary_data(const FieldSolution& background, const NystromSystem& sysD,
                           const NystromSystem& sysOm, const FourierShape& f,
                           const FourierShape& g) {
  const int Nd = sysD.size(), No = sysOm.size();
  const double z0 = background.zeta0();
  BoundaryData bd;

  std::vector<double> E(Nd), A(Nd);
  for (int j = 0; j < Nd; ++j) {
    const double t = sysD.nodes()[j];
    const InnerTraces tr = background.inner_traces(t);
    const double fv = f.eval(t);
    const double fp = f.deriv(t) / sysD.speeds()[j];  // tangential derivative
    E[j] = fp * tr.phi_T - fv * tr.phi_nunu;
    A[j] = fp * tr.p_T - fv * tr.p_nunu;
  }
  bd.E = sysD.make_density(std::move(E), true);
  bd.A = sysD.make_density(std::move(A), true);

  // the electrostatic part is solved first: C references dphi1/dnu_Omega
  bd.phi1_density = sysD.solve_second_kind(bd.E, 0.5, true);

  std::vector<double> B(No), C(No);
  for (int j = 0; j < No; ++j) {
    const double t = sysOm.nodes()[j];
    const OuterTraces tr = background.outer_traces(t);
    const double gv = g.eval(t);
    const double gp = g.deriv(t) / sysOm.speeds()[j];
    const double phi1_nu =
        sysD.grad_layer(LayerKind::single, bd.phi1_density, sysOm.points()[j])
            .value.dot(sysOm.normals()[j]);
    B[j] = gv * (tr.p_nu_minus - tr.p_nu_plus);
    C[j] = gv * (tr.p_nunu_minus - tr.p_nunu_plus) +
           12.0 * z0 * (phi1_nu + gv * tr.phi_nunu - gp * tr.phi_T);
  }
  bd.B = sysOm.make_density(std::move(B), false);
  bd.C = sysOm.make_density(std::move(C), true);
  return bd;
}

BoundaryData leading_boundary_data(const CloakConfig& config, const NystromSystem& sysD,
                                   const NystromSystem& sysOm, const FourierShape& f,
                                   const FourierShape& g) {
  if (config.family != Family::ellipses)
    throw ParamError("leading_boundary_data: ellipses family required");
  check_perfect_zeta(config);
  const int m_max = default_m_max(f, g, config.n);
  const LeadingData ld = ellipse_leading_data(config, f, g, m_max);

  auto sample = [&](const ModeSplit& ms, double eta) {
    double v = ms.c[0];
    for (std::size_t m = 1; m < ms.c.size(); ++m)
      v += ms.c[m] * std::cos(m * eta) + ms.s[m] * std::sin(m * eta);
    return v;
  };

  BoundaryData bd;
  const int Nd = sysD.size(), No = sysOm.size();
  std::vector<double> E(Nd), A(Nd), B(No), C(No);
  for (int j = 0; j < Nd; ++j) {
    const double eta = sysD.nodes()[j];
    const double gam = sysD.speeds()[j];  // gamma equals the parameterization speed
    E[j] = sample(ld.E, eta) / gam;
    A[j] = sample(ld.A, eta) / gam;
  }
  for (int j = 0; j < No; ++j) {
    const double eta = sysOm.nodes()[j];
    const double gam = sysOm.speeds()[j];
    B[j] = sample(ld.B, eta);
    C[j] = sample(ld.C, eta) / gam;
  }
  bd.E = sysD.make_density(std::move(E), true);
  bd.A = sysD.make_density(std::move(A), true);
  bd.B = sysOm.make_density(std::move(B), false);
  bd.C = sysOm.make_density(std::move(C), true);
  bd.phi1_density = sysD.solve_second_kind(bd.E, 0.5, true);
  return bd;
}

FirstOrderSolution::FirstOrderSolution(std::shared_ptr<const NystromSystem> sysD,
                                       std::shared_ptr<const NystromSystem> sysOm,
                                       BoundaryData data)
    : sysD_(std::move(sysD)), sysOm_(std::move(sysOm)), data_(std::move(data)) {
  const NystromSystem& D = *sysD_;
  const NystromSystem& Om = *sysOm_;

  psi2_ = data_.C;
  psi3_ = data_.B;
  for (double& v : psi3_.values) v = -v;
  psi3_.zero_mean_required = false;

  const int Nd = D.size();
  std::vector<double> rhs(Nd);
  for (int j = 0; j < Nd; ++j) {
    const Vec2 xj = D.points()[j];
    const Vec2 q = Om.grad_layer(LayerKind::single, psi2_, xj).value +
                   Om.grad_layer(LayerKind::double_, psi3_, xj).value;
    rhs[j] = -q.dot(D.normals()[j]) + data_.A.values[j];
  }
  double mean = 0.0, scale = 0.0;
  for (int j = 0; j < Nd; ++j) {
    mean += D.weights()[j] * rhs[j];
    scale = std::max(scale, std::abs(rhs[j]));
  }
  if (std::abs(mean) > 1e-8 * std::max(1.0, scale))
    throw NumericError("solve_first_order: rhs mean " + std::to_string(mean) +
                       " violates solvability");
  psi1_ = D.solve_second_kind(D.make_density(std::move(rhs), true), 0.5, true);
}

double FirstOrderSolution::phi1(Vec2 x) const {
  return sysD_->eval_layer(LayerKind::single, data_.phi1_density, x).value;
}

EvalResult FirstOrderSolution::p1_flagged(Vec2 x) const {
  const EvalResult a = sysD_->eval_layer(LayerKind::single, psi1_, x);
  const EvalResult b = sysOm_->eval_layer(LayerKind::single, psi2_, x);
  const EvalResult c = sysOm_->eval_layer(LayerKind::double_, psi3_, x);
  return {a.value + b.value + c.value, a.near_boundary || b.near_boundary || c.near_boundary};
}

FirstOrderSolution solve_first_order(std::shared_ptr<const NystromSystem> sysD,
                                     std::shared_ptr<const NystromSystem> sysOm,
                                     BoundaryData data) {
  return FirstOrderSolution(std::move(sysD), std::move(sysOm), std::move(data));
}

}  // namespace hncloak
