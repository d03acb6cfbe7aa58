#include "hncloak/forward.hpp"

#include <cmath>
#include <complex>

namespace hncloak {

// ---------------------------------------------------------------- config

CloakConfig CloakConfig::disks(double r_i, double r_e, int n, TrigMode bg, double zeta0) {
  CloakConfig c;
  c.family = Family::disks;
  c.r_i = r_i;
  c.r_e = r_e;
  c.n = n;
  c.background = bg;
  c.zeta0 = zeta0;
  c.validate();
  return c;
}

CloakConfig CloakConfig::ellipses(double l, double xi_i, double xi_e, int n, TrigMode bg,
                                  double zeta0) {
  CloakConfig c;
  c.family = Family::ellipses;
  c.frame = EllipticFrame(l);
  c.xi_i = xi_i;
  c.xi_e = xi_e;
  c.n = n;
  c.background = bg;
  c.zeta0 = zeta0;
  c.validate();
  return c;
}

void CloakConfig::validate() const {
  if (n < 1) throw ParamError("CloakConfig: background mode index n must be >= 1");
  if (family == Family::disks) {
    if (!(r_i > 0.0) || !(r_e > r_i)) throw GeometryError("CloakConfig: need 0 < r_i < r_e");
  } else {
    if (!(xi_i > 0.0) || !(xi_e > xi_i)) throw GeometryError("CloakConfig: need 0 < xi_i < xi_e");
  }
}

Curve CloakConfig::inner_curve() const {
  return family == Family::disks ? Curve::circle(r_i) : Curve::ellipse(frame, xi_i);
}

Curve CloakConfig::outer_curve() const {
  return family == Family::disks ? Curve::circle(r_e) : Curve::ellipse(frame, xi_e);
}

double perfect_zeta(const CloakConfig& config) {
  const int n = config.n;
  if (config.family == Family::disks) {
    if (config.r_i == config.r_e) throw DomainError("perfect_zeta: degenerate radii");
    const double a = std::pow(config.r_i, 2 * n), b = std::pow(config.r_e, 2 * n);
    return 2.0 * a * b / (b * b - a * a);
  }
  if (config.xi_i == config.xi_e) throw DomainError("perfect_zeta: degenerate elliptic radii");
  const double xii = config.xi_i, xie = config.xi_e;
  double zeta;
  if (config.background == TrigMode::cos) {
    zeta = std::sinh(n * xii) /
           ((std::sinh(n * xie) - std::exp(n * (xii - xie)) * std::sinh(n * xii)) *
            std::cosh(n * (xie - xii)));
  } else {
    zeta = std::cosh(n * xii) /
           ((std::cosh(n * xie) - std::exp(n * (xii - xie)) * std::cosh(n * xii)) *
            std::cosh(n * (xie - xii)));
  }
  // unified exponential form, "-" for the cos background and "+" for sin
  const double sgn = (config.background == TrigMode::cos) ? -1.0 : 1.0;
  const double uni = 2.0 * std::exp(2 * n * xii) * std::exp(2 * n * xie) /
                     (std::exp(4 * n * xie) - std::exp(4 * n * xii)) *
                     (1.0 + sgn * std::exp(-2 * n * xii));
  if (std::abs(uni - zeta) > 1e-12 * std::abs(zeta))
    throw NumericError("perfect_zeta: variant formulas disagree");
  return zeta;
}

CloakConfig with_perfect_zeta(CloakConfig config) {
  config.zeta0 = perfect_zeta(config);
  return config;
}

// ---------------------------------------------------------------- background

BackgroundField::BackgroundField(Family family, int n, TrigMode bg, EllipticFrame frame)
    : family_(family), n_(n), bg_(bg), frame_(frame) {
  if (n < 1) throw ParamError("BackgroundField: n must be >= 1");
}

namespace {

using cplx = std::complex<double>;

// H is the real or imaginary part of a holomorphic F; gradients come from F'.
struct HoloEval {
  cplx F, dF;
};

HoloEval background_holo(Family fam, int n, const EllipticFrame& frame, Vec2 x) {
  HoloEval h;
  const cplx z(x.x, x.y);
  if (fam == Family::disks) {
    h.F = std::pow(z, n);
    h.dF = double(n) * std::pow(z, n - 1);
  } else {
    const cplx zeta = std::acosh(z / frame.l);
    h.F = std::cosh(double(n) * zeta);
    h.dF = double(n) * std::sinh(double(n) * zeta) / (frame.l * std::sinh(zeta));
  }
  return h;
}

}  // namespace

double BackgroundField::H(Vec2 x) const {
  const HoloEval h = background_holo(family_, n_, frame_, x);
  return (bg_ == TrigMode::cos) ? h.F.real() : h.F.imag();
}

Vec2 BackgroundField::grad_H(Vec2 x) const {
  const HoloEval h = background_holo(family_, n_, frame_, x);
  if (bg_ == TrigMode::cos) return {h.dF.real(), -h.dF.imag()};
  return {h.dF.imag(), h.dF.real()};
}

// ---------------------------------------------------------------- series solution

namespace {

double grow_val(int grow, int n, double xi) {
  switch (grow) {
    case 1: return std::cosh(n * xi);
    case 2: return std::sinh(n * xi);
    default: return std::exp(n * xi);
  }
}

double grow_d1(int grow, int n, double xi) {
  switch (grow) {
    case 1: return n * std::sinh(n * xi);
    case 2: return n * std::cosh(n * xi);
    default: return n * std::exp(n * xi);
  }
}

struct ConformalPoint {
  double xi = 0.0, eta = 0.0, gamma = 1.0;
  Vec2 e_xi, e_eta;
};

// boundary metric data of the coordinate curve xi = xi_a
struct BoundaryGeom {
  double gamma = 1.0, gamma_eta = 0.0, tau = 0.0;
};

}  // namespace

double RadialProfile::val(double xi) const {
  return A * grow_val(grow, n, xi) + B * std::exp(-n * xi);
}

double RadialProfile::d1(double xi) const {
  return A * grow_d1(grow, n, xi) - n * B * std::exp(-n * xi);
}

BackgroundProfiles background_profiles(const CloakConfig& config) {
  config.validate();
  BackgroundProfiles bp;
  const int n = config.n;
  const int grow =
      (config.family == Family::disks) ? 0 : (config.background == TrigMode::cos ? 1 : 2);
  bp.xi_i = (config.family == Family::disks) ? std::log(config.r_i) : config.xi_i;
  bp.xi_e = (config.family == Family::disks) ? std::log(config.r_e) : config.xi_e;

  bp.phi = {1.0, 0.0, n, grow};
  bp.phi.B = grow_d1(grow, n, bp.xi_i) * std::exp(n * bp.xi_i) / n;  // insulation on the core

  // The shell pressure is proportional to the phi profile (it satisfies the
  // same core Neumann condition). Its factor Ks and the exterior decaying
  // coefficient D follow from the outer transmission conditions:
  //   Ks*Rphi(xe)                              = 12*grow(xe) + D e^{-n xe}
  //   (12*grow + D e^{-n.})'(xe) - Ks*Rphi'(xe) = 12 zeta0 Rphi'(xe)
  const double a11 = bp.phi.val(bp.xi_e), a12 = -std::exp(-n * bp.xi_e);
  const double b1 = 12.0 * grow_val(grow, n, bp.xi_e);
  const double a21 = -bp.phi.d1(bp.xi_e), a22 = -n * std::exp(-n * bp.xi_e);
  const double b2 = 12.0 * config.zeta0 * bp.phi.d1(bp.xi_e) - 12.0 * grow_d1(grow, n, bp.xi_e);
  const double det = a11 * a22 - a12 * a21;
  const double Ks = (b1 * a22 - a12 * b2) / det;
  bp.p_shell = {Ks * bp.phi.A, Ks * bp.phi.B, n, grow};
  bp.p_ext = {12.0, (a11 * b2 - b1 * a21) / det, n, grow};
  return bp;
}

class SeriesSolution final : public FieldSolution {
 public:
  explicit SeriesSolution(const CloakConfig& config)
      : cfg_(config), inner_(config.inner_curve()), outer_(config.outer_curve()) {
    cfg_.validate();
    bg_ = std::make_shared<BackgroundField>(cfg_.family, cfg_.n, cfg_.background, cfg_.frame);
    zeta0_ = cfg_.zeta0;
    const BackgroundProfiles bp = background_profiles(cfg_);
    xi_i_ = bp.xi_i;
    xi_e_ = bp.xi_e;
    phi_ = bp.phi;
    p_shell_ = bp.p_shell;
    p_ext_ = bp.p_ext;
  }

  double phi(Vec2 x) const override {
    const ConformalPoint c = conf(x);
    require_outside_core(c);
    return phi_.val(c.xi) * trig(c.eta);
  }

  Vec2 grad_phi(Vec2 x) const override { return grad_profile(phi_, x); }

  double pressure(Vec2 x) const override {
    const ConformalPoint c = conf(x);
    require_outside_core(c);
    const RadialProfile& pr = (c.xi <= xi_e_) ? p_shell_ : p_ext_;
    return pr.val(c.xi) * trig(c.eta);
  }

  Vec2 grad_pressure(Vec2 x) const override {
    const ConformalPoint c = conf(x);
    require_outside_core(c);
    return grad_profile((c.xi <= xi_e_) ? p_shell_ : p_ext_, x);
  }

  Region region(Vec2 x) const override {
    const ConformalPoint c = conf(x);
    if (c.xi < xi_i_) return Region::core;
    return (c.xi <= xi_e_) ? Region::shell : Region::exterior;
  }

  InnerTraces inner_traces(double t) const override {
    InnerTraces tr;
    const BoundaryGeom b = boundary_geom(xi_i_, t);
    tr.phi_T = bound_T(phi_, xi_i_, b, t);
    tr.phi_nunu = bound_nunu(phi_, xi_i_, b, t);
    tr.p_T = bound_T(p_shell_, xi_i_, b, t);
    tr.p_nunu = bound_nunu(p_shell_, xi_i_, b, t);
    return tr;
  }

  OuterTraces outer_traces(double t) const override {
    OuterTraces tr;
    const BoundaryGeom b = boundary_geom(xi_e_, t);
    tr.phi_nu = bound_nu(phi_, xi_e_, b, t);
    tr.phi_T = bound_T(phi_, xi_e_, b, t);
    tr.phi_nunu = bound_nunu(phi_, xi_e_, b, t);
    tr.p_nu_minus = bound_nu(p_shell_, xi_e_, b, t);
    tr.p_nu_plus = bound_nu(p_ext_, xi_e_, b, t);
    tr.p_nunu_minus = bound_nunu(p_shell_, xi_e_, b, t);
    tr.p_nunu_plus = bound_nunu(p_ext_, xi_e_, b, t);
    return tr;
  }

  const PerturbedCurve& inner_curve() const override { return inner_; }
  const PerturbedCurve& outer_curve() const override { return outer_; }
  std::string provenance() const override { return "series"; }

 private:
  double trig(double eta) const {
    return (cfg_.background == TrigMode::cos) ? std::cos(cfg_.n * eta) : std::sin(cfg_.n * eta);
  }
  double trig_d(double eta) const {
    const int n = cfg_.n;
    return (cfg_.background == TrigMode::cos) ? -n * std::sin(n * eta) : n * std::cos(n * eta);
  }

  ConformalPoint conf(Vec2 x) const {
    ConformalPoint c;
    if (cfg_.family == Family::disks) {
      const double r = x.norm();
      if (r == 0.0) throw DomainError("SeriesSolution: evaluation at the origin (inside D)");
      c.xi = std::log(r);
      c.eta = std::atan2(x.y, x.x);
      c.gamma = r;
      c.e_xi = x / r;
      c.e_eta = {-c.e_xi.y, c.e_xi.x};
    } else {
      const EllipticCoords ec = cartesian_to_elliptic(cfg_.frame, x);
      c.xi = ec.xi;
      c.eta = ec.eta;
      const double l = cfg_.frame.l;
      const double sh = std::sinh(ec.xi), sn = std::sin(ec.eta);
      c.gamma = l * std::sqrt(sh * sh + sn * sn);
      c.e_xi = Vec2{l * sh * std::cos(ec.eta), l * std::cosh(ec.xi) * sn} / c.gamma;
      c.e_eta = Vec2{-l * std::cosh(ec.xi) * sn, l * sh * std::cos(ec.eta)} / c.gamma;
    }
    return c;
  }

  void require_outside_core(const ConformalPoint& c) const {
    if (c.xi < xi_i_ - 1e-13) throw DomainError("SeriesSolution: evaluation inside the core D");
  }

  Vec2 grad_profile(const RadialProfile& pr, Vec2 x) const {
    const ConformalPoint c = conf(x);
    require_outside_core(c);
    return (pr.d1(c.xi) * trig(c.eta) * c.e_xi + pr.val(c.xi) * trig_d(c.eta) * c.e_eta) / c.gamma;
  }

  BoundaryGeom boundary_geom(double xi_a, double eta) const {
    if (cfg_.family == Family::disks) {
      const double r = std::exp(xi_a);
      return {r, 0.0, 1.0 / r};
    }
    const double l = cfg_.frame.l;
    const double g = metric_gamma(cfg_.frame, xi_a, eta);
    return {g, l * l * std::sin(eta) * std::cos(eta) / g,
            l * l * std::sinh(xi_a) * std::cosh(xi_a) / (g * g * g)};
  }

  double bound_nu(const RadialProfile& pr, double xi_a, const BoundaryGeom& b, double t) const {
    return pr.d1(xi_a) * trig(t) / b.gamma;
  }
  double bound_T(const RadialProfile& pr, double xi_a, const BoundaryGeom& b, double t) const {
    return pr.val(xi_a) * trig_d(t) / b.gamma;
  }
  // nu^T Hess(u) nu = -d^2u/ds^2 - tau du/dnu on the boundary (u harmonic)
  double bound_nunu(const RadialProfile& pr, double xi_a, const BoundaryGeom& b, double t) const {
    const int n = cfg_.n;
    const double g = b.gamma;
    return n * n * pr.val(xi_a) * trig(t) / (g * g) +
           b.gamma_eta * pr.val(xi_a) * trig_d(t) / (g * g * g) -
           b.tau * pr.d1(xi_a) * trig(t) / g;
  }

  CloakConfig cfg_;
  PerturbedCurve inner_, outer_;
  double xi_i_ = 0.0, xi_e_ = 0.0;
  RadialProfile phi_, p_shell_, p_ext_;
};

std::shared_ptr<FieldSolution> analytic_background(const CloakConfig& config) {
  return std::make_shared<SeriesSolution>(config);
}

// ---------------------------------------------------------------- nystrom solution

namespace {

// trigonometric interpolation kernel for even-N equispaced periodic data
double trig_interp_kernel(double u, int N) {
  const double t = std::tan(0.5 * u);
  if (std::abs(t) < 1e-300) return 1.0;
  return std::sin(0.5 * N * u) / (N * t);
}

}  // namespace

NystromSolution::NystromSolution(std::shared_ptr<const NystromSystem> sysD,
                                 std::shared_ptr<const NystromSystem> sysOm,
                                 const CloakConfig& config)
    : sysD_(std::move(sysD)), sysOm_(std::move(sysOm)) {
  config.validate();
  bg_ = std::make_shared<BackgroundField>(config.family, config.n, config.background, config.frame);
  zeta0_ = config.zeta0;
  const NystromSystem& D = *sysD_;
  const NystromSystem& Om = *sysOm_;
  const int Nd = D.size(), No = Om.size();

  // electrostatic density: (1/2 I + K*_D)[phi] = -dH/dnu on D
  std::vector<double> rhs(Nd);
  for (int j = 0; j < Nd; ++j) rhs[j] = -bg_->grad_H(D.points()[j]).dot(D.normals()[j]);
  phi_dens_ = D.solve_second_kind(D.make_density(std::move(rhs), true), 0.5, true);

  // slip source on Omega: psi_e = 12 zeta0 dphi/dnu_Omega (phi is smooth there)
  std::vector<double> pe(No);
  for (int j = 0; j < No; ++j) {
    const Vec2 gphi = bg_->grad_H(Om.points()[j]) +
                      D.grad_layer(LayerKind::single, phi_dens_, Om.points()[j]).value;
    pe[j] = 12.0 * zeta0_ * gphi.dot(Om.normals()[j]);
  }
  psi_e_ = Om.make_density(std::move(pe), true);

  // pressure density on D: (1/2 I + K*_D)[psi_i] = -dP/dnu - dS_Om[psi_e]/dnu
  std::vector<double> rp(Nd);
  for (int j = 0; j < Nd; ++j) {
    const Vec2 q = bg_->grad_P(D.points()[j]) +
                   Om.grad_layer(LayerKind::single, psi_e_, D.points()[j]).value;
    rp[j] = -q.dot(D.normals()[j]);
  }
  psi_i_ = D.solve_second_kind(D.make_density(std::move(rp), true), 0.5, true);

  // cached boundary traces -------------------------------------------------
  std::vector<double> phiD(Nd), pD(Nd), phiDnu(Nd), pDnu(Nd);
  {
    const std::vector<double> sphi = D.single_layer_on_curve(phi_dens_);
    const std::vector<double> spsi = D.single_layer_on_curve(psi_i_);
    const std::vector<double> dnphi = D.single_layer_dn(phi_dens_, +1.0);
    const std::vector<double> dnpsi = D.single_layer_dn(psi_i_, +1.0);
    for (int j = 0; j < Nd; ++j) {
      const Vec2 xj = D.points()[j];
      phiD[j] = bg_->H(xj) + sphi[j];
      pD[j] = bg_->P(xj) + spsi[j] + Om.eval_layer(LayerKind::single, psi_e_, xj).value;
      phiDnu[j] = bg_->grad_H(xj).dot(D.normals()[j]) + dnphi[j];
      pDnu[j] = bg_->grad_P(xj).dot(D.normals()[j]) + dnpsi[j] +
                Om.grad_layer(LayerKind::single, psi_e_, xj).value.dot(D.normals()[j]);
    }
  }
  phiD_T_ = D.arclength_deriv(phiD);
  pD_T_ = D.arclength_deriv(pD);
  // nu^T Hess(u) nu = -d^2u/ds^2 - tau du/dnu for harmonic u
  phiD_nunu_ = D.arclength_deriv(phiD_T_);
  pD_nunu_ = D.arclength_deriv(pD_T_);
  for (int j = 0; j < Nd; ++j) {
    phiD_nunu_[j] = -phiD_nunu_[j] - D.curvatures()[j] * phiDnu[j];
    pD_nunu_[j] = -pD_nunu_[j] - D.curvatures()[j] * pDnu[j];
  }

  std::vector<double> phiOm(No), pOm(No);
  phiOm_nu_.resize(No);
  pOm_nu_m_.resize(No);
  pOm_nu_p_.resize(No);
  {
    const std::vector<double> spe = Om.single_layer_on_curve(psi_e_);
    const std::vector<double> dnm = Om.single_layer_dn(psi_e_, -1.0);
    const std::vector<double> dnp = Om.single_layer_dn(psi_e_, +1.0);
    for (int j = 0; j < No; ++j) {
      const Vec2 xj = Om.points()[j];
      phiOm[j] = bg_->H(xj) + D.eval_layer(LayerKind::single, phi_dens_, xj).value;
      phiOm_nu_[j] = (bg_->grad_H(xj) + D.grad_layer(LayerKind::single, phi_dens_, xj).value)
                         .dot(Om.normals()[j]);
      const double base = (bg_->grad_P(xj) + D.grad_layer(LayerKind::single, psi_i_, xj).value)
                              .dot(Om.normals()[j]);
      pOm[j] = bg_->P(xj) + D.eval_layer(LayerKind::single, psi_i_, xj).value + spe[j];
      pOm_nu_m_[j] = base + dnm[j];
      pOm_nu_p_[j] = base + dnp[j];
    }
  }
  phiOm_T_ = Om.arclength_deriv(phiOm);
  const std::vector<double> pOmT = Om.arclength_deriv(pOm);
  phiOm_nunu_ = Om.arclength_deriv(phiOm_T_);
  std::vector<double> d2s = Om.arclength_deriv(pOmT);
  pOm_nunu_m_.resize(No);
  pOm_nunu_p_.resize(No);
  for (int j = 0; j < No; ++j) {
    phiOm_nunu_[j] = -phiOm_nunu_[j] - Om.curvatures()[j] * phiOm_nu_[j];
    pOm_nunu_m_[j] = -d2s[j] - Om.curvatures()[j] * pOm_nu_m_[j];
    pOm_nunu_p_[j] = -d2s[j] - Om.curvatures()[j] * pOm_nu_p_[j];
  }
}

double NystromSolution::phi(Vec2 x) const {
  if (region(x) == Region::core) throw DomainError("NystromSolution: evaluation inside the core D");
  return bg_->H(x) + sysD_->eval_layer(LayerKind::single, phi_dens_, x).value;
}

Vec2 NystromSolution::grad_phi(Vec2 x) const {
  if (region(x) == Region::core) throw DomainError("NystromSolution: evaluation inside the core D");
  return bg_->grad_H(x) + sysD_->grad_layer(LayerKind::single, phi_dens_, x).value;
}

double NystromSolution::pressure(Vec2 x) const { return pressure_flagged(x).value; }

EvalResult NystromSolution::pressure_flagged(Vec2 x) const {
  if (region(x) == Region::core) throw DomainError("NystromSolution: evaluation inside the core D");
  const EvalResult a = sysD_->eval_layer(LayerKind::single, psi_i_, x);
  const EvalResult b = sysOm_->eval_layer(LayerKind::single, psi_e_, x);
  return {bg_->P(x) + a.value + b.value, a.near_boundary || b.near_boundary};
}

Vec2 NystromSolution::grad_pressure(Vec2 x) const {
  if (region(x) == Region::core) throw DomainError("NystromSolution: evaluation inside the core D");
  return bg_->grad_P(x) + sysD_->grad_layer(LayerKind::single, psi_i_, x).value +
         sysOm_->grad_layer(LayerKind::single, psi_e_, x).value;
}

FieldSolution::Region NystromSolution::region(Vec2 x) const {
  if (sysD_->curve().contains(x)) return Region::core;
  return sysOm_->curve().contains(x) ? Region::shell : Region::exterior;
}

double NystromSolution::boundary_interp(const std::vector<double>& nodal, double t_query,
                                         const NystromSystem& sys) const {
  const int N = sys.size();
  const double h = two_pi / N;
  const double k = t_query / h;
  const int j0 = static_cast<int>(std::llround(k));
  if (std::abs(k - j0) < 1e-12) return nodal[((j0 % N) + N) % N];
  double v = 0.0;
  for (int j = 0; j < N; ++j) v += nodal[j] * trig_interp_kernel(t_query - sys.nodes()[j], N);
  return v;
}

InnerTraces NystromSolution::inner_traces(double t) const {
  InnerTraces tr;
  tr.phi_T = boundary_interp(phiD_T_, t, *sysD_);
  tr.phi_nunu = boundary_interp(phiD_nunu_, t, *sysD_);
  tr.p_T = boundary_interp(pD_T_, t, *sysD_);
  tr.p_nunu = boundary_interp(pD_nunu_, t, *sysD_);
  return tr;
}

OuterTraces NystromSolution::outer_traces(double t) const {
  OuterTraces tr;
  tr.phi_nu = boundary_interp(phiOm_nu_, t, *sysOm_);
  tr.phi_T = boundary_interp(phiOm_T_, t, *sysOm_);
  tr.phi_nunu = boundary_interp(phiOm_nunu_, t, *sysOm_);
  tr.p_nu_minus = boundary_interp(pOm_nu_m_, t, *sysOm_);
  tr.p_nu_plus = boundary_interp(pOm_nu_p_, t, *sysOm_);
  tr.p_nunu_minus = boundary_interp(pOm_nunu_m_, t, *sysOm_);
  tr.p_nunu_plus = boundary_interp(pOm_nunu_p_, t, *sysOm_);
  return tr;
}

const NystromSolution* as_nystrom(const FieldSolution& sol) {
  return dynamic_cast<const NystromSolution*>(&sol);
}

std::shared_ptr<FieldSolution> solve_background_nystrom(const PerturbedCurve& inner,
                                                        const PerturbedCurve& outer,
                                                        const CloakConfig& config, int N) {
  for (int j = 0; j < 64; ++j) {
    const Vec2 p = inner.point(two_pi * j / 64);
    if (!outer.contains(p) || outer.distance(p) < 1e-9)
      throw GeometryError("solve_background_nystrom: inner curve not strictly inside outer curve");
  }
  auto sysD = std::make_shared<NystromSystem>(inner, N);
  auto sysOm = std::make_shared<NystromSystem>(outer, N);
  return std::make_shared<NystromSolution>(sysD, sysOm, config);
}

}  // namespace hncloak
