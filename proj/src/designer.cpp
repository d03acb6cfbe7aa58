#include "hncloak/designer.hpp"

#include <cmath>

namespace hncloak {

namespace {

double coeff_or_zero(const FourierShape& s, char series, int m) {
  return series == 'd' ? (m >= 0 ? s.cos_coeff(m) : 0.0) : (m >= 1 ? s.sin_coeff(m) : 0.0);
}

bool sin_content_on_2n_lattice(const FourierShape& f, int n) {
  for (int m = 2 * n; m <= f.max_mode(); m += 2 * n)
    if (std::abs(f.sin_coeff(m)) > 1e-14) return true;
  return false;
}

}  // namespace

DesignResult design_annulus(double r_i, double r_e, int n, TrigMode background,
                            const FourierShape& f) {
  if (!(r_i > 0.0) || !(r_e > r_i)) throw GeometryError("design_annulus: need 0 < r_i < r_e");
  if (n < 1) throw ParamError("design_annulus: n must be >= 1");
  DesignResult res;
  res.family = Family::disks;
  res.background = background;
  res.m_max = f.max_mode();
  res.mode_n_residual = sin_content_on_2n_lattice(f, n);
  if (res.m_max < 0) return res;  // f = 0 -> g = 0

  const double sgn = (background == TrigMode::cos) ? 1.0 : -1.0;  // coupling sign
  const double fsn = (background == TrigMode::cos) ? -1.0 : 1.0;  // a_m -+ a_{m+2n}
  const char* branch = (background == TrigMode::cos) ? "annulus-cos" : "annulus-sin";

  for (int m = res.m_max; m >= 0; --m) {
    const double fac = (std::pow(r_i, 2 * (m + n)) * std::pow(r_e, 2 * n) +
                        std::pow(r_i, 2 * n) * std::pow(r_e, 2 * (m + n))) /
                       (std::pow(r_i, 2 * (m + 2 * n)) + std::pow(r_e, 2 * (m + 2 * n)));
    // (r_i/r_e)^(m-1); at m = 0 this evaluates to r_e/r_i
    const double w = std::pow(r_i / r_e, m - 1);
    const double dm = sgn * fac * coeff_or_zero(res.g, 'd', m + 2 * n) +
                      w * (f.cos_coeff(m) + fsn * f.cos_coeff(m + 2 * n));
    res.g.set_cos(m, dm);
    res.trace.push_back({'d', m, dm, branch});
    if (m >= 1) {
      const double hm = sgn * fac * coeff_or_zero(res.g, 'h', m + 2 * n) +
                        w * (f.sin_coeff(m) + fsn * f.sin_coeff(m + 2 * n));
      res.g.set_sin(m, hm);
      res.trace.push_back({'h', m, hm, branch});
    }
  }
  return res;
}

DesignResult design_ellipse(double l, double xi_i, double xi_e, int n, TrigMode background,
                            const FourierShape& f) {
  if (!(l > 0.0)) throw GeometryError("design_ellipse: focal half-distance must be > 0");
  if (!(xi_i > 0.0) || !(xi_e > xi_i)) throw GeometryError("design_ellipse: need 0 < xi_i < xi_e");
  if (n < 1) throw ParamError("design_ellipse: n must be >= 1");
  DesignResult res;
  res.family = Family::ellipses;
  res.background = background;
  res.m_max = f.max_mode();
  res.mode_n_residual = sin_content_on_2n_lattice(f, n);
  if (res.m_max < 0) return res;

  const EllipticFrame frame(l);
  const double ci0 = gamma_inverse_fourier(frame, xi_i, 0)[0];
  const double ce0 = gamma_inverse_fourier(frame, xi_e, 0)[0];
  const bool cosbg = background == TrigMode::cos;
  const double sgn = cosbg ? 1.0 : -1.0;
  const double fsn = cosbg ? -1.0 : 1.0;
  const char* branch = cosbg ? "ellipse-cos-leading" : "ellipse-sin-leading";
  const auto E = [](double x) { return std::exp(x); };

  for (int m = res.m_max; m >= 0; --m) {
    const double den = E(2 * (m + 2 * n) * xi_i) + E(2 * (m + 2 * n) * xi_e);
    const double fac =
        (E(2 * (m + n) * xi_i + 2 * n * xi_e) + E(2 * (m + n) * xi_e + 2 * n * xi_i)) / den;
    const double w = E((m + 2 * n) * xi_i + m * xi_e) / den;
    // the cos background carries (e^{2n xi_e}+1)/(e^{2n xi_i}-1); sin swaps the signs
    const double ratio = cosbg ? (E(2 * n * xi_e) + 1.0) / (E(2 * n * xi_i) - 1.0)
                               : (E(2 * n * xi_e) - 1.0) / (E(2 * n * xi_i) + 1.0);
    const double big = (E(2 * n * xi_e) - E(2 * n * xi_i)) * ratio +
                       E(-2 * m * xi_e) * (E(2 * (m + n) * xi_i) + E(2 * (m + n) * xi_e));
    const double dm = sgn * fac * coeff_or_zero(res.g, 'd', m + 2 * n) +
                      w * big * (ci0 / ce0) * (f.cos_coeff(m) + fsn * f.cos_coeff(m + 2 * n));
    res.g.set_cos(m, dm);
    res.trace.push_back({'d', m, dm, branch});
    if (m >= 1) {
      const double hm = sgn * fac * coeff_or_zero(res.g, 'h', m + 2 * n) +
                        w * big * (ci0 / ce0) * (f.sin_coeff(m) + fsn * f.sin_coeff(m + 2 * n));
      res.g.set_sin(m, hm);
      res.trace.push_back({'h', m, hm, branch});
    }
  }
  return res;
}

DesignResult design_for(const CloakConfig& config, const FourierShape& f) {
  if (config.family == Family::disks)
    return design_annulus(config.r_i, config.r_e, config.n, config.background, f);
  return design_ellipse(config.frame.l, config.xi_i, config.xi_e, config.n, config.background, f);
}

VerifyReport verify_design(const CloakConfig& config, const FourierShape& f, const FourierShape& g,
                           int nodes) {
  CloakConfig cfg = with_perfect_zeta(config);
  VerifyReport rep;

  const ScatteringReport closed = (cfg.family == Family::disks)
                                      ? scattering_coeffs_annulus(cfg, f, g)
                                      : scattering_coeffs_ellipse(cfg, f, g);
  rep.max_abs_M = closed.max_abs();
  rep.closed_form_pass = rep.max_abs_M < 1e-8;

  auto sysD = std::make_shared<NystromSystem>(cfg.inner_curve(), nodes);
  auto sysOm = std::make_shared<NystromSystem>(cfg.outer_curve(), nodes);
  const auto bg = analytic_background(cfg);

  auto ring_norm = [&](const FourierShape& gg) {
    const FirstOrderSolution sol =
        solve_first_order(sysD, sysOm, boundary_data(*bg, *sysD, *sysOm, f, gg));
    double mx = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double t = two_pi * k / 64;
      Vec2 x;
      if (cfg.family == Family::disks) {
        const double r = 1.5 * cfg.r_e;
        x = {r * std::cos(t), r * std::sin(t)};
      } else {
        x = elliptic_to_cartesian(cfg.frame, cfg.xi_e + 0.5, t);
      }
      mx = std::max(mx, std::abs(sol.p1(x)));
    }
    return mx;
  };

  rep.generic_norm = ring_norm(g);
  rep.baseline_norm = ring_norm(FourierShape());
  if (cfg.family == Family::disks) {
    rep.generic_pass = rep.generic_norm <= 1e-5 * std::max(rep.baseline_norm, 1e-30) ||
                       rep.generic_norm < 1e-10;
  } else {
    rep.generic_pass = rep.generic_norm < rep.baseline_norm || rep.generic_norm < 1e-10;
  }
  return rep;
}

}  // namespace hncloak
