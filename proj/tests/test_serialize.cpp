#include <cmath>

#include "doctest.h"
#include "hncloak/serialize.hpp"
#include "hncloak/shape_spec.hpp"

using namespace hncloak;

TEST_SUITE_BEGIN("serialize");

TEST_CASE("shape spec mini-language") {
  CHECK(parse_shape_spec("0").is_zero());
  CHECK(parse_shape_spec("").is_zero());

  const FourierShape a = parse_shape_spec("-cos4");
  CHECK(a.cos_coeff(4) == doctest::Approx(-1.0));
  CHECK(a.max_mode() == 4);

  const FourierShape b = parse_shape_spec("c0:-1");
  CHECK(b.cos_coeff(0) == doctest::Approx(-1.0));
  CHECK(b.eval(1.234) == doctest::Approx(-0.5));

  const FourierShape c = parse_shape_spec("cos1:0.5, sin3:-.2, -sin5");
  CHECK(c.cos_coeff(1) == doctest::Approx(0.5));
  CHECK(c.sin_coeff(3) == doctest::Approx(-0.2));
  CHECK(c.sin_coeff(5) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(parse_shape_spec("frob3"), ParamError);
  CHECK_THROWS_AS(parse_shape_spec("cos:1"), ParamError);
  CHECK_THROWS_AS(parse_shape_spec("cos2:abc"), ParamError);
  CHECK_THROWS_AS(parse_shape_spec("sin0:1"), ParamError);

  // round trip through the formatter
  const FourierShape d = parse_shape_spec(format_shape(c));
  for (int m = 0; m <= 5; ++m) {
    CHECK(d.cos_coeff(m) == doctest::Approx(c.cos_coeff(m)));
    if (m >= 1) CHECK(d.sin_coeff(m) == doctest::Approx(c.sin_coeff(m)));
  }
}

TEST_CASE("shape json round trip") {
  FourierShape s;
  s.set_cos(0, 0.25);
  s.set_cos(4, -1.0);
  s.set_sin(2, 0.7);
  const FourierShape back = shape_from_json(to_json(s));
  for (int m = 0; m <= 5; ++m) {
    CHECK(back.cos_coeff(m) == s.cos_coeff(m));
    if (m >= 1) CHECK(back.sin_coeff(m) == s.sin_coeff(m));
  }
}

TEST_CASE("curve json round trip") {
  const PerturbedCurve circle(Curve::circle(2.0), parse_shape_spec("-cos4"), 0.1);
  const PerturbedCurve c2 = curve_from_json(to_json(circle));
  CHECK(c2.base().kind() == Curve::Kind::circle);
  CHECK(c2.epsilon() == 0.1);
  for (int k = 0; k < 16; ++k) {
    const double t = two_pi * k / 16;
    CHECK((c2.point(t) - circle.point(t)).norm() < 1e-15);
  }

  const PerturbedCurve ell(Curve::ellipse(EllipticFrame(1.5), 0.7), FourierShape(), 0.0);
  const PerturbedCurve e2 = curve_from_json(to_json(ell));
  CHECK(e2.base().kind() == Curve::Kind::ellipse);
  CHECK(e2.base().frame().l == 1.5);
  CHECK(e2.base().xi_a() == 0.7);

  FourierShape xs, ys;
  xs.set_cos(1, 2.0);
  ys.set_sin(1, 1.5);
  const PerturbedCurve gen(Curve::generic(xs, ys), FourierShape(), 0.0);
  const PerturbedCurve g2 = curve_from_json(to_json(gen));
  for (int k = 0; k < 8; ++k) {
    const double t = two_pi * k / 8;
    CHECK((g2.point(t) - gen.point(t)).norm() < 1e-15);
  }

  json bad = to_json(circle);
  bad["kind"] = "square";
  CHECK_THROWS_AS(curve_from_json(bad), ParamError);
}

TEST_CASE("config json round trip") {
  const CloakConfig a = with_perfect_zeta(CloakConfig::disks(1.0, 2.0, 2, TrigMode::sin));
  const CloakConfig a2 = config_from_json(to_json(a));
  CHECK(a2.family == Family::disks);
  CHECK(a2.n == 2);
  CHECK(a2.background == TrigMode::sin);
  CHECK(a2.zeta0 == a.zeta0);

  const CloakConfig b = CloakConfig::ellipses(1.0, 0.5, 1.0, 1, TrigMode::cos, 0.3);
  const CloakConfig b2 = config_from_json(to_json(b));
  CHECK(b2.family == Family::ellipses);
  CHECK(b2.xi_i == 0.5);
  CHECK(b2.zeta0 == 0.3);
}

TEST_CASE("report serialization carries the schema tag") {
  const CloakConfig cfg = with_perfect_zeta(CloakConfig::disks(1.0, 2.0, 1, TrigMode::cos));
  const ScatteringReport rep =
      scattering_coeffs_annulus(cfg, parse_shape_spec("-cos4"), FourierShape());
  const json j = to_json(rep);
  CHECK(j.at("schema").get<int>() == schema_version);
  CHECK(j.at("family").get<std::string>() == "disks");
  CHECK(j.at("modes").size() == rep.modes.size());
  CHECK(j.at("max_abs_M").get<double>() == doctest::Approx(rep.max_abs()));

  const DesignResult des = design_for(cfg, parse_shape_spec("-cos4"));
  const json jd = to_json(des);
  CHECK(jd.at("schema").get<int>() == schema_version);
  CHECK(shape_from_json(jd.at("g")).cos_coeff(4) == doctest::Approx(-0.125));
  CHECK(jd.at("trace").size() == des.trace.size());
}

TEST_SUITE_END();
