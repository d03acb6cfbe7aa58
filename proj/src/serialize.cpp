#include "hncloak/serialize.hpp"

namespace hncloak {

namespace {

std::string family_name(Family f) { return f == Family::disks ? "disks" : "ellipses"; }
std::string bg_name(TrigMode m) { return m == TrigMode::cos ? "cos" : "sin"; }

Family family_of(const std::string& s) {
  if (s == "disks") return Family::disks;
  if (s == "ellipses") return Family::ellipses;
  throw ParamError("unknown family '" + s + "'");
}

TrigMode bg_of(const std::string& s) {
  if (s == "cos") return TrigMode::cos;
  if (s == "sin") return TrigMode::sin;
  throw ParamError("unknown background '" + s + "'");
}

}  // namespace

json to_json(const FourierShape& shape) {
  std::vector<double> sin_tail;
  const auto& sv = shape.sin_coeffs();
  for (std::size_t m = 1; m < sv.size(); ++m) sin_tail.push_back(sv[m]);
  return json{{"cos", shape.cos_coeffs()}, {"sin", sin_tail}};
}

FourierShape shape_from_json(const json& j) {
  std::vector<double> c = j.value("cos", std::vector<double>{});
  std::vector<double> s1 = j.value("sin", std::vector<double>{});
  std::vector<double> s(s1.size() + 1, 0.0);
  for (std::size_t m = 0; m < s1.size(); ++m) s[m + 1] = s1[m];
  return FourierShape(std::move(c), std::move(s));
}

json to_json(const PerturbedCurve& pc) {
  json j;
  const Curve& c = pc.base();
  switch (c.kind()) {
    case Curve::Kind::circle:
      j["kind"] = "circle";
      j["radius"] = c.radius();
      break;
    case Curve::Kind::ellipse:
      j["kind"] = "ellipse";
      j["l"] = c.frame().l;
      j["xi"] = c.xi_a();
      break;
    case Curve::Kind::generic:
      j["kind"] = "generic";
      j["x"] = to_json(c.x_series());
      j["y"] = to_json(c.y_series());
      break;
  }
  j["shape"] = to_json(pc.shape());
  j["epsilon"] = pc.epsilon();
  return j;
}

PerturbedCurve curve_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  Curve base = Curve::circle(1.0);
  if (kind == "circle") {
    base = Curve::circle(j.at("radius").get<double>());
  } else if (kind == "ellipse") {
    base = Curve::ellipse(EllipticFrame(j.at("l").get<double>()), j.at("xi").get<double>());
  } else if (kind == "generic") {
    base = Curve::generic(shape_from_json(j.at("x")), shape_from_json(j.at("y")));
  } else {
    throw ParamError("unknown curve kind '" + kind + "'");
  }
  FourierShape shape = j.contains("shape") ? shape_from_json(j.at("shape")) : FourierShape();
  const double eps = j.value("epsilon", 0.0);
  return PerturbedCurve(std::move(base), std::move(shape), eps);
}

json to_json(const CloakConfig& config) {
  json j{{"family", family_name(config.family)},
         {"n", config.n},
         {"background", bg_name(config.background)},
         {"zeta0", config.zeta0}};
  if (config.family == Family::disks) {
    j["r_i"] = config.r_i;
    j["r_e"] = config.r_e;
  } else {
    j["l"] = config.frame.l;
    j["xi_i"] = config.xi_i;
    j["xi_e"] = config.xi_e;
  }
  return j;
}

CloakConfig config_from_json(const json& j) {
  const Family fam = family_of(j.at("family").get<std::string>());
  const TrigMode bg = bg_of(j.at("background").get<std::string>());
  const int n = j.at("n").get<int>();
  const double zeta0 = j.value("zeta0", 0.0);
  if (fam == Family::disks)
    return CloakConfig::disks(j.at("r_i").get<double>(), j.at("r_e").get<double>(), n, bg, zeta0);
  return CloakConfig::ellipses(j.at("l").get<double>(), j.at("xi_i").get<double>(),
                               j.at("xi_e").get<double>(), n, bg, zeta0);
}

json to_json(const ScatteringReport& report) {
  json modes = json::array();
  for (const ModeCoefficient& mc : report.modes)
    modes.push_back(json{{"m", mc.m}, {"M1", mc.M1}, {"M2", mc.M2}});
  return json{{"schema", schema_version},
              {"family", family_name(report.family)},
              {"n", report.n},
              {"background", bg_name(report.background)},
              {"m_max", report.m_max},
              {"modes", modes},
              {"max_abs_M", report.max_abs()}};
}

json to_json(const DesignResult& result) {
  json trace = json::array();
  for (const RecursionStep& st : result.trace)
    trace.push_back(json{{"series", std::string(1, st.series)},
                         {"m", st.m},
                         {"value", st.value},
                         {"branch", st.branch}});
  return json{{"schema", schema_version},
              {"family", family_name(result.family)},
              {"background", bg_name(result.background)},
              {"m_max", result.m_max},
              {"g", to_json(result.g)},
              {"trace", trace}};
}

json to_json(const VerifyReport& report) {
  return json{{"schema", schema_version},
              {"max_abs_M", report.max_abs_M},
              {"generic_norm", report.generic_norm},
              {"baseline_norm", report.baseline_norm},
              {"closed_form_pass", report.closed_form_pass},
              {"generic_pass", report.generic_pass},
              {"pass", report.pass()}};
}

json to_json(const QResult& result) {
  return json{{"schema", schema_version},
              {"Q", result.Q},
              {"excluded_area", result.excluded_area},
              {"included_cells", result.included_cells},
              {"cell_area", result.cell_area}};
}

}  // namespace hncloak
