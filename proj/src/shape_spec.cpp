#include "hncloak/shape_spec.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace hncloak {

namespace {

void parse_term(const std::string& term, FourierShape& shape) {
  std::string body = term;
  double sign = 1.0;
  while (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    if (body.front() == '-') sign = -sign;
    body.erase(body.begin());
  }
  if (body.empty()) throw ParamError("shape spec: empty term");

  double value = sign;
  const std::size_t colon = body.find(':');
  std::string head = body.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string vs = body.substr(colon + 1);
    char* end = nullptr;
    value = sign * std::strtod(vs.c_str(), &end);
    if (end == vs.c_str() || *end != '\0')
      throw ParamError("shape spec: bad coefficient value '" + vs + "'");
  }

  auto mode_of = [&](const std::string& prefix) -> int {
    const std::string digits = head.substr(prefix.size());
    int m = 0;
    const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
    if (ec != std::errc() || p != digits.data() + digits.size() || m < 0)
      throw ParamError("shape spec: bad mode in term '" + term + "'");
    return m;
  };

  if (head == "c0") {
    shape.set_cos(0, shape.cos_coeff(0) + value);
  } else if (head.rfind("cos", 0) == 0) {
    const int m = mode_of("cos");
    if (m == 0)
      shape.set_cos(0, shape.cos_coeff(0) + 2.0 * value);  // cos0 means the constant value
    else
      shape.set_cos(m, shape.cos_coeff(m) + value);
  } else if (head.rfind("sin", 0) == 0) {
    const int m = mode_of("sin");
    if (m < 1) throw ParamError("shape spec: sin mode must be >= 1");
    shape.set_sin(m, shape.sin_coeff(m) + value);
  } else {
    throw ParamError("shape spec: unknown term '" + term + "'");
  }
}

}  // namespace

FourierShape parse_shape_spec(const std::string& spec) {
  FourierShape shape;
  if (spec.empty() || spec == "0") return shape;
  std::stringstream ss(spec);
  std::string term;
  while (std::getline(ss, term, ',')) {
    // trim spaces
    while (!term.empty() && term.front() == ' ') term.erase(term.begin());
    while (!term.empty() && term.back() == ' ') term.pop_back();
    if (term.empty()) continue;
    parse_term(term, shape);
  }
  return shape;
}

std::string format_shape(const FourierShape& shape) {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  auto emit = [&](const std::string& head, double v) {
    if (v == 0.0) return;
    if (!first) os << ",";
    os << head << ":" << v;
    first = false;
  };
  emit("c0", shape.cos_coeff(0));
  for (int m = 1; m <= shape.max_mode(); ++m) {
    emit("cos" + std::to_string(m), shape.cos_coeff(m));
    emit("sin" + std::to_string(m), shape.sin_coeff(m));
  }
  if (first) return "0";
  return os.str();
}

}  // namespace hncloak
