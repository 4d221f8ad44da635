#include "gausspack/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace gausspack::io {

namespace {

constexpr const char* kParamKeys[] = {"mu", "alpha", "beta", "gamma", "chi_a", "chi_c",
                                      "rho", "F1", "F2", "G1", "G2"};

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

int sign(const json& j, const char* key) {
  const double v = number(j, key);
  if (v != 1.0 && v != -1.0) throw ParseError(std::string("field \"") + key + "\" must be +1 or -1");
  return static_cast<int>(v);
}

double* param_slot(RealParams& p, int k) {
  double* slots[] = {&p.mu, &p.alpha, &p.beta, &p.gamma, &p.chi_a, &p.chi_c, &p.rho, &p.F1, &p.F2, &p.G1, &p.G2};
  return slots[k];
}

}  // namespace

json to_json(const RealParams& p) {
  json j;
  RealParams q = p;
  for (int k = 0; k < 11; ++k) j[kParamKeys[k]] = *param_slot(q, k);
  return j;
}

RealParams params_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("packet descriptor must be a JSON object");
  if (j.contains("packet")) return params_from_json(j.at("packet"));
  RealParams p;
  for (int k = 0; k < 11; ++k) *param_slot(p, k) = number(j, kParamKeys[k]);
  return p;
}

json to_json(const MinPacketSpec& s) {
  return json{{"L_i", s.L_i_abs}, {"L_c", s.L_c_abs}, {"lambda", s.lambda}, {"lambda_c", s.lambda_c},
              {"u", s.u},         {"v", s.v},         {"omega", s.omega},   {"M", s.M}};
}

bool is_min_spec(const json& j) { return j.is_object() && j.contains("L_i") && !j.contains("mu"); }

MinPacketSpec min_spec_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("minimal-packet spec must be a JSON object");
  MinPacketSpec s;
  s.L_i_abs = number(j, "L_i");
  s.L_c_abs = number(j, "L_c");
  s.lambda = sign(j, "lambda");
  s.lambda_c = sign(j, "lambda_c");
  s.u = number(j, "u");
  s.v = number(j, "v");
  if (j.contains("omega")) s.omega = number(j, "omega");
  if (j.contains("M")) s.M = number(j, "M");
  s.validate();
  return s;
}

RealParams packet_from_json(const json& j) {
  if (is_min_spec(j)) return build_min_packet(min_spec_from_json(j));
  return params_from_json(j);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json to_json(const FirstMoments& m) { return json{{"x0", m.x0}, {"y0", m.y0}, {"px0", m.px0}, {"py0", m.py0}}; }

json to_json(const GaussianState& s) {
  const Mat4& c = s.cov;
  return json{{"x0", s.x0},           {"y0", s.y0},          {"px0", s.px0},        {"py0", s.py0},
              {"xx", c(X, X)},        {"yy", c(Y, Y)},       {"xy", c(X, Y)},       {"pxpx", c(PX, PX)},
              {"pypy", c(PY, PY)},    {"pxpy", c(PX, PY)},   {"xpx", c(X, PX)},     {"ypy", c(Y, PY)},
              {"xpy", c(X, PY)},      {"ypx", c(Y, PX)}};
}

json to_json(const AngularSplit& s) { return json{{"L_c", s.L_c}, {"L_i", s.L_i}, {"L_total", s.L_total}}; }

json to_json(const EllipseGeometry& e) {
  return json{{"nu", e.nu},     {"a_plus", e.a_plus}, {"a_minus", e.a_minus}, {"eccentricity", e.eccentricity},
              {"area", e.area}, {"theta", e.theta},   {"R", e.disc_R}};
}

json to_json(const UniversalInvariants& u) {
  return json{{"D0", u.D0}, {"D2", u.D2}, {"kappa1", u.kappa1}, {"kappa2", u.kappa2}};
}

json to_json(const VarianceReport& r) {
  return json{{"sigma_L", r.sigma_L}, {"sigma_E", r.sigma_E},   {"w", r.w},
              {"family", r.co_rotating ? "co-rotating" : "anti-rotating"},
              {"L_total", r.L_total}, {"energy", r.energy}};
}

json to_json(const FockCoefficients& c) {
  json rows = json::array();
  for (const auto& [k, v] : c.entries)
    rows.push_back(json{{"n_r", k.first}, {"m", k.second}, {"re", v.real()}, {"im", v.imag()}, {"prob", std::norm(v)}});
  return json{{"truncation", c.truncation},
              {"tail", c.tail},
              {"truncation_warning", c.truncation_warning},
              {"norm", c.norm()},
              {"mean_m", c.mean_m()},
              {"variance_m", c.variance_m()},
              {"coefficients", rows}};
}

json describe(const RealParams& p) {
  validate(p);
  const GaussianState s = gaussian_state(p);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["packet"] = to_json(p);
  j["delta"] = p.delta();
  j["norm_squared"] = normalize(p);
  j["moments"] = to_json(s);
  j["angular_momentum"] = to_json(angular_split(p));
  j["ellipse"] = to_json(ellipse(p, 1.0));
  j["invariants"] = to_json(universal_invariants(s));
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << header[k];
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::logic_error("CSV row width does not match header");
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_double(row[k]);
    os << '\n';
  }
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {"t",    "x0",   "y0",   "px0",  "py0",  "xx",  "yy",
                                                "xy",   "pxpx", "pypy", "pxpy", "xpx",  "ypy", "xpy",
                                                "ypx",  "L_c",  "L_i",  "D0",   "D2",   "area", "eccentricity",
                                                "theta"};
  return cols;
}

std::vector<double> trajectory_row(const TrajectoryPoint& p) {
  const Mat4& c = p.state.cov;
  return {p.t,          p.state.x0,   p.state.y0,   p.state.px0,      p.state.py0,      c(X, X),
          c(Y, Y),      c(X, Y),      c(PX, PX),    c(PY, PY),        c(PX, PY),        c(X, PX),
          c(Y, PY),     c(X, PY),     c(Y, PX),     p.split.L_c,      p.split.L_i,      p.invariants.D0,
          p.invariants.D2, p.ellipse.area, p.ellipse.eccentricity, p.ellipse.theta};
}

}  // namespace gausspack::io
