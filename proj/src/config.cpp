#include "mlq/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mlq {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

double num(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number()) bad(std::string("config: '") + key + "' must be a number");
  return j[key].get<double>();
}

int integer(const json& j, const char* key, int dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_integer()) bad(std::string("config: '") + key + "' must be an integer");
  return j[key].get<int>();
}

std::vector<cplx> poly(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad("config: " + what + " must be a nonempty array of coefficients");
  std::vector<cplx> out;
  for (const auto& c : j) out.push_back(parse_complex(c, what));
  return out;
}

RationalFn rational(const json& j, const std::string& what) {
  RationalFn f;
  if (j.is_null()) return f;
  if (j.is_number() || j.is_array()) {
    f.num = j.is_array() && !j.empty() && j[0].is_array() ? poly(j, what) : std::vector<cplx>{parse_complex(j, what)};
    return f;
  }
  if (!j.is_object()) bad("config: " + what + " must be a number, coefficient list or {num, den}");
  if (j.contains("num")) f.num = poly(j["num"], what + ".num");
  if (j.contains("den")) f.den = poly(j["den"], what + ".den");
  return f;
}

}  // namespace

cplx parse_complex(const json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && (j.contains("re") || j.contains("im")))
    return {num(j, "re", 0.0), num(j, "im", 0.0)};
  bad("config: " + what + " must be a number, [re, im] or {\"re\", \"im\"}");
}

PotentialSpec parse_potential(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    bad("config: potential.family is required");
  const std::string fam = j["family"];
  if (fam == "sphere") return SphereSpec{};
  if (fam == "torus") return TorusSpec{};
  if (fam == "equivariant") {
    EquivariantSpec s;
    s.a = num(j, "a", s.a);
    s.b = num(j, "b", s.b);
    s.c = num(j, "c", s.c);
    return s;
  }
  if (fam == "radial") {
    RadialSpec s;
    if (j.contains("c")) s.c = parse_complex(j["c"], "potential.c");
    s.k = integer(j, "k", s.k);
    return s;
  }
  if (fam == "trinoid") {
    TrinoidSpec s;
    if (j.contains("lambda0")) s.lambda0 = parse_complex(j["lambda0"], "potential.lambda0");
    s.v0 = num(j, "v0", s.v0);
    s.v1 = num(j, "v1", s.v1);
    s.vinf = num(j, "vinf", s.vinf);
    return s;
  }
  if (fam == "custom") {
    CustomSpec s;
    if (!j.contains("terms") || !j["terms"].is_array()) bad("config: custom potential needs a 'terms' array");
    for (const auto& t : j["terms"]) {
      CustomTerm term;
      term.degree = integer(t, "degree", 0);
      term.a = rational(t.value("a", json()), "terms.a");
      term.b = rational(t.value("b", json()), "terms.b");
      term.c = rational(t.value("c", json()), "terms.c");
      s.terms.push_back(term);
    }
    if (j.contains("poles"))
      for (const auto& p : j["poles"]) s.poles.push_back(parse_complex(p, "potential.poles"));
    if (j.contains("base_point")) s.base_point = parse_complex(j["base_point"], "potential.base_point");
    return s;
  }
  bad("config: unknown potential family '" + fam + "'");
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"conformal", 1e-4},        {"lagrangian", 1e-4},       {"harmonic", 1e-3},
      {"alpha_holomorphy", 1e-4}, {"beta_phase", 1e-4},       {"phi_norm", 1e-4},
      {"quadric", 1e-8},          {"horizontality", 1e-4},    {"sinh_gordon", 1e-3},
      {"metric_identity", 1e-3},  {"relation_e2u", 1e-4},     {"jacobian_sum", 1e-4},
      {"gauss", 1e-3},            {"theta", 1e-4},            {"jacobian_match", 1e-4},
      {"family_u", 1e-6},         {"family_alpha", 1e-6},     {"closing", 1e-6},
      {"monodromy", 1e-6},
  };
  return t;
}

double RunConfig::tol(const std::string& name) const {
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return default_tolerances().at(name);
}

PipelineOptions RunConfig::pipeline_options() const {
  PipelineOptions o;
  o.N = truncation_N;
  o.ode = ode;
  o.iwasawa = iwasawa;
  o.base = base_point;
  o.unitarize = unitarize;
  return o;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config: top level must be an object");
  if (j.contains("schema") && (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1))
    bad("config: unsupported schema (expected 1)");
  RunConfig c;
  c.raw = j;
  if (!j.contains("potential")) bad("config: 'potential' is required");
  const json& p = j["potential"];
  c.potential = parse_potential(p);
  if (p.contains("base_point")) c.base_point = parse_complex(p["base_point"], "potential.base_point");
  if (p.contains("phi0")) {
    const std::string s = p["phi0"].is_string() ? p["phi0"].get<std::string>() : "";
    if (s == "unitarize")
      c.unitarize = true;
    else if (s != "identity")
      bad("config: potential.phi0 must be \"identity\" or \"unitarize\"");
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    c.grid.re_min = num(g, "re_min", c.grid.re_min);
    c.grid.re_max = num(g, "re_max", c.grid.re_max);
    c.grid.im_min = num(g, "im_min", c.grid.im_min);
    c.grid.im_max = num(g, "im_max", c.grid.im_max);
    c.grid.n_re = integer(g, "n_re", c.grid.n_re);
    c.grid.n_im = integer(g, "n_im", c.grid.n_im);
  }
  if (c.grid.n_re < 2 || c.grid.n_im < 2) bad("config: grid counts must be >= 2");
  if (j.contains("lambda0")) {
    c.lambda0 = parse_complex(j["lambda0"], "lambda0");
    if (std::abs(std::abs(c.lambda0) - 1.0) > 1e-12) bad("config: lambda0 must lie on the unit circle");
  }
  if (j.contains("sweep")) c.sweep = integer(j, "sweep", 0);
  c.truncation_N = integer(j, "truncation_N", c.truncation_N);
  if (c.truncation_N < 1) bad("config: truncation_N must be >= 1");
  if (j.contains("ode")) {
    const json& o = j["ode"];
    const std::string m = o.value("method", std::string("rk45"));
    if (m == "rk45")
      c.ode.method = OdeOptions::Method::RK45;
    else if (m == "rk4")
      c.ode.method = OdeOptions::Method::RK4;
    else
      bad("config: ode.method must be \"rk45\" or \"rk4\"");
    c.ode.tol = num(o, "tol", c.ode.tol);
    c.ode.rk4_steps = integer(o, "rk4_steps", c.ode.rk4_steps);
    c.ode.det_renormalize = o.value("det_renormalize", c.ode.det_renormalize);
    if (!(c.ode.tol > 0.0)) bad("config: ode.tol must be positive");
    if (c.ode.rk4_steps < 1) bad("config: ode.rk4_steps must be >= 1");
  }
  if (j.contains("iwasawa")) {
    c.iwasawa.tol = num(j["iwasawa"], "tol", c.iwasawa.tol);
    c.iwasawa.max_m = integer(j["iwasawa"], "max_blocks", c.iwasawa.max_m);
  }
  c.fd_step = num(j, "fd_step", c.fd_step);
  c.fd_order = integer(j, "fd_order", c.fd_order);
  if (!(c.fd_step > 0.0)) bad("config: fd_step must be positive");
  if (c.fd_order != 2 && c.fd_order != 4) bad("config: fd_order must be 2 or 4");
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) bad("config: tolerances must be an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!default_tolerances().count(k)) bad("config: unknown tolerance '" + k + "'");
      if (!v.is_number()) bad("config: tolerance '" + k + "' must be a number");
      c.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  c.jobs = integer(j, "jobs", c.jobs);
  c.perturb_f2 = num(j, "perturb_f2", 0.0);
  if (j.contains("closing")) c.closing_samples = integer(j["closing"], "samples", c.closing_samples);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "config '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
}

}  // namespace mlq
