#include "mlq/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mlq/closedform.hpp"
#include "mlq/verify.hpp"

namespace mlq {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::string out_dir(const RunConfig& cfg, const CommandContext& ctx) {
  const std::string d = ctx.out_dir.empty() ? cfg.output_dir : ctx.out_dir;
  std::error_code ec;
  fs::create_directories(d, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + d + "': " + ec.message());
  return d;
}

int jobs_for(const RunConfig& cfg, const CommandContext& ctx) {
  if (const char* env = std::getenv("MLQ_JOBS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    throw Error(ErrorKind::Config, "MLQ_JOBS must be a positive integer");
  }
  return std::max(1, ctx.jobs > 0 ? ctx.jobs : cfg.jobs);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

void say(const CommandContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << msg << '\n';
}

std::vector<cplx> checked_nodes(const RunConfig& cfg, const Pipeline& pipe) {
  auto nodes = cfg.grid.nodes();
  for (cplx z : nodes)
    if (pipe.potential().distance_to_poles(z) < pipe.options().eps_pole)
      throw Error(ErrorKind::Config, fmt::format("grid intersects singular set at z = {}{:+}i", z.real(), z.imag()));
  return nodes;
}

Mat2 rot1(double theta) { return std::cos(theta) * Mat2::Identity() + kI * std::sin(theta) * sigma1(); }

// Point data for a stencil, with the optional F2 perturbation of the negative control.
std::vector<PointData> node_data(const Pipeline& pipe, const std::vector<LaurentLoop>& frames, cplx z,
                                 const std::vector<cplx>& offs, cplx lambda0, double eps) {
  std::vector<PointData> out;
  out.reserve(frames.size());
  for (size_t k = 0; k < frames.size(); ++k) {
    FramePointPair fp = frame_pair(frames[k], lambda0, pipe.potential().twisted());
    if (eps != 0.0) fp.F2 = rot1(eps * (z + offs[k]).real()) * fp.F2;
    out.push_back(point_data(fp));
  }
  return out;
}

std::string decade(double v) {
  if (v == 0.0) return "0";
  const int e = std::clamp(static_cast<int>(std::floor(std::log10(v))), -16, 2);
  return fmt::format("1e{}", e);
}

json failures_json(const std::vector<std::pair<cplx, std::string>>& fails) {
  json a = json::array();
  for (const auto& [z, msg] : fails) a.push_back({{"z", cjson(z)}, {"error", msg}});
  return a;
}

Pipeline make_pipeline(const RunConfig& cfg) { return Pipeline(make_potential(cfg.potential), cfg.pipeline_options()); }

}  // namespace

int cmd_generate(const RunConfig& cfg, const CommandContext& ctx) {
  const Pipeline pipe = make_pipeline(cfg);
  const auto nodes = checked_nodes(cfg, pipe);
  const std::string dir = out_dir(cfg, ctx);
  const auto samples = build_surface(pipe, nodes, cfg.lambda0, jobs_for(cfg, ctx));

  std::string csv =
      "i,j,re_z,im_z,q2_0_re,q2_0_im,q2_1_re,q2_1_im,q2_2_re,q2_2_im,q2_3_re,q2_3_im,"
      "fmin_0,fmin_1,fmin_2,fmin_3,N_0,N_1,N_2,N_3,phi_x,phi_y,phi_z,psi_x,psi_y,psi_z,valid\n";
  std::string obj1 = "# factor 1\n", obj2 = "# factor 2\n";
  double max_tail = 0.0;
  std::vector<std::pair<cplx, std::string>> fails;
  const int nr = cfg.grid.n_re;
  for (size_t k = 0; k < samples.size(); ++k) {
    const SurfaceSample& s = samples[k];
    if (!s.valid) fails.emplace_back(s.z, s.error);
    max_tail = std::max(max_tail, s.tail);
    csv += fmt::format("{},{},{:.17g},{:.17g}", k % nr, k / nr, s.z.real(), s.z.imag());
    for (int c = 0; c < 4; ++c) csv += fmt::format(",{:.17g},{:.17g}", s.q2(c).real(), s.q2(c).imag());
    for (int c = 0; c < 4; ++c) csv += fmt::format(",{:.17g}", s.fmin(c));
    for (int c = 0; c < 4; ++c) csv += fmt::format(",{:.17g}", s.N(c));
    for (int c = 0; c < 3; ++c) csv += fmt::format(",{:.17g}", s.phi(c));
    for (int c = 0; c < 3; ++c) csv += fmt::format(",{:.17g}", s.psi(c));
    csv += fmt::format(",{}\n", s.valid ? 1 : 0);
    obj1 += fmt::format("v {:.17g} {:.17g} {:.17g}\n", s.phi(0), s.phi(1), s.phi(2));
    obj2 += fmt::format("v {:.17g} {:.17g} {:.17g}\n", s.psi(0), s.psi(1), s.psi(2));
  }
  for (int j = 0; j + 1 < cfg.grid.n_im; ++j) {
    for (int i = 0; i + 1 < nr; ++i) {
      const int a = j * nr + i, b = a + 1, c = a + nr, d = c + 1;
      auto ok = [&](int q) { return samples[static_cast<size_t>(q)].valid; };
      if (!(ok(a) && ok(b) && ok(c) && ok(d))) continue;
      const std::string f = fmt::format("f {} {} {}\nf {} {} {}\n", a + 1, b + 1, d + 1, a + 1, d + 1, c + 1);
      obj1 += f;
      obj2 += f;
    }
  }
  json meta = {{"schema", 1},
               {"version", kVersion},
               {"command", "generate"},
               {"config", cfg.raw},
               {"truncation_N", cfg.truncation_N},
               {"lambda0", cjson(cfg.lambda0)},
               {"nodes", samples.size()},
               {"max_tail_norm", max_tail},
               {"failures", failures_json(fails)}};
  write_file(dir + "/surface.csv", csv);
  write_file(dir + "/factor1.obj", obj1);
  write_file(dir + "/factor2.obj", obj2);
  write_file(dir + "/meta.json", meta.dump(2) + "\n");
  say(ctx, fmt::format("generate: {} nodes, {} failed, max tail {:.3e}, wrote {}", samples.size(), fails.size(),
                       max_tail, dir));
  return fails.empty() ? kExitOk : kExitNumerical;
}

int cmd_verify(const RunConfig& cfg, const CommandContext& ctx) {
  const Pipeline pipe = make_pipeline(cfg);
  const auto nodes = checked_nodes(cfg, pipe);
  const std::string dir = out_dir(cfg, ctx);
  VerifyOptions vo;
  vo.h = cfg.fd_step;
  vo.order = cfg.fd_order;
  const auto offs = stencil_offsets(vo.h);

  std::vector<NodeReport> reports(nodes.size());
  std::vector<std::string> errors(nodes.size());
  parallel_for(nodes.size(), jobs_for(cfg, ctx), [&](size_t i) {
    try {
      const auto frames = pipe.frames_near(nodes[i], offs);
      const Stencil st(nodes[i], vo.h, node_data(pipe, frames, nodes[i], offs, cfg.lambda0, cfg.perturb_f2));
      reports[i] = NodeReport{invariants_report(st, vo), geometry_report(st, vo), cu_report(st, vo)};
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  std::map<std::string, std::vector<double>> values;
  std::vector<std::pair<cplx, std::string>> fails;
  json per_node = json::array();
  int skipped = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!errors[i].empty()) {
      fails.emplace_back(nodes[i], errors[i]);
      continue;
    }
    const NodeReport& r = reports[i];
    for (const auto& [k, v] : r.inv.residuals) values[k].push_back(v);
    values["conformal"].push_back(r.geo.conformal_residual);
    values["lagrangian"].push_back(r.geo.lagrangian_residual);
    values["harmonic"].push_back(r.geo.harmonic_residual);
    values["jacobian_sum"].push_back(r.geo.jacobian_sum);
    values["theta"].push_back(r.cu.theta_residual);
    values["jacobian_match"].push_back(r.cu.jacobian_match);
    if (r.cu.gauss_skipped)
      ++skipped;
    else
      values["gauss"].push_back(r.cu.gauss_residual);
    per_node.push_back({{"z", cjson(nodes[i])},
                        {"u", r.inv.u},
                        {"alpha", cjson(r.inv.alpha)},
                        {"beta", cjson(r.inv.beta)},
                        {"u_hat", r.inv.u_hat},
                        {"C", r.cu.C},
                        {"K", r.cu.K},
                        {"gauss_skipped", r.cu.gauss_skipped}});
  }
  bool pass = fails.empty();
  json res = json::object();
  for (const auto& [name, vs] : values) {
    const double mx = vs.empty() ? 0.0 : *std::max_element(vs.begin(), vs.end());
    const double tol = cfg.tol(name);
    json hist = json::object();
    for (double v : vs) hist[decade(v)] = hist.value(decade(v), 0) + 1;
    res[name] = {{"max", mx}, {"tolerance", tol}, {"pass", mx <= tol}, {"histogram", hist}};
    pass = pass && mx <= tol;
  }
  json report = {{"schema", 1},
                 {"version", kVersion},
                 {"command", "verify"},
                 {"config", cfg.raw},
                 {"fd_step", vo.h},
                 {"fd_order", vo.order},
                 {"nodes", nodes.size()},
                 {"failures", failures_json(fails)},
                 {"gauss_skipped", skipped},
                 {"residuals", res},
                 {"per_node", per_node},
                 {"pass", pass}};
  write_file(dir + "/report.json", report.dump(2) + "\n");
  for (const auto& [name, r] : res.items())
    say(ctx, fmt::format("{:<17} max {:.3e}  tol {:.1e}  {}", name, r["max"].get<double>(),
                         r["tolerance"].get<double>(), r["pass"].get<bool>() ? "ok" : "FAIL"));
  if (!fails.empty()) return kExitNumerical;
  return pass ? kExitOk : kExitChecksFailed;
}

int cmd_closing(const RunConfig& cfg, const CommandContext& ctx) {
  const std::string dir = out_dir(cfg, ctx);
  json out = {{"schema", 1}, {"version", kVersion}, {"command", "closing"}, {"config", cfg.raw}};
  bool pass = false;
  if (const auto* e = std::get_if<EquivariantSpec>(&cfg.potential)) {
    const ClosingReport cr = cylinder_closing(e->a, e->b, e->c, cfg.lambda0);
    // Going once around the cylinder raises the Laurent degree of the frame; widen the window.
    PipelineOptions po = cfg.pipeline_options();
    po.N = std::max(po.N + 8, (3 * po.N + 1) / 2);
    const Pipeline pipe(make_potential(cfg.potential), po);
    const cplx base = pipe.base();
    double tail = 0.0;
    const DomainPath around = polygon_loop(base, 0.0, std::abs(base), 64, false);
    std::vector<Vec4c> direct, deck;
    const int n = std::max(1, cfg.closing_samples);
    for (int k = 0; k < n; ++k) {
      const cplx z = std::polar(std::abs(base), 2 * kPi * (k + 0.25) / n + std::arg(base));
      const IwasawaResult r1 = pipe.frame_at(z), r2 = pipe.frame_via(around, z);
      tail = std::max({tail, r1.F.tail_norm(), r2.F.tail_norm()});
      const auto p1 = frame_pair(r1.F, cfg.lambda0, true);
      const auto p2 = frame_pair(r2.F, cfg.lambda0, true);
      const auto [x1, y1] = xy_matrices(p1);
      const auto [x2, y2] = xy_matrices(p2);
      direct.push_back(q2_lift(x1, y1));
      deck.push_back(q2_lift(x2, y2));
    }
    const double resid = projective_residual(direct, deck);
    double sign_resid = 0.0;
    for (size_t k = 0; k < direct.size(); ++k) sign_resid = std::max(sign_resid, sign_distance(direct[k], deck[k]));
    const bool numeric_closes = resid <= cfg.tol("closing");
    out["family"] = "equivariant";
    out["mu1"] = cr.mu1;
    out["mu2"] = cr.mu2;
    out["closes_q2"] = cr.closes_q2;
    out["closes_s3"] = cr.closes_s3;
    out["numeric_closing_residual"] = resid;
    out["numeric_sign_residual"] = sign_resid;
    out["numeric_closes"] = numeric_closes;
    out["truncation_N"] = po.N;
    out["max_tail"] = tail;
    out["note"] = "f and -f are the same point of Q2, so mixed +I/-I monodromy still closes in Q2";
    pass = cr.closes_q2 && numeric_closes;
    say(ctx, fmt::format("closing: mu = ({:.12g}, {:.12g}) closes_q2 {} closes_s3 {} numeric residual {:.3e}",
                         cr.mu1, cr.mu2, cr.closes_q2, cr.closes_s3, resid));
  } else if (const auto* t = std::get_if<TrinoidSpec>(&cfg.potential)) {
    const AdmissibilityReport ar = trinoid_admissible(t->lambda0, t->v0, t->v1, t->vinf);
    const Potential pot = make_potential(cfg.potential);
    const cplx base = cfg.base_point ? *cfg.base_point : pot.default_base();
    const MonodromyLoops loops = default_monodromy_loops(pot, base);
    const double tol = cfg.tol("monodromy");
    auto unitarized = [&](cplx l) {
      std::vector<Mat2> hs;
      for (const auto& loop : loops.loops) hs.push_back(monodromy(pot, loop, l, cfg.ode));
      const Mat2 c = unitarizer({hs[0], hs[1]});
      for (auto& h : hs) h = c * h * c.inverse();
      return hs;
    };
    const cplx l0 = t->lambda0, l1 = partner_lambda(l0, false);
    const auto h0 = unitarized(l0), h1 = unitarized(l1);
    const TrinoidClosingReport tc = trinoid_closing_check({h0[0], h0[1], h0[2], h1[0], h1[1], h1[2]}, tol);
    double unit_err = 0.0, prod = 0.0;
    for (cplx l : circle_samples(8)) {
      const auto hs = unitarized(l);
      for (const auto& h : hs) unit_err = std::max(unit_err, (h * h.adjoint() - Mat2::Identity()).norm());
      prod = std::max(prod, (hs[2] * hs[1] * hs[0] - Mat2::Identity()).norm());
    }
    const auto hl = unitarized(-kI * l0);
    const double prod_literal = (hl[2] * hl[1] * hl[0] - Mat2::Identity()).norm();
    out["family"] = "trinoid";
    out["h_plus"] = cjson(ar.h_plus);
    out["h_minus"] = cjson(ar.h_minus);
    out["n"] = ar.n;
    out["m"] = ar.m;
    out["precondition"] = ar.precondition;
    out["admissible"] = ar.admissible;
    out["violated"] = ar.violated;
    out["sym_points"] = {cjson(l0), cjson(l1)};
    out["closes_q2"] = tc.closes_q2;
    out["monodromy_signs"] = tc.signs;
    out["max_pm_distance"] = tc.max_pm_distance;
    out["product_residual_sym_points"] = tc.product_residual;
    out["product_residual_circle"] = prod;
    out["product_residual_minus_i_lambda0"] = prod_literal;
    out["unitarity_error_circle"] = unit_err;
    out["loops"] = loops.labels;
    out["note"] = "mixed +I/-I monodromy is accepted: the surface formula factors through psi, whose kernel is +-id";
    pass = ar.admissible && tc.closes_q2 && std::max({tc.product_residual, prod, prod_literal}) <= tol &&
           unit_err <= tol;
    say(ctx, fmt::format("closing: admissible {} closes_q2 {} product {:.3e} unitarity {:.3e}", ar.admissible,
                         tc.closes_q2, std::max({tc.product_residual, prod, prod_literal}), unit_err));
  } else {
    throw Error(ErrorKind::Config, "closing: potential family must be equivariant or trinoid");
  }
  out["pass"] = pass;
  write_file(dir + "/closing.json", out.dump(2) + "\n");
  return pass ? kExitOk : kExitChecksFailed;
}

int cmd_family(const RunConfig& cfg, const CommandContext& ctx) {
  if (cfg.sweep < 2) throw Error(ErrorKind::Config, "family: 'sweep' must be an integer >= 2");
  const Pipeline pipe = make_pipeline(cfg);
  const auto nodes = checked_nodes(cfg, pipe);
  const std::string dir = out_dir(cfg, ctx);
  VerifyOptions vo;
  vo.h = cfg.fd_step;
  vo.order = cfg.fd_order;
  const auto offs = stencil_offsets(vo.h);
  std::vector<cplx> lambdas;
  for (int j = 0; j < cfg.sweep; ++j) lambdas.push_back(std::polar(1.0, kPi * j / cfg.sweep));

  const size_t nl = lambdas.size();
  std::vector<double> du(nodes.size() * nl, 0.0), da(nodes.size() * nl, 0.0), amax(nodes.size() * nl, 0.0);
  std::vector<std::string> errors(nodes.size());
  parallel_for(nodes.size(), jobs_for(cfg, ctx), [&](size_t i) {
    try {
      const auto frames = pipe.frames_near(nodes[i], offs);
      InvariantReport ref;
      for (size_t j = 0; j < nl; ++j) {
        const Stencil st(nodes[i], vo.h, node_data(pipe, frames, nodes[i], offs, lambdas[j], 0.0));
        const InvariantReport r = invariants_report(st, vo);
        if (j == 0) ref = r;
        du[i * nl + j] = std::abs(r.u - ref.u);
        da[i * nl + j] = std::abs(r.alpha - ref.alpha / (lambdas[j] * lambdas[j]));
        amax[i * nl + j] = std::abs(r.alpha);
      }
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  std::vector<std::pair<cplx, std::string>> fails;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (!errors[i].empty()) fails.emplace_back(nodes[i], errors[i]);
  double mu = 0.0, ma = 0.0;
  json per = json::array();
  for (size_t j = 0; j < nl; ++j) {
    double u = 0.0, a = 0.0, am = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      u = std::max(u, du[i * nl + j]);
      a = std::max(a, da[i * nl + j]);
      am = std::max(am, amax[i * nl + j]);
    }
    mu = std::max(mu, u);
    ma = std::max(ma, a);
    per.push_back({{"lambda0", cjson(lambdas[j])}, {"max_u_deviation", u}, {"max_alpha_deviation", a}, {"max_abs_alpha", am}});
  }
  const bool pass = fails.empty() && mu <= cfg.tol("family_u") && ma <= cfg.tol("family_alpha");
  json out = {{"schema", 1},
              {"version", kVersion},
              {"command", "family"},
              {"config", cfg.raw},
              {"sweep", cfg.sweep},
              {"per_lambda", per},
              {"max_u_deviation", mu},
              {"max_alpha_deviation", ma},
              {"failures", failures_json(fails)},
              {"pass", pass}};
  write_file(dir + "/family.json", out.dump(2) + "\n");
  say(ctx, fmt::format("family: {} lambda samples, max |du| {:.3e}, max |dalpha| {:.3e}", nl, mu, ma));
  if (!fails.empty()) return kExitNumerical;
  return pass ? kExitOk : kExitChecksFailed;
}

int run_command(const std::string& name, const std::string& config_path, const CommandContext& ctx,
                std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config_path);
    if (name == "generate") return cmd_generate(cfg, ctx);
    if (name == "verify") return cmd_verify(cfg, ctx);
    if (name == "closing") return cmd_closing(cfg, ctx);
    if (name == "family") return cmd_family(cfg, ctx);
    err << "unknown command '" << name << "'\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.kind()) ? kExitNumerical : kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace mlq
