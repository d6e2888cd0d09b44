#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mlq/config.hpp"

using namespace mlq;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path p = [] {
    fs::path d = fs::temp_directory_path() / ("mlq_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

std::string config(const std::string& name) { return std::string(MLQ_CONFIG_DIR) + "/" + name + ".json"; }

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(MLQ_CLI_PATH) + "\" " + args + " > \"" +
                          (scratch() / "stdout.txt").string() + "\" 2> \"" + (scratch() / "stderr.txt").string() +
                          "\"";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string out(const std::string& tag) { return (scratch() / tag).string(); }

std::vector<std::array<double, 3>> obj_vertices(const fs::path& p) {
  std::vector<std::array<double, 3>> v;
  std::ifstream in(p);
  std::string tag;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::array<double, 3> x{};
    if (ls >> tag && tag == "v" && ls >> x[0] >> x[1] >> x[2]) v.push_back(x);
  }
  return v;
}

}  // namespace

TEST_CASE("config parsing") {
  const json base = {{"potential", {{"family", "sphere"}}}};
  CHECK_NOTHROW(parse_config(base));

  auto rejects = [&](json j) {
    try {
      parse_config(j);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Config;
    }
    return false;
  };
  json j = base;
  j["lambda0"] = {{"re", 0.9}, {"im", 0.0}};
  CHECK(rejects(j));
  j = base;
  j["grid"] = {{"n_re", 1}};
  CHECK(rejects(j));
  j = base;
  j["schema"] = 2;
  CHECK(rejects(j));
  j = base;
  j["tolerances"] = {{"nonsense", 1.0}};
  CHECK(rejects(j));
  CHECK(rejects(json{{"potential", {{"family", "klein"}}}}));

  const RunConfig c = parse_config(json{{"potential", {{"family", "radial"}, {"c", json::array({0.5, 0.1})}, {"k", 2}}},
                                        {"lambda0", json::array({0.0, 1.0})},
                                        {"tolerances", {{"closing", 1e-7}}}});
  const auto* r = std::get_if<RadialSpec>(&c.potential);
  REQUIRE(r != nullptr);
  CHECK(r->c == cplx(0.5, 0.1));
  CHECK(r->k == 2);
  CHECK(c.lambda0 == kI);
  CHECK(c.tol("closing") == 1e-7);
  CHECK(c.tol("quadric") == 1e-8);
}

TEST_CASE("generate on the sphere") {
  REQUIRE(run("generate --config " + config("sphere") + " --out " + out("sphere")) == 0);
  const std::string csv = slurp(fs::path(out("sphere")) / "surface.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
  for (const char* f : {"factor1.obj", "factor2.obj"}) {
    const auto vs = obj_vertices(fs::path(out("sphere")) / f);
    CHECK(vs.size() == 64);
    for (const auto& v : vs) CHECK(std::hypot(v[0], v[1], v[2]) == doctest::Approx(1.0).epsilon(1e-10));
  }
  const json meta = json::parse(slurp(fs::path(out("sphere")) / "meta.json"));
  CHECK(meta["version"] == kVersion);
  CHECK(meta["truncation_N"] == 16);
  CHECK(meta["max_tail_norm"].get<double>() < 1e-10);
  CHECK(meta["failures"].empty());
}

TEST_CASE("generate is byte-for-byte deterministic") {
  REQUIRE(run("generate --config " + config("sphere") + " --out " + out("det1") + " --jobs 1") == 0);
  REQUIRE(run("generate --config " + config("sphere") + " --out " + out("det2"), "MLQ_JOBS=4") == 0);
  for (const char* f : {"surface.csv", "meta.json", "factor1.obj", "factor2.obj"})
    CHECK(slurp(fs::path(out("det1")) / f) == slurp(fs::path(out("det2")) / f));
}

TEST_CASE("torus factors lie on great circles") {
  REQUIRE(run("generate --config " + config("torus") + " --out " + out("torus")) == 0);
  for (const char* f : {"factor1.obj", "factor2.obj"}) {
    const auto vs = obj_vertices(fs::path(out("torus")) / f);
    REQUIRE(vs.size() == 36);
    Eigen::MatrixXd m(vs.size(), 3);
    for (size_t k = 0; k < vs.size(); ++k) m.row(k) << vs[k][0], vs[k][1], vs[k][2];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    CHECK(svd.singularValues()(2) < 1e-9);
  }
}

TEST_CASE("grid through a puncture is a usage error") {
  CHECK(run("generate --config " + config("trinoid_puncture") + " --out " + out("punct")) == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("grid intersects singular set") != std::string::npos);
}

TEST_CASE("verify") {
  CHECK(run("verify --config " + config("sphere") + " --out " + out("vs")) == 0);
  const json rep = json::parse(slurp(fs::path(out("vs")) / "report.json"));
  CHECK(rep["pass"] == true);
  for (const auto& [k, v] : rep["residuals"].items()) {
    INFO(k);
    CHECK(v["max"].get<double>() <= 1e-3);
  }

  CHECK(run("verify --config " + config("perturbed") + " --out " + out("vp")) == 1);
  const json bad = json::parse(slurp(fs::path(out("vp")) / "report.json"));
  CHECK(bad["residuals"]["lagrangian"]["pass"] == false);

  CHECK(run("verify --config " + config("no_such_config") + " --out " + out("vm")) == 2);
  CHECK(run("verify --out " + out("vm")) == 2);
}

TEST_CASE("closing") {
  CHECK(run("closing --config " + config("closing_equivariant") + " --out " + out("ce")) == 0);
  const json ce = json::parse(slurp(fs::path(out("ce")) / "closing.json"));
  CHECK(ce["closes_q2"] == true);
  CHECK(ce["numeric_closing_residual"].get<double>() <= 1e-6);

  CHECK(run("closing --config " + config("closing_irrational") + " --out " + out("ci")) == 1);
  CHECK(run("closing --config " + config("radial") + " --out " + out("cr")) == 2);

  CHECK(run("closing --config " + config("closing_trinoid") + " --out " + out("ct")) == 0);
  const json ct = json::parse(slurp(fs::path(out("ct")) / "closing.json"));
  CHECK(ct["admissible"] == true);
  CHECK(ct["product_residual_circle"].get<double>() <= 1e-6);
}

TEST_CASE("family") {
  CHECK(run("family --config " + config("family_torus") + " --out " + out("ft")) == 0);
  const json ft = json::parse(slurp(fs::path(out("ft")) / "family.json"));
  CHECK(ft["max_u_deviation"].get<double>() <= 1e-6);

  CHECK(run("family --config " + config("family_sphere") + " --out " + out("fs")) == 0);
  const json fsj = json::parse(slurp(fs::path(out("fs")) / "family.json"));
  for (const auto& p : fsj["per_lambda"]) CHECK(p["max_abs_alpha"].get<double>() < 1e-6);

  CHECK(run("family --config " + config("sphere") + " --out " + out("f1")) == 2);
}
