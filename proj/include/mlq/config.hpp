#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "mlq/surface.hpp"

namespace mlq {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  PotentialSpec potential;
  std::optional<cplx> base_point;
  bool unitarize = false;
  Grid grid;
  cplx lambda0{1.0, 0.0};
  int sweep = 0;  // > 0 when "sweep" was given instead of a single lambda0
  int truncation_N = 16;
  OdeOptions ode;
  IwasawaOptions iwasawa;
  double fd_step = 1e-3;
  int fd_order = 2;
  std::map<std::string, double> tolerances;
  std::string output_dir = "out";
  int jobs = 1;
  // Negative control: F2 is replaced by exp(i eps Re(z) s1) F2, which breaks the Lagrangian condition.
  double perturb_f2 = 0.0;
  // Closing block: number of sample points on the unit circle for the deck check.
  int closing_samples = 8;
  nlohmann::json raw;

  PipelineOptions pipeline_options() const;
  // Configured tolerance, else the built-in default for that name.
  double tol(const std::string& name) const;
};

cplx parse_complex(const nlohmann::json& j, const std::string& what);
PotentialSpec parse_potential(const nlohmann::json& j);
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

const std::map<std::string, double>& default_tolerances();

}  // namespace mlq
