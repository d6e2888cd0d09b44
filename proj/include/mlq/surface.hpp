#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mlq/frames.hpp"
#include "mlq/holonomy.hpp"
#include "mlq/iwasawa.hpp"
#include "mlq/potential.hpp"

namespace mlq {

struct PipelineOptions {
  int N = 16;
  OdeOptions ode;
  IwasawaOptions iwasawa;
  double eps_pole = kEpsPole;
  std::optional<cplx> base;
  // Phi0 = identity, or the loop that makes the monodromy around the punctures unitary.
  bool unitarize = false;
  int unitarize_samples = 64;
  int hop_steps = 8;  // fixed RK4 steps for each short hop off a stencil center
};

struct Grid {
  double re_min = -1.0, re_max = 1.0, im_min = -1.0, im_max = 1.0;
  int n_re = 2, n_im = 2;
  // Row-major in Im, i.e. index = j * n_re + i.
  std::vector<cplx> nodes() const;
};

class Pipeline {
 public:
  explicit Pipeline(Potential p, PipelineOptions opts = {});

  const Potential& potential() const { return p_; }
  const PipelineOptions& options() const { return o_; }
  cplx base() const { return base_; }
  Window window() const { return Window::symmetric(o_.N); }
  const LaurentLoop& phi0() const { return phi0_; }

  LaurentLoop phi_at(cplx z) const;
  IwasawaResult frame_at(cplx z) const;
  FramePointPair pair_at(cplx z, cplx lambda0) const;
  // Frame at z reached by first running `prefix` (which starts at the base point).
  IwasawaResult frame_via(const DomainPath& prefix, cplx z) const;
  // Failures are recorded in the sample instead of thrown.
  SurfaceSample sample(cplx z, cplx lambda0) const;

  // Frames at center + offsets[k]. One adaptive integration reaches the center, then each
  // offset is a fixed-step hop and every factorization uses the center's Toeplitz size,
  // so the result is a smooth function of the offsets.
  std::vector<LaurentLoop> frames_near(cplx center, const std::vector<cplx>& offsets) const;
  std::vector<PointData> stencil_data(cplx center, const std::vector<cplx>& offsets, cplx lambda0) const;

 private:
  Potential p_;
  PipelineOptions o_;
  cplx base_;
  LaurentLoop phi0_;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads; fn must write only its own slot.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

std::vector<SurfaceSample> build_surface(const Pipeline& pipe, const std::vector<cplx>& nodes, cplx lambda0,
                                         int jobs = 1);

}  // namespace mlq
