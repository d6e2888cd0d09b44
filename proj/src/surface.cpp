#include "mlq/surface.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace mlq {

std::vector<cplx> Grid::nodes() const {
  if (n_re < 2 || n_im < 2) throw Error(ErrorKind::Config, "grid counts must be >= 2");
  std::vector<cplx> out;
  out.reserve(static_cast<size_t>(n_re) * n_im);
  for (int j = 0; j < n_im; ++j)
    for (int i = 0; i < n_re; ++i)
      out.emplace_back(re_min + (re_max - re_min) * i / (n_re - 1), im_min + (im_max - im_min) * j / (n_im - 1));
  return out;
}

Pipeline::Pipeline(Potential p, PipelineOptions opts) : p_(std::move(p)), o_(opts) {
  if (o_.N < 1) throw Error(ErrorKind::Config, "truncation N must be >= 1");
  base_ = o_.base ? *o_.base : p_.default_base();
  if (p_.distance_to_poles(base_) < o_.eps_pole) throw Error(ErrorKind::Domain, "base point is a singular point");
  if (o_.unitarize && !p_.singular_points().empty()) {
    const auto loops = default_monodromy_loops(p_, base_);
    phi0_ = unitarizing_initial_loop(p_, loops, window(), o_.ode, o_.unitarize_samples);
  } else {
    phi0_ = LaurentLoop::identity(window());
  }
}

LaurentLoop Pipeline::phi_at(cplx z) const {
  const DomainPath path = plan_path(p_, base_, z, o_.eps_pole);
  return integrate_frame(p_, path, phi0_, o_.ode, window(), o_.eps_pole);
}

IwasawaResult Pipeline::frame_at(cplx z) const { return iwasawa(phi_at(z), o_.iwasawa); }

FramePointPair Pipeline::pair_at(cplx z, cplx lambda0) const {
  return frame_pair(frame_at(z).F, lambda0, p_.twisted());
}

IwasawaResult Pipeline::frame_via(const DomainPath& prefix, cplx z) const {
  if (prefix.vertices.empty() || prefix.vertices.front() != base_)
    throw Error(ErrorKind::Domain, "path prefix must start at the base point");
  const DomainPath path = concat(prefix, plan_path(p_, prefix.vertices.back(), z, o_.eps_pole));
  return iwasawa(integrate_frame(p_, path, phi0_, o_.ode, window(), o_.eps_pole), o_.iwasawa);
}

SurfaceSample Pipeline::sample(cplx z, cplx lambda0) const {
  try {
    const IwasawaResult r = frame_at(z);
    SurfaceSample s = make_sample(z, frame_pair(r.F, lambda0, p_.twisted()));
    s.tail = r.F.tail_norm();
    return s;
  } catch (const Error& e) {
    SurfaceSample s;
    s.z = z;
    s.error = e.what();
    return s;
  }
}

std::vector<LaurentLoop> Pipeline::frames_near(cplx center, const std::vector<cplx>& offsets) const {
  const LaurentLoop phic = phi_at(center);
  const IwasawaResult rc = iwasawa(phic, o_.iwasawa);
  IwasawaOptions fixed = o_.iwasawa;
  fixed.fixed_m = rc.blocks;
  OdeOptions hop = o_.ode;
  hop.method = OdeOptions::Method::RK4;
  std::vector<LaurentLoop> out;
  out.reserve(offsets.size());
  for (cplx d : offsets) {
    if (d == cplx(0.0)) {
      out.push_back(iwasawa(phic, fixed).F);
      continue;
    }
    // rk4_steps is per unit length; scale it so every hop takes hop_steps steps.
    hop.rk4_steps = static_cast<int>(std::ceil(o_.hop_steps / std::abs(d)));
    const LaurentLoop phi = integrate_frame(p_, straight_path(center, center + d), phic, hop, window(), o_.eps_pole);
    out.push_back(iwasawa(phi, fixed).F);
  }
  return out;
}

std::vector<PointData> Pipeline::stencil_data(cplx center, const std::vector<cplx>& offsets, cplx lambda0) const {
  const auto frames = frames_near(center, offsets);
  std::vector<PointData> out;
  out.reserve(frames.size());
  for (const auto& F : frames) out.push_back(point_data(frame_pair(F, lambda0, p_.twisted())));
  return out;
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(n, static_cast<size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<SurfaceSample> build_surface(const Pipeline& pipe, const std::vector<cplx>& nodes, cplx lambda0,
                                         int jobs) {
  std::vector<SurfaceSample> out(nodes.size());
  parallel_for(nodes.size(), jobs, [&](size_t i) { out[i] = pipe.sample(nodes[i], lambda0); });
  return out;
}

}  // namespace mlq
