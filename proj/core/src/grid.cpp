#include "isosurf/grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "isosurf/errors.hpp"
#include "isosurf/parallel.hpp"

namespace isosurf {

namespace {

std::atomic<int> g_default_jobs{0};

bool has_axis_period(const SurfaceChart& chart, int axis, double width) {
  for (const auto& s : chart.periods()) {
    const double along = s[axis], across = s[1 - axis];
    if (std::abs(across) < 1e-12 && std::abs(std::abs(along) - width) < 1e-9 * std::max(1.0, width)) {
      return true;
    }
  }
  return false;
}

}  // namespace

int default_jobs() {
  const int j = g_default_jobs.load();
  if (j > 0) return j;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void set_default_jobs(int jobs) { g_default_jobs.store(std::max(0, jobs)); }

GridSpec GridSpec::for_chart(const SurfaceChart& chart, int nu, int nv) {
  if (nu < 2 || nv < 2) throw ValidationError("grid needs at least two nodes per axis");
  GridSpec g;
  g.domain = chart.domain();
  g.nu = nu;
  g.nv = nv;
  g.periodic_u = has_axis_period(chart, 0, g.domain.u1 - g.domain.u0);
  g.periodic_v = has_axis_period(chart, 1, g.domain.v1 - g.domain.v0);
  return g;
}

double GridSpec::step_u() const {
  return (domain.u1 - domain.u0) / (periodic_u ? nu : nu - 1);
}

double GridSpec::step_v() const {
  return (domain.v1 - domain.v0) / (periodic_v ? nv : nv - 1);
}

Vec2 GridSpec::node(int i, int j) const {
  return {domain.u0 + i * step_u(), domain.v0 + j * step_v()};
}

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.nu = periodic_u ? 2 * nu : 2 * nu - 1;
  g.nv = periodic_v ? 2 * nv : 2 * nv - 1;
  return g;
}

SampledImmersion sample(const SurfaceChart& chart, const GridSpec& grid, int jobs) {
  SampledImmersion s{grid, Mat(chart.ambient().embedding_dim(), static_cast<Eigen::Index>(grid.size())),
                     chart.ambient()};
  parallel_for(
      grid.size(),
      [&](std::size_t k) {
        const int i = static_cast<int>(k % static_cast<std::size_t>(grid.nu));
        const int j = static_cast<int>(k / static_cast<std::size_t>(grid.nu));
        s.points.col(static_cast<Eigen::Index>(k)) = position(chart, grid.node(i, j));
      },
      jobs);
  return s;
}

}  // namespace isosurf
