#pragma once

#include <vector>

#include "isosurf/chart.hpp"

namespace isosurf {

/// Regular parameter grid. Along a periodic axis the right end point is
/// omitted (it coincides with the left one); otherwise both end points are
/// nodes.
struct GridSpec {
  Domain domain;
  int nu = 64;
  int nv = 64;
  bool periodic_u = false;
  bool periodic_v = false;

  /// Grid over the chart's domain; an axis is periodic when the chart has a
  /// period equal to the domain width along that axis.
  static GridSpec for_chart(const SurfaceChart& chart, int nu, int nv);
  static GridSpec for_chart(const SurfaceChart& chart, int n) { return for_chart(chart, n, n); }

  double step_u() const;
  double step_v() const;
  Vec2 node(int i, int j) const;
  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nu) + static_cast<std::size_t>(i);
  }
  /// Same grid with every step halved.
  GridSpec refined() const;

  bool operator==(const GridSpec&) const = default;
};

/// Ambient samples of an immersion on a parameter grid; column k of `points`
/// is the image of node k (row-major in (i, j), i fastest).
struct SampledImmersion {
  GridSpec grid;
  Mat points;
  AmbientSpace ambient;
};

SampledImmersion sample(const SurfaceChart& chart, const GridSpec& grid, int jobs = 0);

}  // namespace isosurf
