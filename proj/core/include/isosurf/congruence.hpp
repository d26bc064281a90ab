#pragma once

#include <functional>
#include <vector>

#include "isosurf/chart.hpp"
#include "isosurf/grid.hpp"

namespace isosurf {

/// Best ambient isometry b ~ Q a + t between two samplings on the same grid.
/// Reflections are allowed; t = 0 on the sphere.
struct CongruenceResult {
  Mat Q;
  Vec translation;
  /// Root mean square of |Q a_k + t - b_k| over the used nodes.
  double residual = 0.0;
  /// RMS norm of the (centred) first sample set; 1 on the sphere.
  double scale = 1.0;
  bool reflection = false;
  bool congruent = false;
};

/// `mask`, when given, selects the nodes to use.
CongruenceResult congruence_test(const SampledImmersion& a, const SampledImmersion& b, double rel_tol = 1e-6,
                                 const std::vector<bool>* mask = nullptr);

/// Whether the coordinate functions of all immersions together (with the
/// constants in the euclidean case) are linearly independent over the
/// sampled nodes: smallest singular value of the stacked sample matrix,
/// scaled by 1 / sqrt(nodes).
struct HeightIndependence {
  Vec singular_values;
  double sigma_min = 0.0;
  bool independent = false;
};

HeightIndependence height_independence(const std::vector<SampledImmersion>& surfaces, double tol = 1e-6);

/// Defect of the Takahashi equation Delta x = -2 x (sphere) or Delta x = 0
/// (euclidean) for samples whose metric is that of `metric_chart`.
/// The Laplace-Beltrami operator is discretised in divergence form with
/// mixed terms (nine-point stencil), metric taken at half points.
struct TakahashiResult {
  double residual = 0.0;
  /// Per-node defect norm; NaN on skipped boundary nodes.
  std::vector<double> per_node;
};

TakahashiResult takahashi_residual(const SurfaceChart& metric_chart, const SampledImmersion& s, int jobs = 0);

/// residual(h) / residual(h / 2); about 4 for a second-order scheme.
double takahashi_convergence(const SurfaceChart& metric_chart,
                             const std::function<SampledImmersion(const GridSpec&)>& sampler, const GridSpec& grid,
                             int jobs = 0);

}  // namespace isosurf
