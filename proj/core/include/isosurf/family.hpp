#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isosurf/chart.hpp"
#include "isosurf/frame.hpp"
#include "isosurf/grid.hpp"

namespace isosurf {

struct FamilyParams {
  double theta = 0.0;
  /// Order of the Taylor steps used to transport the frame between nodes.
  int taylor_order = 8;
  /// Taylor steps per grid cell.
  int substeps = 1;
  /// Also integrate along the column-first path and report the mismatch.
  bool path_check = true;
  /// Largest integrability defect accepted by the pre-check.
  double compat_tol = 1e-6;
  double rank_tol = 1e-7;
  int jobs = 0;
};

/// Member g_theta of the associated family on a grid, obtained by solving
/// dF = F A_theta from the frame of g at the first node: along the first
/// row, then up every column.
struct FamilyResult {
  double theta = 0.0;
  AmbientSpace ambient;
  SampledImmersion surface;
  /// Homogeneous frame matrix per node (see `frame_matrix`).
  std::vector<Mat> frames;
  /// Largest deviation from orthonormality removed by re-orthonormalization.
  double max_drift = 0.0;
  /// Largest distance between the row-first and column-first solutions.
  double path_defect = 0.0;
  /// Largest integrability defect found by the pre-check.
  double compat_residual = 0.0;
};

/// Integrability defect of the rotated structure equations at a few nodes.
double family_compatibility(const SurfaceChart& chart, const GridSpec& grid, double theta,
                            const FrameOptions& options = {});

/// Throws CompatibilityError when the pre-check fails.
FamilyResult integrate_family(const SurfaceChart& chart, const GridSpec& grid, const FamilyParams& params = {});

/// g_theta as a chart with exact jets: frames are transported from the
/// nearest integrated node and expanded by the Taylor recurrence of dF = F A.
class FamilyMemberChart final : public SurfaceChart {
 public:
  FamilyMemberChart(ChartPtr base, const GridSpec& grid, const FamilyParams& params);

  const ChartPtr& base() const { return base_; }
  const FamilyResult& result() const { return *result_; }
  JetVector expand(const Vec2& p, int order) const override;

 private:
  ChartPtr base_;
  GridSpec grid_;
  FamilyParams params_;
  std::shared_ptr<const FamilyResult> result_;
};

/// Structure matrices sampled along the straight path start -> start + delta
/// at 2 * steps + 1 equally spaced parameters (RK4 nodes and midpoints).
/// Independent of theta, so one sampling serves a whole scan.
struct PathSamples {
  Vec2 start, delta;
  int steps = 0;
  AmbientSpace ambient;
  std::vector<Mat> Au, Av;
  std::vector<Mat2> J;
  /// Frame matrix of g at the start.
  Mat F0;
};

PathSamples sample_path(const SurfaceChart& chart, const Vec2& start, const Vec2& delta, int steps,
                        const FrameOptions& options = {}, int jobs = 0);

/// Path-ordered transport P with F(end) = F(start) P for the member theta.
Mat path_transport(const PathSamples& path, double theta);

struct MonodromyRecord {
  double theta = 0.0;
  /// Phi_sigma = F(p + sigma) F(p)^{-1} for each period sigma.
  std::vector<Mat> phi;
  /// Operator-norm distance of each Phi_sigma to the identity.
  std::vector<double> dist;
  /// Largest deviation of a Phi_sigma from the isometry group.
  double orthogonality = 0.0;
  /// max over periods of dist.
  double defect = 0.0;
};

/// Closing defect of the associated family over the period lattice of a chart.
class MonodromyEvaluator {
 public:
  MonodromyEvaluator(const SurfaceChart& chart, int steps = 1024, const FrameOptions& options = {}, int jobs = 0);

  bool periodic() const { return !paths_.empty(); }
  MonodromyRecord operator()(double theta) const;
  double defect(double theta) const;

 private:
  std::vector<PathSamples> paths_;
};

/// Transport around the boundary of the parameter rectangle
/// [corner, corner + size], counter-clockwise; the identity up to
/// integration error when the rotated structure equations are flat.
Mat loop_holonomy(const SurfaceChart& chart, double theta, const Vec2& corner, const Vec2& size, int steps = 128,
                  const FrameOptions& options = {});

struct ModuliOptions {
  int samples = 64;
  double close_tol = 1e-6;
  /// Refined minima with defect in [close_tol, ambiguity * close_tol) make
  /// the scan inconclusive.
  double ambiguity = 100.0;
  double refine_tol = 1e-10;
  int path_steps = 1024;
  double rank_tol = 1e-7;
  int jobs = 0;
};

/// Scan of theta in [0, pi) for members g_theta that close up over the
/// period lattice. classification is "circle", "finite" or "inconclusive".
struct ModuliResult {
  bool periodic = false;
  std::vector<double> thetas, defects;
  /// Refined accepted parameters.
  std::vector<double> members;
  std::vector<double> member_defects;
  std::string classification;
};

/// Throws PreconditionError for a chart without periods.
ModuliResult moduli_scan(const SurfaceChart& chart, const ModuliOptions& options = {});

}  // namespace isosurf
