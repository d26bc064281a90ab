#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "isosurf/chart.hpp"
#include "isosurf/errors.hpp"
#include "isosurf/frame.hpp"
#include "isosurf/grid.hpp"

namespace isosurf {

struct AnalysisOptions {
  double rank_tol = 1e-7;
  /// Circularity deviation below which an ellipse counts as a circle.
  double circ_tol = 1e-6;
  /// Relative trace of the second fundamental form tolerated as minimal.
  double minimality_tol = 1e-8;
  int phi_samples = 64;
  int jobs = 0;
};

/// Filtration T + N_1 + ... + N_m at a point, with the values of all higher
/// fundamental forms alpha^s, s = 2..m+1.
struct OsculatingFlag {
  Vec2 point;
  AmbientSpace ambient;
  int levels = 0;  // m = floor((N - 1) / 2)
  Vec position;
  TangentData tangent;
  /// dim N_k for k = 1..m.
  std::vector<int> ranks;
  /// Orthonormal columns spanning N_k.
  std::vector<Mat> bases;
  /// alpha_coord[s-2][a] = alpha^s(d_u, ..., d_u, d_v, ..., d_v) with a copies of d_u.
  std::vector<std::vector<Vec>> alpha_coord;
  /// alpha_frame[s-2][a] = alpha^s(e1, ..., e1, e2, ..., e2) with a copies of e1.
  std::vector<std::vector<Vec>> alpha_frame;
  bool regular = false;
  bool substantial = false;

  int max_order() const { return levels + 1; }
  const Vec& alpha(int s, int a) const { return alpha_frame.at(static_cast<std::size_t>(s - 2)).at(static_cast<std::size_t>(a)); }
  /// Dimension of the expected regular pattern (2, ..., 2[, 1]).
  static std::vector<int> regular_ranks(const AmbientSpace& ambient);
};

/// Projects the order-s partial derivatives past the span of all lower-order
/// ones (and the position vector on the sphere); the projections are the
/// values of alpha^s on coordinate vectors.
OsculatingFlag osculating_flag(const SurfaceChart& chart, const Vec2& p, double rank_tol = 1e-7);

/// alpha^s(X_1, ..., X_s) for tangent vectors given in (e1, e2) components.
Vec higher_form_apply(const OsculatingFlag& flag, int s, std::vector<Vec2> directions);

/// alpha^2(e1, e1) + alpha^2(e2, e2), scaled by max(1, |alpha^2|).
double minimality_residual(const OsculatingFlag& flag);

struct EllipseData {
  int order = 1;
  Vec xi1, xi2;
  Vec center;
  std::vector<Vec> samples;
  double semi_major = 0.0, semi_minor = 0.0;
  double circularity_dev = 0.0;
  /// Radius of the ellipse (its semi-major axis); the circle radius when circular.
  double kappa = 0.0;
  /// Largest distance of a sample from span(N_k).
  double off_plane = 0.0;
  bool degenerate = false;
};

EllipseData curvature_ellipse(const OsculatingFlag& flag, int k, int phi_samples = 64);

/// Per-node analysis record.
struct PointRecord {
  int i = 0, j = 0;
  Vec2 point;
  std::vector<int> ranks;
  std::vector<double> kappa;
  /// Circularity deviation per order; NaN for one-dimensional N_k.
  std::vector<double> circularity;
  double minimality = 0.0;
  bool regular = false;
};

struct IsotropyReport {
  GridSpec grid;
  std::vector<PointRecord> points;
  double max_dev = 0.0;
  double max_minimality = 0.0;
  /// Suspected members of the non-regular set L_0.
  std::vector<PointRecord> nonregular;
  /// No two non-regular nodes are neighbours.
  bool nonregular_isolated = true;
  bool isotropic = false;
};

/// The chart violates a point-wise minimality precondition.
class NonMinimalError : public PreconditionError {
 public:
  NonMinimalError(const std::string& what, Vec2 point, double trace)
      : PreconditionError(what), point_(point), trace_(trace) {}
  const Vec2& point() const { return point_; }
  double trace() const { return trace_; }

 private:
  Vec2 point_;
  double trace_;
};

IsotropyReport isotropy_report(const SurfaceChart& chart, const GridSpec& grid,
                               const AnalysisOptions& options = {});

/// Frame (e1, ..., e_N) satisfying alpha^{s+1}(e1,...,e1) = k_s e_{2s+1} and
/// alpha^{s+1}(e1,...,e1,e2) = k_s e_{2s+2}; a final line bundle is spanned
/// by e_N, signed so the full ambient frame is positively oriented.
struct AdaptedFrame {
  Vec2 point;
  Vec position;
  Mat frame;
  std::vector<double> kappa;
  /// Max defect of the defining relations, using the ellipse radii.
  double relation_residual = 0.0;
};

AdaptedFrame adapted_frame(const OsculatingFlag& flag, const std::vector<double>& kappa,
                           double circ_tol = 1e-6);
/// Convenience: computes the ellipse radii from the flag first.
AdaptedFrame adapted_frame(const OsculatingFlag& flag, const AnalysisOptions& options = {});

/// Connection forms w_ab(e_i) = <D_{e_i} e_a, e_b> of the adapted frame,
/// 1-based indices a, b in [1, N] (1, 2 tangent, 3.. normal).
struct ConnectionForms {
  Vec2 point;
  int dim = 0;
  double step = 0.0;
  std::vector<OneForm> table;

  const OneForm& omega(int a, int b) const {
    return table[static_cast<std::size_t>((a - 1) * dim + (b - 1))];
  }
  std::complex<double> omega_E(int a, int b) const { return on_E(omega(a, b)); }
};

/// Central differences of the adapted frame with parameter step `step`.
ConnectionForms connection_forms(const SurfaceChart& chart, const Vec2& p, double step,
                                 const FrameOptions& options = {});
std::vector<ConnectionForms> connection_forms(const SurfaceChart& chart, const GridSpec& grid,
                                              double step, const AnalysisOptions& options = {});

/// Residuals of the connection identities of isotropic surfaces:
///   (1) w_{2s,2s+1} = -*w_{2s-1,2s+1},  w_{2s,2s+2} = -*w_{2s-1,2s+2}
///   (2) w_{2s-1,2s+2} = *w_{2s-1,2s+1}, w_{2s,2s+2} = *w_{2s,2s+1}
///   (3) w_{2n,2n+1} = -*w_{2n-1,2n+1}           (odd N = 2n+1)
/// and their complexified forms on E = e1 - i e2
///   (i)   w_{2s-1,2s+2}(E) = -i w_{2s-1,2s+1}(E), w_{2s,2s+1}(E) = i w_{2s-1,2s+1}(E)
///   (ii)  w_{2s,2s+2}(E) = w_{2s-1,2s+1}(E)
///   (iii) w_{2n,2n+1}(E) = i w_{2n-1,2n+1}(E).
struct IdentityResiduals {
  double con1 = 0.0, con2 = 0.0, con3 = 0.0;
  double coni = 0.0, conii = 0.0, coniii = 0.0;
  double max() const;
};

IdentityResiduals connection_identity_residuals(const ConnectionForms& w, const AmbientSpace& ambient);

/// The unit field spanning the last normal line bundle of a surface in an
/// odd-dimensional sphere, as a chart with exact jets.
class PolarChart final : public SurfaceChart {
 public:
  explicit PolarChart(ChartPtr base, FrameOptions options = {});
  const ChartPtr& base() const { return base_; }
  JetVector expand(const Vec2& p, int order) const override;

 private:
  ChartPtr base_;
  FrameOptions options_;
};

struct PolarSample {
  SampledImmersion surface;
  std::vector<double> conformal_factor;
  std::vector<double> conformality_dev;
  std::vector<bool> excluded;
  double max_conformality_dev = 0.0;
};

/// Samples g* = e_{2n+1} with its conformal factor relative to the metric of
/// g; nodes in L_0 are excluded.
PolarSample polar_surface(const ChartPtr& chart, const GridSpec& grid,
                          const AnalysisOptions& options = {});

/// Compares alpha^3 from projecting third derivatives with alpha^3 from
/// differentiating the alpha^2 field (central differences, parameter step
/// `step`) and projecting past T + N_1. Returns the largest discrepancy.
double alpha3_cross_check(const SurfaceChart& chart, const Vec2& p, double step = 1e-4,
                          double rank_tol = 1e-7);

}  // namespace isosurf
