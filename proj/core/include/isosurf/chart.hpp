#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isosurf/expr.hpp"
#include "isosurf/jet.hpp"

namespace isosurf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

enum class AmbientKind { Sphere, Euclidean };

/// Target space form: the unit sphere S^N in R^{N+1} or Euclidean R^N.
struct AmbientSpace {
  AmbientKind kind = AmbientKind::Euclidean;
  int dim = 3;

  static AmbientSpace sphere(int n);
  static AmbientSpace euclidean(int n);

  int embedding_dim() const { return kind == AmbientKind::Sphere ? dim + 1 : dim; }
  bool is_sphere() const { return kind == AmbientKind::Sphere; }
  /// m = floor((N - 1) / 2), the number of higher normal bundles.
  int normal_levels() const { return (dim - 1) / 2; }

  bool operator==(const AmbientSpace&) const = default;
};

std::string to_string(AmbientKind kind);
AmbientKind parse_ambient_kind(const std::string& name);

/// Parameter rectangle [u0, u1] x [v0, v1].
struct Domain {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;

  bool contains(const Vec2& p, double slack = 1e-9) const;
  Vec2 center() const { return {(u0 + u1) / 2, (v0 + v1) / 2}; }
  bool operator==(const Domain&) const = default;
};

/// A parametrized patch exposing exact jets of the immersion.
///
/// Implementations are immutable after construction; `expand` must be
/// re-entrant.
class SurfaceChart {
 public:
  SurfaceChart(std::string label, AmbientSpace ambient, Domain domain, std::vector<Vec2> periods);
  virtual ~SurfaceChart() = default;

  const std::string& label() const { return label_; }
  const AmbientSpace& ambient() const { return ambient_; }
  const Domain& domain() const { return domain_; }
  const std::vector<Vec2>& periods() const { return periods_; }
  bool is_periodic() const { return !periods_.empty(); }

  /// Whether `p` lies in the domain, up to translation by the period lattice.
  bool admits(const Vec2& p) const;

  /// Raw Taylor expansion of the embedding coordinates about `p`; callers
  /// should normally go through `jet_eval`, which validates.
  virtual JetVector expand(const Vec2& p, int order) const = 0;

 private:
  std::string label_;
  AmbientSpace ambient_;
  Domain domain_;
  std::vector<Vec2> periods_;
};

using ChartPtr = std::shared_ptr<const SurfaceChart>;

/// Embedding coordinates as a vector of expressions, optionally followed by
/// a linear map and a uniform scale.
struct Formula {
  std::vector<Expr> components;
  std::optional<Mat> linear;  // embedding_dim x components.size()
  double scale = 1.0;
};

class FormulaChart final : public SurfaceChart {
 public:
  FormulaChart(std::string label, AmbientSpace ambient, Domain domain, std::vector<Vec2> periods,
               Formula formula);

  const Formula& formula() const { return formula_; }
  JetVector expand(const Vec2& p, int order) const override;

 private:
  Formula formula_;
};

/// Validated expansion: rejects points outside the domain, non-finite
/// coefficients, and sphere charts that leave the unit sphere.
JetVector jet_eval(const SurfaceChart& chart, const Vec2& p, int order);

/// Chart value (embedding coordinates) at `p`.
Vec position(const SurfaceChart& chart, const Vec2& p);

/// Column j of the returned matrix is d^a_u d^b_v x for the j-th (a, b)
/// with a + b = s, ordered a = s, s-1, ..., 0.
Mat derivatives_of_order(const JetVector& jets, int s);

Mat2 first_fundamental_form(const SurfaceChart& chart, const Vec2& p);

/// Oriented orthonormal tangent frame at a point.
struct TangentData {
  Vec2 point;
  Mat2 metric;
  Vec e1, e2;
  /// Coordinate components of e1, e2 (columns): e_i = C(0,i) x_u + C(1,i) x_v.
  Mat2 coord_frame;
  /// Complex structure in the (e1, e2) frame.
  Mat2 J;
  /// E = e1 - i e2.
  CVec E;
};

/// Gram-Schmidt on (x_u, x_v). With a gauge, the frame is rotated within the
/// tangent plane to stay closest to the gauge frame.
TangentData tangent_data(const SurfaceChart& chart, const Vec2& p,
                         const TangentData* gauge = nullptr);

/// Complex structure as a (1,1)-tensor in coordinates: J d_b = sum_a J(a,b) d_a.
Mat2 complex_structure_coords(const Mat2& metric);

/// A 1-form given by its values on (e1, e2).
using OneForm = Eigen::Vector2d;

/// (*w)(X) = -w(JX): (*w)(e1) = -w(e2), (*w)(e2) = w(e1).
OneForm hodge_star(const OneForm& w);

/// Complex-linear extension evaluated on E = e1 - i e2.
std::complex<double> on_E(const OneForm& w);

}  // namespace isosurf
