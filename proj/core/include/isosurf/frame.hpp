#pragma once

#include <vector>

#include "isosurf/chart.hpp"
#include "isosurf/jet.hpp"

namespace isosurf {

struct FrameOptions {
  /// Singular-value / pivot threshold relative to the largest derivative
  /// norm of the same order.
  double rank_tol = 1e-7;
};

/// Orthonormal moving frame (e1, e2, e3, ..., e_N) along the immersion,
/// expanded as jets about a point.
///
/// The frame is the Gram-Schmidt orthonormalization of the ordered
/// derivatives x_u, x_v, x_uu, x_uv, x_uuu, x_uuv, ... past the position
/// vector (sphere). At a regular point of an isotropic surface this is the
/// adapted frame: alpha^{s+1}(e1,...,e1) = k_s e_{2s+1} and
/// alpha^{s+1}(e1,...,e1,e2) = k_s e_{2s+2}. In odd dimension the final
/// one-dimensional slot is filled with the unit normal of the osculating
/// hyperplane, signed so
/// that (x, e1, ..., e_N) (sphere) or (e1, ..., e_N) (euclidean) is
/// positively oriented.
struct FrameJets {
  int order = 0;
  JetVector position;
  std::vector<JetVector> frame;
  /// Dimensions of N_1, N_2, ... realised from derivatives.
  std::vector<int> level_ranks;
  /// Frame vectors that had to be completed from constant directions
  /// (non-substantial point).
  int completed = 0;
};

FrameJets frame_jets(const SurfaceChart& chart, const Vec2& p, int order,
                     const FrameOptions& options = {});

/// Numeric values (order 0) of the frame: columns e1, ..., e_N.
Mat frame_values(const FrameJets& f);

/// Largest derivative order the frame construction needs for the ambient.
int frame_derivative_order(const AmbientSpace& ambient);

/// Homogeneous frame matrix of size (N+1) x (N+1).
///
/// Sphere: columns (x, e1, ..., e_N), an orthogonal matrix.
/// Euclidean: [[1, 0], [x, E]] with E = (e1 ... e_N).
/// In both cases dF = F A with A = A_u du + A_v dv; index 0 is the position
/// slot, 1-2 the tangent frame, 3.. the normal frame.
Mat frame_matrix(const AmbientSpace& ambient, const Vec& x, const Mat& e);

/// Matrix-valued jet stored row-major.
struct MatrixJet {
  int rows = 0, cols = 0;
  std::vector<Jet2> entries;

  const Jet2& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * cols + j)]; }
  Jet2& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * cols + j)]; }
  Mat value() const;
  /// Coefficient matrix of u^a v^b.
  Mat coefficient(int a, int b) const;
  int order() const { return entries.empty() ? 0 : entries.front().order(); }
};

/// Maurer-Cartan form of the homogeneous frame, A_u = F^{-1} F_u and
/// A_v = F^{-1} F_v, as jets of the given order, together with the
/// coordinate complex structure J (2x2 jets).
struct StructureJets {
  MatrixJet Au, Av;
  MatrixJet J;
};

StructureJets structure_jets(const SurfaceChart& chart, const Vec2& p, int order,
                             const FrameOptions& options = {});

/// Replaces the second-fundamental-form blocks (rows/columns 3.. against
/// 1-2) of the connection tables by their composition with
/// J_theta = cos(theta) I + sin(theta) J, leaving the coframe, the
/// Levi-Civita block and the normal connection untouched.
StructureJets rotate_second_fundamental_form(const StructureJets& s, double theta);

/// Numeric counterpart of `rotate_second_fundamental_form`.
void rotate_second_fundamental_form(Mat& Au, Mat& Av, const Mat2& Jcoords, double theta);

/// Integrability defect |dA_v/du - dA_u/dv + [A_u, A_v]| (max entry) from
/// jets of order >= 1.
double compatibility_residual(const StructureJets& s);

}  // namespace isosurf
