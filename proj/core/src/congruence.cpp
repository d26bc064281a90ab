#include "isosurf/congruence.hpp"

#include <cmath>
#include <limits>

#include "isosurf/errors.hpp"
#include "isosurf/parallel.hpp"

namespace isosurf {

CongruenceResult congruence_test(const SampledImmersion& a, const SampledImmersion& b, double rel_tol,
                                 const std::vector<bool>* mask) {
  if (a.points.rows() != b.points.rows() || a.points.cols() != b.points.cols()) {
    throw ValidationError("congruence test needs samples of equal shape");
  }
  if (!(a.ambient == b.ambient)) throw ValidationError("congruence test needs a common ambient space");
  std::vector<Eigen::Index> used;
  for (Eigen::Index k = 0; k < a.points.cols(); ++k)
    if (mask == nullptr || (*mask)[static_cast<std::size_t>(k)]) used.push_back(k);
  if (used.size() < 2) throw ValidationError("congruence test needs at least two nodes");

  const Eigen::Index D = a.points.rows();
  const auto n = static_cast<Eigen::Index>(used.size());
  Mat A(D, n), B(D, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    A.col(k) = a.points.col(used[static_cast<std::size_t>(k)]);
    B.col(k) = b.points.col(used[static_cast<std::size_t>(k)]);
  }
  const bool euclid = !a.ambient.is_sphere();
  const Vec ca = euclid ? Vec(A.rowwise().mean()) : Vec::Zero(D);
  const Vec cb = euclid ? Vec(B.rowwise().mean()) : Vec::Zero(D);
  A.colwise() -= ca;
  B.colwise() -= cb;

  Eigen::JacobiSVD<Mat> svd(B * A.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  CongruenceResult r;
  r.Q = svd.matrixU() * svd.matrixV().transpose();
  r.translation = cb - r.Q * ca;
  r.reflection = r.Q.determinant() < 0.0;
  r.residual = std::sqrt((r.Q * A - B).colwise().squaredNorm().mean());
  r.scale = euclid ? std::sqrt(A.colwise().squaredNorm().mean()) : 1.0;
  r.congruent = r.residual < rel_tol * r.scale;
  return r;
}

HeightIndependence height_independence(const std::vector<SampledImmersion>& surfaces, double tol) {
  if (surfaces.empty()) throw ValidationError("height independence needs at least one surface");
  const SampledImmersion& first = surfaces.front();
  const bool euclid = !first.ambient.is_sphere();
  const Eigen::Index n = first.points.cols(), D = first.points.rows();
  for (const auto& s : surfaces) {
    if (!(s.grid == first.grid) || !(s.ambient == first.ambient) || s.points.cols() != n) {
      throw ValidationError("height independence needs surfaces on a common grid and ambient space");
    }
  }
  const Eigen::Index k = static_cast<Eigen::Index>(surfaces.size());
  const Eigen::Index cols = k * D + (euclid ? 1 : 0);
  if (n < cols) throw ValidationError("height independence is underdetermined: fewer nodes than functions");
  Mat M(n, cols);
  for (Eigen::Index s = 0; s < k; ++s) M.middleCols(s * D, D) = surfaces[static_cast<std::size_t>(s)].points.transpose();
  if (euclid) M.col(cols - 1).setOnes();
  M /= std::sqrt(static_cast<double>(n));
  HeightIndependence h;
  h.singular_values = Eigen::JacobiSVD<Mat>(M).singularValues();
  h.sigma_min = h.singular_values[h.singular_values.size() - 1];
  h.independent = h.sigma_min > tol;
  return h;
}

TakahashiResult takahashi_residual(const SurfaceChart& chart, const SampledImmersion& s, int jobs) {
  const GridSpec& g = s.grid;
  if (g.nu < 3 || g.nv < 3) throw ValidationError("Laplacian needs at least three nodes per axis");
  const double hu = g.step_u(), hv = g.step_v();
  const double lambda = s.ambient.is_sphere() ? 2.0 : 0.0;

  // W = sqrt(det g) g^{-1}, evaluated wherever the stencil needs it.
  auto W = [&](double u, double v) {
    const Mat2 m = first_fundamental_form(chart, {u, v});
    const double r = std::sqrt(m.determinant());
    return Mat2(r * m.inverse());
  };
  auto wrap = [&](int i, int n, bool periodic) {
    if (!periodic) return i;
    return (i % n + n) % n;
  };

  TakahashiResult res;
  res.per_node.assign(g.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(
      g.size(),
      [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(g.nu));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(g.nu));
        if ((!g.periodic_u && (i == 0 || i == g.nu - 1)) || (!g.periodic_v && (j == 0 || j == g.nv - 1))) return;
        auto X = [&](int di, int dj) {
          return s.points.col(static_cast<Eigen::Index>(
              g.index(wrap(i + di, g.nu, g.periodic_u), wrap(j + dj, g.nv, g.periodic_v))));
        };
        const Vec2 p = g.node(i, j);
        const double u = p.x(), v = p.y();
        const Mat2 m = first_fundamental_form(chart, p);
        const double sqrtg = std::sqrt(m.determinant());
        const double e = W(u + hu / 2, v)(0, 0), w = W(u - hu / 2, v)(0, 0);
        const double n = W(u, v + hv / 2)(1, 1), so = W(u, v - hv / 2)(1, 1);
        const double wue = W(u + hu, v)(0, 1), wuw = W(u - hu, v)(0, 1);
        const double wvn = W(u, v + hv)(0, 1), wvs = W(u, v - hv)(0, 1);
        const Vec x = X(0, 0);
        Vec lap = (e * (X(1, 0) - x) - w * (x - X(-1, 0))) / (hu * hu) +
                  (n * (X(0, 1) - x) - so * (x - X(0, -1))) / (hv * hv);
        // d_u (W12 d_v x) + d_v (W12 d_u x)
        lap += (wue * (X(1, 1) - X(1, -1)) - wuw * (X(-1, 1) - X(-1, -1))) / (4.0 * hu * hv);
        lap += (wvn * (X(1, 1) - X(-1, 1)) - wvs * (X(1, -1) - X(-1, -1))) / (4.0 * hu * hv);
        lap /= sqrtg;
        res.per_node[idx] = (lap + lambda * x).norm();
      },
      jobs);
  for (double d : res.per_node)
    if (!std::isnan(d)) res.residual = std::max(res.residual, d);
  return res;
}

double takahashi_convergence(const SurfaceChart& chart, const std::function<SampledImmersion(const GridSpec&)>& sampler,
                             const GridSpec& grid, int jobs) {
  const double coarse = takahashi_residual(chart, sampler(grid), jobs).residual;
  const double fine = takahashi_residual(chart, sampler(grid.refined()), jobs).residual;
  return coarse / fine;
}

}  // namespace isosurf
