#include "isosurf/higher_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "isosurf/parallel.hpp"

namespace isosurf {

namespace {

std::string at(const Vec2& p) {
  return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")";
}

Mat project_out(const Mat& Q, const Mat& A) {
  if (Q.cols() == 0) return A;
  Mat P = A - Q * (Q.transpose() * A);
  return P - Q * (Q.transpose() * P);
}

Mat append_cols(const Mat& Q, const Mat& B) {
  Mat R(Q.rows(), Q.cols() + B.cols());
  R << Q, B;
  return R;
}

// Coefficients p_k of prod_i (X_i.u t + X_i.v): the weight of alpha(d_u^k d_v^{s-k}).
std::vector<double> multilinear_weights(const std::vector<Vec2>& coords) {
  std::vector<double> p{1.0};
  for (const auto& X : coords) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      q[k] += p[k] * X.y();
      q[k + 1] += p[k] * X.x();
    }
    p = std::move(q);
  }
  return p;
}

Vec apply_coords(const std::vector<Vec>& alpha, const std::vector<Vec2>& coords) {
  const auto w = multilinear_weights(coords);
  Vec r = Vec::Zero(alpha.front().size());
  for (std::size_t k = 0; k < w.size(); ++k) r += w[k] * alpha[k];
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Vec values(const JetVector& v) {
  Vec r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<Eigen::Index>(i)] = v[i].value();
  return r;
}

double oriented_det(const AmbientSpace& amb, const Vec& x, const Mat& e) {
  if (!amb.is_sphere()) return e.determinant();
  Mat full(e.rows(), e.cols() + 1);
  full << x, e;
  return full.determinant();
}

}  // namespace

std::vector<int> OsculatingFlag::regular_ranks(const AmbientSpace& ambient) {
  const int m = ambient.normal_levels();
  std::vector<int> r(static_cast<std::size_t>(std::max(m, 1)), 2);
  if (ambient.dim % 2 == 1) r.back() = 1;
  return r;
}

OsculatingFlag osculating_flag(const SurfaceChart& chart, const Vec2& p, double rank_tol) {
  const AmbientSpace& amb = chart.ambient();
  OsculatingFlag f;
  f.point = p;
  f.ambient = amb;
  f.levels = std::max(1, amb.normal_levels());
  const int top = f.levels + 1;
  const JetVector jets = jet_eval(chart, p, top);
  f.position = values(jets);
  f.tangent = tangent_data(chart, p);

  const Eigen::Index D = amb.embedding_dim();
  Mat Q(D, 0);
  if (amb.is_sphere()) Q = append_cols(Q, f.position);
  Mat T(D, 2);
  T << f.tangent.e1, f.tangent.e2;
  Q = append_cols(Q, T);

  const std::vector<Vec2> frame_dirs{f.tangent.coord_frame.col(0), f.tangent.coord_frame.col(1)};
  for (int s = 2; s <= top; ++s) {
    const Mat raw = derivatives_of_order(jets, s);
    double scale = 0.0;
    for (Eigen::Index c = 0; c < raw.cols(); ++c) scale = std::max(scale, raw.col(c).norm());
    const Mat P = project_out(Q, raw);

    std::vector<Vec> coord(static_cast<std::size_t>(s + 1));
    for (int a = 0; a <= s; ++a) coord[static_cast<std::size_t>(a)] = P.col(s - a);
    std::vector<Vec> framed(static_cast<std::size_t>(s + 1));
    for (int a = 0; a <= s; ++a) {
      std::vector<Vec2> dirs(static_cast<std::size_t>(s), frame_dirs[1]);
      std::fill(dirs.begin(), dirs.begin() + a, frame_dirs[0]);
      framed[static_cast<std::size_t>(a)] = apply_coords(coord, dirs);
    }
    f.alpha_coord.push_back(std::move(coord));
    f.alpha_frame.push_back(std::move(framed));

    Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeThinU);
    const Vec sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] > rank_tol * scale) ++rank;
    if (rank > 2) {
      throw InconsistentInputError("normal space of order " + std::to_string(s - 1) + " has dimension " +
                                   std::to_string(rank) + " at " + at(p) + " of chart '" + chart.label() + "'");
    }
    rank = std::min<int>(rank, static_cast<int>(D - Q.cols()));
    f.ranks.push_back(rank);
    const Mat B = svd.matrixU().leftCols(rank);
    f.bases.push_back(B);
    Q = append_cols(Q, B);
  }
  f.regular = f.ranks == OsculatingFlag::regular_ranks(amb);
  f.substantial = Q.cols() == D;
  return f;
}

Vec higher_form_apply(const OsculatingFlag& flag, int s, std::vector<Vec2> directions) {
  if (s < 2 || s > flag.max_order()) throw ValidationError("form order out of range");
  if (static_cast<int>(directions.size()) != s) throw ValidationError("alpha^s takes s arguments");
  std::sort(directions.begin(), directions.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Vec2> coords;
  coords.reserve(directions.size());
  for (const auto& d : directions) coords.push_back(flag.tangent.coord_frame * d);
  return apply_coords(flag.alpha_coord[static_cast<std::size_t>(s - 2)], coords);
}

double minimality_residual(const OsculatingFlag& flag) {
  const Vec& a11 = flag.alpha(2, 2);
  const Vec& a12 = flag.alpha(2, 1);
  const Vec& a22 = flag.alpha(2, 0);
  const double size = std::max({1.0, a11.norm(), a12.norm(), a22.norm()});
  return (a11 + a22).norm() / size;
}

EllipseData curvature_ellipse(const OsculatingFlag& flag, int k, int phi_samples) {
  const int s = k + 1;
  if (k < 1 || s > flag.max_order()) throw ValidationError("ellipse order out of range");
  if (phi_samples < 8) throw ValidationError("need at least 8 ellipse samples");
  const auto& af = flag.alpha_frame[static_cast<std::size_t>(s - 2)];
  EllipseData e;
  e.order = k;
  e.xi1 = af[static_cast<std::size_t>(s)];
  e.xi2 = af[static_cast<std::size_t>(s - 1)];
  const Eigen::Index D = e.xi1.size();
  Mat M(D, phi_samples);
  for (int j = 0; j < phi_samples; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / phi_samples;
    const double c = std::cos(phi), sn = std::sin(phi);
    Vec r = Vec::Zero(D);
    for (int a = 0; a <= s; ++a)
      r += binomial(s, a) * std::pow(c, a) * std::pow(sn, s - a) * af[static_cast<std::size_t>(a)];
    M.col(j) = r;
    e.samples.push_back(r);
  }
  e.center = M.rowwise().mean();
  const Mat C = M.colwise() - e.center;
  Eigen::JacobiSVD<Mat> svd(C);
  const Vec sv = svd.singularValues();
  const double w = std::sqrt(2.0 / phi_samples);
  e.semi_major = sv[0] * w;
  e.semi_minor = sv.size() > 1 ? sv[1] * w : 0.0;
  e.kappa = e.semi_major;
  e.degenerate = !(e.semi_major > 1e-12);
  e.circularity_dev = e.degenerate ? 0.0 : (e.semi_major - e.semi_minor) / e.semi_major;
  const Mat& B = flag.bases[static_cast<std::size_t>(k - 1)];
  for (const auto& r : e.samples) e.off_plane = std::max(e.off_plane, (r - B * (B.transpose() * r)).norm());
  return e;
}

IsotropyReport isotropy_report(const SurfaceChart& chart, const GridSpec& grid, const AnalysisOptions& options) {
  IsotropyReport rep;
  rep.grid = grid;
  rep.points.resize(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(grid.nu));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(grid.nu));
        const Vec2 p = grid.node(i, j);
        const OsculatingFlag f = osculating_flag(chart, p, options.rank_tol);
        PointRecord r;
        r.i = i;
        r.j = j;
        r.point = p;
        r.ranks = f.ranks;
        r.regular = f.regular;
        r.minimality = minimality_residual(f);
        for (int k = 1; k <= f.levels; ++k) {
          if (f.ranks[static_cast<std::size_t>(k - 1)] == 2) {
            const EllipseData e = curvature_ellipse(f, k, options.phi_samples);
            r.kappa.push_back(e.kappa);
            r.circularity.push_back(f.regular ? e.circularity_dev : std::numeric_limits<double>::quiet_NaN());
          } else {
            // Final line bundle: the "ellipse" is a segment; record its half length.
            r.kappa.push_back(curvature_ellipse(f, k, options.phi_samples).kappa);
            r.circularity.push_back(std::numeric_limits<double>::quiet_NaN());
          }
        }
        rep.points[idx] = std::move(r);
      },
      options.jobs);

  // Checked in grid order so the reported node does not depend on scheduling.
  for (const auto& r : rep.points) {
    if (r.minimality > options.minimality_tol) {
      throw NonMinimalError("chart '" + chart.label() + "' is not minimal at " + at(r.point) +
                                " (relative mean curvature " + std::to_string(r.minimality) + ")",
                            r.point, r.minimality);
    }
  }
  std::vector<char> flagged(grid.size(), 0);
  for (std::size_t idx = 0; idx < rep.points.size(); ++idx) {
    const auto& r = rep.points[idx];
    rep.max_minimality = std::max(rep.max_minimality, r.minimality);
    if (!r.regular) {
      flagged[idx] = 1;
      rep.nonregular.push_back(r);
      continue;
    }
    for (double d : r.circularity)
      if (!std::isnan(d)) rep.max_dev = std::max(rep.max_dev, d);
  }
  for (const auto& r : rep.nonregular) {
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        int i = r.i + di, j = r.j + dj;
        if (grid.periodic_u) i = (i + grid.nu) % grid.nu;
        if (grid.periodic_v) j = (j + grid.nv) % grid.nv;
        if (i < 0 || j < 0 || i >= grid.nu || j >= grid.nv) continue;
        if (flagged[grid.index(i, j)]) rep.nonregular_isolated = false;
      }
    }
  }
  rep.isotropic = rep.max_dev < options.circ_tol &&
                  rep.nonregular.size() < std::max<std::size_t>(1, grid.size() / 4);
  return rep;
}

AdaptedFrame adapted_frame(const OsculatingFlag& flag, const std::vector<double>& kappa, double circ_tol) {
  if (!flag.regular) throw PreconditionError("adapted frame requested at a non-regular point " + at(flag.point));
  const AmbientSpace& amb = flag.ambient;
  const Eigen::Index N = amb.dim;
  AdaptedFrame out;
  out.point = flag.point;
  out.position = flag.position;
  out.kappa = kappa;
  Mat e(amb.embedding_dim(), N);
  e.col(0) = flag.tangent.e1;
  e.col(1) = flag.tangent.e2;
  Eigen::Index col = 2;
  for (int k = 1; k <= flag.levels && col < N; ++k) {
    if (flag.ranks[static_cast<std::size_t>(k - 1)] != 2) break;
    if (static_cast<int>(kappa.size()) < k) throw ValidationError("missing normal curvature k_" + std::to_string(k));
    const double kk = kappa[static_cast<std::size_t>(k - 1)];
    const Vec& xi1 = flag.alpha(k + 1, k + 1);
    const Vec& xi2 = flag.alpha(k + 1, k);
    const Vec a = xi1.normalized();
    Vec b = xi2 - a.dot(xi2) * a;
    b.normalize();
    e.col(col) = a;
    e.col(col + 1) = b;
    col += 2;
    out.relation_residual = std::max({out.relation_residual, (xi1 - kk * a).norm(), (xi2 - kk * b).norm()});
  }
  if (col < N) {
    const Mat Q = e.leftCols(col);
    Mat basis = amb.is_sphere() ? append_cols(flag.position, Q) : Q;
    Eigen::JacobiSVD<Mat> svd(basis, Eigen::ComputeFullU);
    Vec c = svd.matrixU().col(basis.rows() - 1);
    e.col(col) = c;
    if (oriented_det(amb, flag.position, e) < 0.0) e.col(col) = -c;
  }
  double scale = 1.0;
  for (double k : kappa) scale = std::max(scale, k);
  if (out.relation_residual > circ_tol * scale) {
    throw PreconditionError("ellipses of curvature are not circles at " + at(flag.point) + " (defect " +
                            std::to_string(out.relation_residual) + ")");
  }
  out.frame = std::move(e);
  return out;
}

AdaptedFrame adapted_frame(const OsculatingFlag& flag, const AnalysisOptions& options) {
  std::vector<double> kappa;
  for (int k = 1; k <= flag.levels; ++k) {
    if (flag.ranks[static_cast<std::size_t>(k - 1)] != 2) break;
    kappa.push_back(curvature_ellipse(flag, k, options.phi_samples).kappa);
  }
  return adapted_frame(flag, kappa, options.circ_tol);
}

namespace {

Mat frame_at(const SurfaceChart& chart, const Vec2& q, const FrameOptions& options) {
  return frame_values(frame_jets(chart, q, 0, options));
}

void check_gauge(const Mat& a, const Mat& b, const Vec2& p) {
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    if (a.col(c).dot(b.col(c)) < 0.5) {
      throw GaugeError("frame vector e" + std::to_string(c + 1) + " jumps near " + at(p) +
                       "; reduce the difference step");
    }
  }
}

// Derivative of the frame along a coordinate axis; second order, one-sided at
// a non-periodic boundary.
Mat frame_derivative(const SurfaceChart& chart, const Vec2& p, const Mat& F0, int axis, double h,
                     const FrameOptions& options) {
  Vec2 d = Vec2::Zero();
  d[axis] = h;
  const bool fwd = chart.admits(p + d), bwd = chart.admits(p - d);
  if (fwd && bwd) {
    const Mat Fp = frame_at(chart, p + d, options), Fm = frame_at(chart, p - d, options);
    check_gauge(F0, Fp, p);
    check_gauge(F0, Fm, p);
    return (Fp - Fm) / (2.0 * h);
  }
  const double sgn = fwd ? 1.0 : -1.0;
  const Mat F1 = frame_at(chart, p + sgn * d, options), F2 = frame_at(chart, p + 2.0 * sgn * d, options);
  check_gauge(F0, F1, p);
  check_gauge(F0, F2, p);
  return sgn * (-3.0 * F0 + 4.0 * F1 - F2) / (2.0 * h);
}

}  // namespace

ConnectionForms connection_forms(const SurfaceChart& chart, const Vec2& p, double step, const FrameOptions& options) {
  if (!(step > 0.0)) throw ValidationError("difference step must be positive");
  const Mat F0 = frame_at(chart, p, options);
  const Mat Fu = frame_derivative(chart, p, F0, 0, step, options);
  const Mat Fv = frame_derivative(chart, p, F0, 1, step, options);
  const Mat2 C = tangent_data(chart, p).coord_frame;
  const int N = static_cast<int>(F0.cols());
  ConnectionForms w;
  w.point = p;
  w.dim = N;
  w.step = step;
  w.table.assign(static_cast<std::size_t>(N * N), OneForm::Zero());
  const Mat Du = F0.transpose() * Fu, Dv = F0.transpose() * Fv;  // <e_b, d e_a>
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) {
      const double wu = 0.5 * (Du(b, a) - Du(a, b)), wv = 0.5 * (Dv(b, a) - Dv(a, b));
      OneForm f(C(0, 0) * wu + C(1, 0) * wv, C(0, 1) * wu + C(1, 1) * wv);
      w.table[static_cast<std::size_t>(a * N + b)] = f;
      w.table[static_cast<std::size_t>(b * N + a)] = -f;
    }
  }
  return w;
}

std::vector<ConnectionForms> connection_forms(const SurfaceChart& chart, const GridSpec& grid, double step,
                                              const AnalysisOptions& options) {
  std::vector<ConnectionForms> out(grid.size());
  const FrameOptions fo{options.rank_tol};
  parallel_for(
      grid.size(),
      [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(grid.nu));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(grid.nu));
        out[idx] = connection_forms(chart, grid.node(i, j), step, fo);
      },
      options.jobs);
  return out;
}

double IdentityResiduals::max() const { return std::max({con1, con2, con3, coni, conii, coniii}); }

IdentityResiduals connection_identity_residuals(const ConnectionForms& w, const AmbientSpace& ambient) {
  const int N = ambient.dim;
  const bool odd = N % 2 == 1;
  const int full = odd ? (N - 1) / 2 - 1 : (N - 2) / 2;  // levels spanned by two frame vectors
  const std::complex<double> I(0.0, 1.0);
  auto dist = [](const OneForm& a, const OneForm& b) { return (a - b).cwiseAbs().maxCoeff(); };
  IdentityResiduals r;
  for (int s = 1; s <= full; ++s) {
    const int p = 2 * s - 1, q = 2 * s, a = 2 * s + 1, b = 2 * s + 2;
    r.con1 = std::max({r.con1, dist(w.omega(q, a), -hodge_star(w.omega(p, a))),
                       dist(w.omega(q, b), -hodge_star(w.omega(p, b)))});
    r.con2 = std::max({r.con2, dist(w.omega(p, b), hodge_star(w.omega(p, a))),
                       dist(w.omega(q, b), hodge_star(w.omega(q, a)))});
    r.coni = std::max({r.coni, std::abs(w.omega_E(p, b) + I * w.omega_E(p, a)),
                       std::abs(w.omega_E(q, a) - I * w.omega_E(p, a))});
    r.conii = std::max(r.conii, std::abs(w.omega_E(q, b) - w.omega_E(p, a)));
  }
  if (odd) {
    const int n = (N - 1) / 2;
    r.con3 = dist(w.omega(2 * n, 2 * n + 1), -hodge_star(w.omega(2 * n - 1, 2 * n + 1)));
    r.coniii = std::abs(w.omega_E(2 * n, 2 * n + 1) - I * w.omega_E(2 * n - 1, 2 * n + 1));
  }
  return r;
}

PolarChart::PolarChart(ChartPtr base, FrameOptions options)
    : SurfaceChart(base->label() + "-polar", base->ambient(), base->domain(), base->periods()),
      base_(std::move(base)),
      options_(options) {
  if (!ambient().is_sphere() || ambient().dim % 2 == 0) {
    throw ValidationError("polar surface needs a chart in an odd-dimensional sphere");
  }
}

JetVector PolarChart::expand(const Vec2& p, int order) const {
  return frame_jets(*base_, p, order, options_).frame.back();
}

PolarSample polar_surface(const ChartPtr& chart, const GridSpec& grid, const AnalysisOptions& options) {
  const auto polar = std::make_shared<PolarChart>(chart, FrameOptions{options.rank_tol});
  PolarSample out;
  const Eigen::Index D = chart->ambient().embedding_dim();
  out.surface = SampledImmersion{grid, Mat::Zero(D, static_cast<Eigen::Index>(grid.size())), chart->ambient()};
  out.conformal_factor.assign(grid.size(), 0.0);
  out.conformality_dev.assign(grid.size(), 0.0);
  out.excluded.assign(grid.size(), false);
  parallel_for(
      grid.size(),
      [&](std::size_t idx) {
        const int i = static_cast<int>(idx % static_cast<std::size_t>(grid.nu));
        const int j = static_cast<int>(idx / static_cast<std::size_t>(grid.nu));
        const Vec2 p = grid.node(i, j);
        const OsculatingFlag f = osculating_flag(*chart, p, options.rank_tol);
        if (!f.regular) {
          out.excluded[idx] = true;
          return;
        }
        const JetVector y = polar->expand(p, 1);
        out.surface.points.col(static_cast<Eigen::Index>(idx)) = values(y);
        const Mat d = derivatives_of_order(y, 1);
        const Mat2 C = f.tangent.coord_frame;
        const Mat2 G = C.transpose() * (d.transpose() * d) * C;
        const double tr = G(0, 0) + G(1, 1);
        out.conformal_factor[idx] = tr / 2.0;
        out.conformality_dev[idx] =
            tr > 0.0 ? std::hypot(G(0, 0) - G(1, 1), 2.0 * G(0, 1)) / tr : std::numeric_limits<double>::infinity();
      },
      options.jobs);
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!out.excluded[k]) out.max_conformality_dev = std::max(out.max_conformality_dev, out.conformality_dev[k]);
  return out;
}

double alpha3_cross_check(const SurfaceChart& chart, const Vec2& p, double step, double rank_tol) {
  const AmbientSpace& amb = chart.ambient();
  const OsculatingFlag f = osculating_flag(chart, p, rank_tol);
  const Eigen::Index D = amb.embedding_dim();
  Mat Q(D, 0);
  if (amb.is_sphere()) Q = append_cols(Q, f.position);
  Mat T(D, 2);
  T << f.tangent.e1, f.tangent.e2;
  Q = append_cols(append_cols(Q, T), f.bases.front());

  const Mat direct = project_out(Q, derivatives_of_order(jet_eval(chart, p, 3), 3));  // a = 3..0

  // Coordinate alpha^2 at q, columns a = 2, 1, 0.
  auto alpha2 = [&](const Vec2& q) {
    const JetVector j = jet_eval(chart, q, 2);
    const Mat d1 = derivatives_of_order(j, 1);
    Mat B(D, 0);
    if (amb.is_sphere()) B = append_cols(B, values(j));
    Eigen::HouseholderQR<Mat> qr(append_cols(B, d1));
    const Mat O = qr.householderQ() * Mat::Identity(D, B.cols() + 2);
    return project_out(O, derivatives_of_order(j, 2));
  };
  const Vec2 du(step, 0.0), dv(0.0, step);
  const Mat Au = project_out(Q, (alpha2(p + du) - alpha2(p - du)) / (2.0 * step));
  const Mat Av = project_out(Q, (alpha2(p + dv) - alpha2(p - dv)) / (2.0 * step));
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    // d_u of alpha(d_u^a d_v^{2-a}) carries a+1 copies of d_u: column c of `direct`.
    worst = std::max(worst, (Au.col(c) - direct.col(c)).norm());
    worst = std::max(worst, (Av.col(c) - direct.col(c + 1)).norm());
  }
  return worst;
}

}  // namespace isosurf
