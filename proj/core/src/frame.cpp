#include "isosurf/frame.hpp"

#include <cmath>

#include "isosurf/errors.hpp"

namespace isosurf {

namespace {

Vec values(const JetVector& v) {
  Vec r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<Eigen::Index>(i)] = v[i].value();
  return r;
}

JetVector constant_vector(const Vec& c, int order) {
  JetVector r;
  r.reserve(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) r.emplace_back(order, c[i]);
  return r;
}

// Modified Gram-Schmidt step in jet arithmetic followed by normalisation.
JetVector orthonormalize_against(JetVector w, const std::vector<JetVector>& basis) {
  for (const auto& q : basis) {
    const Jet2 c = dot(w, q);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * q[i];
  }
  const Jet2 inv = reciprocal(sqrt(dot(w, w)));
  for (auto& x : w) x = x * inv;
  return w;
}

Mat as_matrix(const std::vector<JetVector>& cols) {
  if (cols.empty()) return {};
  Mat m(static_cast<Eigen::Index>(cols.front().size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = values(cols[j]);
  return m;
}

std::string where(const SurfaceChart& chart, const Vec2& p) {
  return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ") of chart '" + chart.label() + "'";
}

}  // namespace

int frame_derivative_order(const AmbientSpace& ambient) { return 1 + (ambient.dim - 2) / 2; }

FrameJets frame_jets(const SurfaceChart& chart, const Vec2& p, int order, const FrameOptions& options) {
  const AmbientSpace& amb = chart.ambient();
  const int levels = frame_derivative_order(amb);
  const JetVector x = jet_eval(chart, p, order + levels);
  const auto D = static_cast<std::size_t>(amb.embedding_dim());

  FrameJets out;
  out.order = order;
  out.position = truncated(x, order);

  std::vector<JetVector> basis;
  if (amb.is_sphere()) basis.push_back(orthonormalize_against(out.position, {}));

  for (int s = 1; s <= levels && D - basis.size() >= 2; ++s) {
    // Candidates of order s in the order d_u^s, d_u^{s-1} d_v, ..., d_v^s.
    std::vector<JetVector> cands;
    double scale = 0.0;
    for (int b = 0; b <= s; ++b) {
      JetVector d = x;
      for (int k = 0; k < s - b; ++k) d = diff_u(d);
      for (int k = 0; k < b; ++k) d = diff_v(d);
      d = truncated(d, order);
      scale = std::max(scale, values(d).norm());
      cands.push_back(std::move(d));
    }
    int accepted = 0;
    for (const auto& d : cands) {
      // A lone remaining slot at the start of a level is the final line
      // bundle (odd N); it is filled below by orientation instead.
      const std::size_t left = D - basis.size();
      if (accepted == 2 || left == 0 || (left == 1 && accepted == 0)) break;
      const Mat Q = as_matrix(basis);
      const Vec dv = values(d);
      const Vec r = Q.cols() > 0 ? Vec(dv - Q * (Q.transpose() * dv)) : dv;
      if (!(r.norm() > options.rank_tol * scale)) continue;
      basis.push_back(orthonormalize_against(d, basis));
      ++accepted;
    }
    if (s == 1 && accepted < 2) {
      throw DegenerateMetricError("tangent vectors dependent at " + where(chart, p));
    }
    if (s >= 2) out.level_ranks.push_back(accepted);
  }

  while (basis.size() < D) {
    const Mat Q = as_matrix(basis);
    if (D - basis.size() == 1) {
      // Unit normal of the osculating hyperplane, positively oriented.
      Eigen::JacobiSVD<Mat> svd(Q, Eigen::ComputeFullU);
      Vec c = svd.matrixU().col(static_cast<Eigen::Index>(D) - 1);
      Mat full(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
      full << Q, c;
      if (full.determinant() < 0.0) c = -c;
      basis.push_back(orthonormalize_against(constant_vector(c, order), basis));
    } else {
      Eigen::Index best = 0;
      double best_norm = -1.0;
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(D); ++k) {
        Vec ek = Vec::Unit(static_cast<Eigen::Index>(D), k);
        const double n = (ek - Q * (Q.transpose() * ek)).norm();
        if (n > best_norm + 1e-12) {
          best_norm = n;
          best = k;
        }
      }
      basis.push_back(orthonormalize_against(
          constant_vector(Vec::Unit(static_cast<Eigen::Index>(D), best), order), basis));
      ++out.completed;
    }
  }

  const std::size_t first = amb.is_sphere() ? 1 : 0;
  out.frame.assign(basis.begin() + static_cast<std::ptrdiff_t>(first), basis.end());
  return out;
}

Mat frame_values(const FrameJets& f) { return as_matrix(f.frame); }

Mat frame_matrix(const AmbientSpace& ambient, const Vec& x, const Mat& e) {
  const Eigen::Index n = e.cols();
  Mat F = Mat::Zero(n + 1, n + 1);
  if (ambient.is_sphere()) {
    F.col(0) = x;
    F.rightCols(n) = e;
  } else {
    F(0, 0) = 1.0;
    F.block(1, 0, n, 1) = x;
    F.block(1, 1, n, n) = e;
  }
  return F;
}

Mat MatrixJet::value() const {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

Mat MatrixJet::coefficient(int a, int b) const {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = (*this)(i, j).coeff(a, b);
  return m;
}

StructureJets structure_jets(const SurfaceChart& chart, const Vec2& p, int order,
                             const FrameOptions& options) {
  const AmbientSpace& amb = chart.ambient();
  const FrameJets f = frame_jets(chart, p, order + 1, options);
  const int n = amb.dim + 1;

  // Columns c_0 = x, c_k = e_k.
  std::vector<JetVector> cols;
  cols.push_back(f.position);
  for (const auto& e : f.frame) cols.push_back(e);
  std::vector<JetVector> du, dv, lo;
  for (const auto& c : cols) {
    du.push_back(diff_u(c));
    dv.push_back(diff_v(c));
    lo.push_back(truncated(c, order));
  }

  StructureJets s;
  for (MatrixJet* m : {&s.Au, &s.Av}) {
    m->rows = m->cols = n;
    m->entries.assign(static_cast<std::size_t>(n * n), Jet2(order));
  }
  for (int i = 1; i < n; ++i) {
    s.Au(i, 0) = dot(lo[static_cast<std::size_t>(i)], du[0]);
    s.Av(i, 0) = dot(lo[static_cast<std::size_t>(i)], dv[0]);
    if (amb.is_sphere()) {
      s.Au(0, i) = -s.Au(i, 0);
      s.Av(0, i) = -s.Av(i, 0);
    }
    for (int j = i + 1; j < n; ++j) {
      s.Au(i, j) = dot(lo[static_cast<std::size_t>(i)], du[static_cast<std::size_t>(j)]);
      s.Av(i, j) = dot(lo[static_cast<std::size_t>(i)], dv[static_cast<std::size_t>(j)]);
      s.Au(j, i) = -s.Au(i, j);
      s.Av(j, i) = -s.Av(i, j);
    }
  }

  const JetVector xu = truncated(du[0], order), xv = truncated(dv[0], order);
  const Jet2 g11 = dot(xu, xu), g12 = dot(xu, xv), g22 = dot(xv, xv);
  const Jet2 inv = reciprocal(sqrt(g11 * g22 - g12 * g12));
  s.J.rows = s.J.cols = 2;
  s.J.entries = {-(g12 * inv), -(g22 * inv), g11 * inv, g12 * inv};
  return s;
}

StructureJets rotate_second_fundamental_form(const StructureJets& s, double theta) {
  StructureJets r = s;
  const double c = std::cos(theta), sn = std::sin(theta);
  const int order = s.Au.order();
  auto Jt = [&](int a, int b) {
    Jet2 j = sn * s.J(a, b);
    if (a == b) j += c;
    return j;
  };
  const Jet2 j00 = Jt(0, 0), j01 = Jt(0, 1), j10 = Jt(1, 0), j11 = Jt(1, 1);
  for (int a = 3; a < s.Au.rows; ++a) {
    for (int i = 1; i <= 2; ++i) {
      const Jet2 au = s.Au(a, i), av = s.Av(a, i);
      r.Au(a, i) = j00 * au + j10 * av;
      r.Av(a, i) = j01 * au + j11 * av;
      r.Au(i, a) = -r.Au(a, i);
      r.Av(i, a) = -r.Av(a, i);
    }
  }
  (void)order;
  return r;
}

void rotate_second_fundamental_form(Mat& Au, Mat& Av, const Mat2& Jcoords, double theta) {
  const Mat2 Jt = std::cos(theta) * Mat2::Identity() + std::sin(theta) * Jcoords;
  for (Eigen::Index a = 3; a < Au.rows(); ++a) {
    for (Eigen::Index i = 1; i <= 2; ++i) {
      const double au = Au(a, i), av = Av(a, i);
      Au(a, i) = Jt(0, 0) * au + Jt(1, 0) * av;
      Av(a, i) = Jt(0, 1) * au + Jt(1, 1) * av;
      Au(i, a) = -Au(a, i);
      Av(i, a) = -Av(a, i);
    }
  }
}

double compatibility_residual(const StructureJets& s) {
  if (s.Au.order() < 1) throw ValidationError("compatibility residual needs jets of order >= 1");
  const Mat Au = s.Au.value(), Av = s.Av.value();
  const Mat R = s.Av.coefficient(1, 0) - s.Au.coefficient(0, 1) + Au * Av - Av * Au;
  return R.cwiseAbs().maxCoeff();
}

}  // namespace isosurf
