#include "isosurf/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isosurf/errors.hpp"
#include "isosurf/parallel.hpp"

namespace isosurf {

namespace {

struct Series {
  std::vector<Mat> u, v;
};

int clamp_taylor_order(const AmbientSpace& amb, int k) {
  return std::clamp(k, 2, Jet2::kMaxOrder - frame_derivative_order(amb));
}

StructureJets rotated_jets(const SurfaceChart& chart, const Vec2& p, double theta, int order,
                           const FrameOptions& fo) {
  return rotate_second_fundamental_form(structure_jets(chart, p, order, fo), theta);
}

// Pure-u series of A_u and pure-v series of A_v about p, K terms each.
Series node_series(const SurfaceChart& chart, const Vec2& p, double theta, int K, const FrameOptions& fo) {
  const StructureJets s = rotated_jets(chart, p, theta, K - 1, fo);
  Series out;
  for (int k = 0; k < K; ++k) {
    out.u.push_back(s.Au.coefficient(k, 0));
    out.v.push_back(s.Av.coefficient(0, k));
  }
  return out;
}

// Taylor solution of F' = F A(t) with A(t) = sum_k A_k t^k, evaluated at t = h.
Mat taylor_step(const Mat& F0, const std::vector<Mat>& A, double h) {
  std::vector<Mat> C{F0};
  Mat sum = F0;
  double hp = 1.0;
  for (std::size_t k = 0; k < A.size(); ++k) {
    Mat next = Mat::Zero(F0.rows(), F0.cols());
    for (std::size_t j = 0; j <= k; ++j) next += C[j] * A[k - j];
    next /= static_cast<double>(k + 1);
    hp *= h;
    sum += hp * next;
    C.push_back(std::move(next));
  }
  return sum;
}

Mat polar_factor(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// Projects F back onto the frame group; returns the removed drift.
double reorthonormalize(const AmbientSpace& amb, Mat& F) {
  const Eigen::Index n = F.rows();
  if (amb.is_sphere()) {
    const double drift = (F.transpose() * F - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    F = polar_factor(F);
    return drift;
  }
  const Mat E = F.block(1, 1, n - 1, n - 1);
  const double drift = (E.transpose() * E - Mat::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff();
  F.block(1, 1, n - 1, n - 1) = polar_factor(E);
  F.row(0).setZero();
  F(0, 0) = 1.0;
  return drift;
}

Vec frame_position(const AmbientSpace& amb, const Mat& F) {
  if (amb.is_sphere()) return F.col(0);
  return F.block(1, 0, F.rows() - 1, 1);
}

Mat initial_frame(const SurfaceChart& chart, const Vec2& p, const FrameOptions& fo) {
  const FrameJets f = frame_jets(chart, p, 0, fo);
  Vec x(static_cast<Eigen::Index>(f.position.size()));
  for (std::size_t i = 0; i < f.position.size(); ++i) x[static_cast<Eigen::Index>(i)] = f.position[i].value();
  return frame_matrix(chart.ambient(), x, frame_values(f));
}

// Transport F from p by h along `axis`, in `sub` Taylor steps; `first` is the
// series at p if already known.
Mat transport(const SurfaceChart& chart, Mat F, const Vec2& p, int axis, double h, int sub, double theta, int K,
              const FrameOptions& fo, const Series* first) {
  const double dh = h / sub;
  for (int k = 0; k < sub; ++k) {
    Vec2 q = p;
    q[axis] += k * dh;
    Series local;
    const Series* s = first;
    if (k > 0 || s == nullptr) {
      local = node_series(chart, q, theta, K, fo);
      s = &local;
    }
    F = taylor_step(F, axis == 0 ? s->u : s->v, dh);
  }
  return F;
}

}  // namespace

double family_compatibility(const SurfaceChart& chart, const GridSpec& grid, double theta, const FrameOptions& fo) {
  double worst = 0.0;
  for (int a : {0, grid.nu / 2, grid.nu - 1}) {
    for (int b : {0, grid.nv / 2, grid.nv - 1}) {
      worst = std::max(worst, compatibility_residual(rotated_jets(chart, grid.node(a, b), theta, 1, fo)));
    }
  }
  return worst;
}

FamilyResult integrate_family(const SurfaceChart& chart, const GridSpec& grid, const FamilyParams& params) {
  if (params.substeps < 1) throw ValidationError("substeps must be positive");
  const AmbientSpace& amb = chart.ambient();
  const FrameOptions fo{params.rank_tol};
  const int K = clamp_taylor_order(amb, params.taylor_order);
  const double theta = params.theta;

  FamilyResult res;
  res.theta = theta;
  res.ambient = amb;
  res.compat_residual = family_compatibility(chart, grid, theta, fo);
  if (res.compat_residual > params.compat_tol) {
    throw CompatibilityError("rotated structure equations of chart '" + chart.label() +
                             "' are not integrable at theta = " + std::to_string(theta) + " (defect " +
                             std::to_string(res.compat_residual) + "); the surface is not minimal");
  }

  const int nu = grid.nu, nv = grid.nv;
  const double du = grid.step_u(), dv = grid.step_v();
  res.frames.assign(grid.size(), Mat());
  res.surface = SampledImmersion{grid, Mat(amb.embedding_dim(), static_cast<Eigen::Index>(grid.size())), amb};

  auto series_line = [&](int count, auto node_of) {
    std::vector<Series> out(static_cast<std::size_t>(count));
    parallel_for(
        out.size(), [&](std::size_t k) { out[k] = node_series(chart, node_of(static_cast<int>(k)), theta, K, fo); },
        params.jobs);
    return out;
  };
  auto step_and_fix = [&](Mat F, const Vec2& p, int axis, double h, const Series& s) {
    F = transport(chart, std::move(F), p, axis, h, params.substeps, theta, K, fo, &s);
    res.max_drift = std::max(res.max_drift, reorthonormalize(amb, F));
    return F;
  };

  const Mat F00 = initial_frame(chart, grid.node(0, 0), fo);

  // Row-first: along v = v0, then up every column.
  std::vector<Mat> base(static_cast<std::size_t>(nu));
  {
    const auto row = series_line(nu - 1, [&](int i) { return grid.node(i, 0); });
    base[0] = F00;
    for (int i = 0; i + 1 < nu; ++i) base[static_cast<std::size_t>(i + 1)] =
        step_and_fix(base[static_cast<std::size_t>(i)], grid.node(i, 0), 0, du, row[static_cast<std::size_t>(i)]);
  }
  // Column-first: along u = u0, then along every row.
  std::vector<Mat> alt(static_cast<std::size_t>(nv));
  if (params.path_check) {
    const auto col = series_line(nv - 1, [&](int j) { return grid.node(0, j); });
    alt[0] = F00;
    for (int j = 0; j + 1 < nv; ++j) alt[static_cast<std::size_t>(j + 1)] =
        step_and_fix(alt[static_cast<std::size_t>(j)], grid.node(0, j), 1, dv, col[static_cast<std::size_t>(j)]);
  }

  std::vector<Series> prev;
  for (int i = 0; i < nu; ++i) {
    const auto cur = series_line(nv, [&](int j) { return grid.node(i, j); });
    Mat F = base[static_cast<std::size_t>(i)];
    for (int j = 0; j < nv; ++j) {
      if (j > 0) F = step_and_fix(F, grid.node(i, j - 1), 1, dv, cur[static_cast<std::size_t>(j - 1)]);
      const std::size_t idx = grid.index(i, j);
      res.frames[idx] = F;
      res.surface.points.col(static_cast<Eigen::Index>(idx)) = frame_position(amb, F);
      if (params.path_check) {
        if (i > 0) {
          alt[static_cast<std::size_t>(j)] =
              step_and_fix(alt[static_cast<std::size_t>(j)], grid.node(i - 1, j), 0, du, prev[static_cast<std::size_t>(j)]);
        }
        res.path_defect = std::max(
            res.path_defect, (frame_position(amb, alt[static_cast<std::size_t>(j)]) - frame_position(amb, F)).norm());
      }
    }
    prev = cur;
  }
  return res;
}

FamilyMemberChart::FamilyMemberChart(ChartPtr base, const GridSpec& grid, const FamilyParams& params)
    : SurfaceChart(base->label() + "@theta=" + std::to_string(params.theta), base->ambient(), grid.domain, {}),
      base_(std::move(base)),
      grid_(grid),
      params_(params),
      result_(std::make_shared<FamilyResult>(integrate_family(*base_, grid, params))) {}

JetVector FamilyMemberChart::expand(const Vec2& p, int order) const {
  const AmbientSpace& amb = ambient();
  const FrameOptions fo{params_.rank_tol};
  const int K = clamp_taylor_order(amb, params_.taylor_order);
  const int i = std::clamp(static_cast<int>(std::lround((p.x() - grid_.domain.u0) / grid_.step_u())), 0, grid_.nu - 1);
  const int j = std::clamp(static_cast<int>(std::lround((p.y() - grid_.domain.v0) / grid_.step_v())), 0, grid_.nv - 1);
  const Vec2 node = grid_.node(i, j);
  Mat F = result_->frames[grid_.index(i, j)];
  const double hu = p.x() - node.x(), hv = p.y() - node.y();
  // Sub-steps of at most 0.05 keep off-node values at the accuracy of the nodes.
  const auto sub = [&](double h) { return std::max(params_.substeps, static_cast<int>(std::ceil(std::abs(h) / 0.05))); };
  if (hu != 0.0) F = transport(*base_, F, node, 0, hu, sub(hu), params_.theta, K, fo, nullptr);
  if (hv != 0.0) F = transport(*base_, F, {p.x(), node.y()}, 1, hv, sub(hv), params_.theta, K, fo, nullptr);
  if (hu != 0.0 || hv != 0.0) reorthonormalize(amb, F);

  const Eigen::Index D = amb.embedding_dim();
  const Eigen::Index row0 = amb.is_sphere() ? 0 : 1;
  JetVector out(static_cast<std::size_t>(D), Jet2(order));
  if (order == 0) {
    for (Eigen::Index r = 0; r < D; ++r) out[static_cast<std::size_t>(r)][0] = F(row0 + r, 0);
    return out;
  }
  const StructureJets s = rotated_jets(*base_, p, params_.theta, order - 1, fo);
  // C[a][b]: coefficient of u^a v^b of the frame matrix.
  std::vector<std::vector<Mat>> C(static_cast<std::size_t>(order + 1));
  for (int a = 0; a <= order; ++a) C[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(order + 1 - a));
  C[0][0] = F;
  for (int b = 0; b < order; ++b) {
    Mat acc = Mat::Zero(F.rows(), F.cols());
    for (int b1 = 0; b1 <= b; ++b1) acc += C[0][static_cast<std::size_t>(b1)] * s.Av.coefficient(0, b - b1);
    C[0][static_cast<std::size_t>(b + 1)] = acc / (b + 1);
  }
  for (int a = 0; a < order; ++a) {
    for (int b = 0; a + 1 + b <= order; ++b) {
      Mat acc = Mat::Zero(F.rows(), F.cols());
      for (int a1 = 0; a1 <= a; ++a1)
        for (int b1 = 0; b1 <= b; ++b1)
          acc += C[static_cast<std::size_t>(a1)][static_cast<std::size_t>(b1)] * s.Au.coefficient(a - a1, b - b1);
      C[static_cast<std::size_t>(a + 1)][static_cast<std::size_t>(b)] = acc / (a + 1);
    }
  }
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b)
      for (Eigen::Index r = 0; r < D; ++r)
        out[static_cast<std::size_t>(r)].coeff(a, b) = C[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)](row0 + r, 0);
  return out;
}

PathSamples sample_path(const SurfaceChart& chart, const Vec2& start, const Vec2& delta, int steps,
                        const FrameOptions& options, int jobs) {
  if (steps < 1) throw ValidationError("path needs at least one step");
  PathSamples ps;
  ps.start = start;
  ps.delta = delta;
  ps.steps = steps;
  ps.ambient = chart.ambient();
  const std::size_t n = static_cast<std::size_t>(2 * steps + 1);
  ps.Au.resize(n);
  ps.Av.resize(n);
  ps.J.resize(n);
  parallel_for(
      n,
      [&](std::size_t k) {
        const Vec2 q = start + (static_cast<double>(k) / static_cast<double>(2 * steps)) * delta;
        const StructureJets s = structure_jets(chart, q, 0, options);
        ps.Au[k] = s.Au.value();
        ps.Av[k] = s.Av.value();
        ps.J[k] = s.J.value();
      },
      jobs);
  ps.F0 = initial_frame(chart, start, options);
  return ps;
}

Mat path_transport(const PathSamples& path, double theta) {
  const auto n = static_cast<std::size_t>(2 * path.steps + 1);
  std::vector<Mat> A(n);
  for (std::size_t k = 0; k < n; ++k) {
    Mat au = path.Au[k], av = path.Av[k];
    rotate_second_fundamental_form(au, av, path.J[k], theta);
    A[k] = path.delta.x() * au + path.delta.y() * av;
  }
  const double h = 1.0 / path.steps;
  Mat P = Mat::Identity(A[0].rows(), A[0].cols());
  for (int s = 0; s < path.steps; ++s) {
    const Mat& a0 = A[static_cast<std::size_t>(2 * s)];
    const Mat& am = A[static_cast<std::size_t>(2 * s + 1)];
    const Mat& a1 = A[static_cast<std::size_t>(2 * s + 2)];
    const Mat k1 = P * a0;
    const Mat k2 = (P + 0.5 * h * k1) * am;
    const Mat k3 = (P + 0.5 * h * k2) * am;
    const Mat k4 = (P + h * k3) * a1;
    P += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return P;
}

MonodromyEvaluator::MonodromyEvaluator(const SurfaceChart& chart, int steps, const FrameOptions& options, int jobs) {
  for (const Vec2& sigma : chart.periods()) {
    const Vec2 start = chart.domain().center() - 0.5 * sigma;
    paths_.push_back(sample_path(chart, start, sigma, steps, options, jobs));
  }
}

MonodromyRecord MonodromyEvaluator::operator()(double theta) const {
  MonodromyRecord rec;
  rec.theta = theta;
  for (const auto& path : paths_) {
    const Mat P = path_transport(path, theta);
    const Mat phi = path.F0 * P * path.F0.inverse();
    const Eigen::Index n = phi.rows();
    const double dist = Eigen::JacobiSVD<Mat>(phi - Mat::Identity(n, n)).singularValues()[0];
    const Mat iso = path.ambient.is_sphere() ? phi : Mat(phi.bottomRightCorner(n - 1, n - 1));
    rec.orthogonality = std::max(
        rec.orthogonality, (iso.transpose() * iso - Mat::Identity(iso.rows(), iso.cols())).cwiseAbs().maxCoeff());
    rec.dist.push_back(dist);
    rec.defect = std::max(rec.defect, dist);
    rec.phi.push_back(phi);
  }
  return rec;
}

double MonodromyEvaluator::defect(double theta) const { return (*this)(theta).defect; }

Mat loop_holonomy(const SurfaceChart& chart, double theta, const Vec2& corner, const Vec2& size, int steps,
                  const FrameOptions& options) {
  const std::vector<std::pair<Vec2, Vec2>> legs{{corner, {size.x(), 0.0}},
                                                 {corner + Vec2(size.x(), 0.0), {0.0, size.y()}},
                                                 {corner + size, {-size.x(), 0.0}},
                                                 {corner + Vec2(0.0, size.y()), {0.0, -size.y()}}};
  Mat P;
  for (const auto& [start, delta] : legs) {
    const Mat leg = path_transport(sample_path(chart, start, delta, steps, options, 1), theta);
    P = P.size() == 0 ? leg : Mat(P * leg);
  }
  return P;
}

ModuliResult moduli_scan(const SurfaceChart& chart, const ModuliOptions& options) {
  if (options.samples < 4) throw ValidationError("moduli scan needs at least 4 samples");
  ModuliResult res;
  if (!chart.is_periodic()) {
    throw PreconditionError("moduli scan needs a chart with periods; '" + chart.label() + "' has none");
  }
  const MonodromyEvaluator eval(chart, options.path_steps, FrameOptions{options.rank_tol}, options.jobs);
  res.periodic = eval.periodic();
  const int n = options.samples;
  const double step = std::numbers::pi / n;
  for (int k = 0; k < n; ++k) {
    res.thetas.push_back(k * step);
    res.defects.push_back(eval.defect(k * step));
  }
  if (!res.periodic || std::all_of(res.defects.begin(), res.defects.end(),
                                   [&](double d) { return d < options.close_tol; })) {
    res.classification = "circle";
    return res;
  }

  bool ambiguous = false;
  // The defect has period pi (g_{theta+pi} is congruent to g_theta); report
  // members in [0, pi) with values just below pi folded onto 0.
  auto wrap = [](double t) {
    t = std::fmod(t, std::numbers::pi);
    if (t < 0.0) t += std::numbers::pi;
    return std::numbers::pi - t < 1e-8 ? 0.0 : t;
  };
  for (int k = 0; k < n; ++k) {
    const double d = res.defects[static_cast<std::size_t>(k)];
    const double l = res.defects[static_cast<std::size_t>((k + n - 1) % n)];
    const double r = res.defects[static_cast<std::size_t>((k + 1) % n)];
    if (!(d <= l && d <= r)) continue;
    // Golden-section refinement on the bracketing cells.
    double a = (k - 1) * step, b = (k + 1) * step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), e = a + g * (b - a);
    double fc = eval.defect(c), fe = eval.defect(e);
    while (b - a > options.refine_tol) {
      if (fc < fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - g * (b - a);
        fc = eval.defect(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + g * (b - a);
        fe = eval.defect(e);
      }
    }
    double best = 0.5 * (a + b), fbest = eval.defect(best);
    if (d < fbest) {
      best = k * step;
      fbest = d;
    }
    if (fbest < options.close_tol) {
      best = wrap(best);
      const bool dup = std::any_of(res.members.begin(), res.members.end(), [&](double m) {
        const double dist = std::abs(m - best);
        return std::min(dist, std::numbers::pi - dist) < 1e-6;
      });
      if (!dup) {
        res.members.push_back(best);
        res.member_defects.push_back(fbest);
      }
    } else if (fbest < options.ambiguity * options.close_tol) {
      ambiguous = true;
    }
  }
  for (std::size_t x = 0; x < res.members.size(); ++x) {
    for (std::size_t y = x + 1; y < res.members.size(); ++y) {
      const double dist = std::abs(res.members[x] - res.members[y]);
      if (std::min(dist, std::numbers::pi - dist) <= 2.0 * step) ambiguous = true;
    }
  }
  std::vector<std::size_t> order(res.members.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return res.members[x] < res.members[y]; });
  std::vector<double> m, md;
  for (std::size_t k : order) {
    m.push_back(res.members[k]);
    md.push_back(res.member_defects[k]);
  }
  res.members = std::move(m);
  res.member_defects = std::move(md);
  res.classification = ambiguous ? "inconclusive" : "finite";
  return res;
}

}  // namespace isosurf
