#include "isosurf/chart.hpp"

#include <cmath>

#include "isosurf/errors.hpp"

namespace isosurf {

AmbientSpace AmbientSpace::sphere(int n) {
  if (n < 2) throw ValidationError("sphere ambient dimension must be at least 2");
  return {AmbientKind::Sphere, n};
}

AmbientSpace AmbientSpace::euclidean(int n) {
  if (n < 2) throw ValidationError("euclidean ambient dimension must be at least 2");
  return {AmbientKind::Euclidean, n};
}

std::string to_string(AmbientKind kind) {
  return kind == AmbientKind::Sphere ? "sphere" : "euclidean";
}

AmbientKind parse_ambient_kind(const std::string& name) {
  if (name == "sphere") return AmbientKind::Sphere;
  if (name == "euclidean") return AmbientKind::Euclidean;
  if (name == "hyperbolic") {
    throw ValidationError("hyperbolic ambient space is not supported");
  }
  throw ValidationError("unknown ambient kind '" + name + "'");
}

bool Domain::contains(const Vec2& p, double slack) const {
  const double su = slack * std::max(1.0, u1 - u0);
  const double sv = slack * std::max(1.0, v1 - v0);
  return p.x() >= u0 - su && p.x() <= u1 + su && p.y() >= v0 - sv && p.y() <= v1 + sv;
}

SurfaceChart::SurfaceChart(std::string label, AmbientSpace ambient, Domain domain,
                           std::vector<Vec2> periods)
    : label_(std::move(label)), ambient_(ambient), domain_(domain), periods_(std::move(periods)) {
  if (!(domain_.u1 > domain_.u0) || !(domain_.v1 > domain_.v0)) {
    throw ValidationError("chart '" + label_ + "': empty parameter domain");
  }
  if (periods_.size() > 2) throw ValidationError("chart '" + label_ + "': more than two periods");
  for (const auto& s : periods_) {
    if (s.norm() == 0.0) throw ValidationError("chart '" + label_ + "': zero period");
  }
  if (periods_.size() == 2) {
    Mat2 P;
    P << periods_[0], periods_[1];
    if (std::abs(P.determinant()) < 1e-12) {
      throw ValidationError("chart '" + label_ + "': dependent periods");
    }
  }
}

bool SurfaceChart::admits(const Vec2& p) const {
  if (domain_.contains(p)) return true;
  if (periods_.size() == 2) return true;
  if (periods_.size() == 1) {
    const Vec2& s = periods_[0];
    const double k = std::round((p - domain_.center()).dot(s) / s.squaredNorm());
    return domain_.contains(p - k * s);
  }
  return false;
}

FormulaChart::FormulaChart(std::string label, AmbientSpace ambient, Domain domain,
                           std::vector<Vec2> periods, Formula formula)
    : SurfaceChart(std::move(label), ambient, domain, std::move(periods)),
      formula_(std::move(formula)) {
  const auto k = static_cast<Eigen::Index>(formula_.components.size());
  const Eigen::Index D = ambient.embedding_dim();
  if (formula_.linear) {
    if (formula_.linear->rows() != D || formula_.linear->cols() != k) {
      throw ValidationError("chart '" + this->label() + "': linear map has wrong shape");
    }
  } else if (k != D) {
    throw ValidationError("chart '" + this->label() + "': formula has " + std::to_string(k) +
                          " components, embedding dimension is " + std::to_string(D));
  }
}

JetVector FormulaChart::expand(const Vec2& p, int order) const {
  const Jet2 u = Jet2::variable_u(order, p.x());
  const Jet2 v = Jet2::variable_v(order, p.y());
  JetVector comps;
  comps.reserve(formula_.components.size());
  for (const auto& e : formula_.components) comps.push_back(e.evaluate(u, v));
  if (!formula_.linear) {
    if (formula_.scale != 1.0) {
      for (auto& c : comps) c *= formula_.scale;
    }
    return comps;
  }
  const Mat& L = *formula_.linear;
  JetVector out(static_cast<std::size_t>(L.rows()), Jet2(order));
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    for (Eigen::Index j = 0; j < L.cols(); ++j) {
      if (L(i, j) != 0.0) out[static_cast<std::size_t>(i)] += L(i, j) * comps[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] *= formula_.scale;
  }
  return out;
}

JetVector jet_eval(const SurfaceChart& chart, const Vec2& p, int order) {
  if (order < 0 || order > Jet2::kMaxOrder) throw ValidationError("jet order out of range");
  if (!chart.admits(p)) {
    throw ValidationError("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                          ") outside the domain of chart '" + chart.label() + "'");
  }
  JetVector jets = chart.expand(p, order);
  if (static_cast<int>(jets.size()) != chart.ambient().embedding_dim()) {
    throw ValidationError("chart '" + chart.label() + "' returned wrong number of coordinates");
  }
  const std::size_t n = Jet2::size_for(order);
  for (const auto& j : jets) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(j[i])) {
        throw EvaluationError("chart '" + chart.label() + "' is not smooth at (" +
                              std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")");
      }
    }
  }
  if (chart.ambient().is_sphere()) {
    double r2 = 0.0;
    for (const auto& j : jets) r2 += j.value() * j.value();
    if (std::abs(std::sqrt(r2) - 1.0) > 1e-9) {
      throw ValidationError("chart '" + chart.label() + "' leaves the unit sphere (|x| = " +
                            std::to_string(std::sqrt(r2)) + ")");
    }
  }
  return jets;
}

Vec position(const SurfaceChart& chart, const Vec2& p) {
  const JetVector j = jet_eval(chart, p, 0);
  Vec x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) x[static_cast<Eigen::Index>(i)] = j[i].value();
  return x;
}

Mat derivatives_of_order(const JetVector& jets, int s) {
  Mat d(static_cast<Eigen::Index>(jets.size()), s + 1);
  for (int col = 0; col <= s; ++col) {
    const int a = s - col;
    for (std::size_t i = 0; i < jets.size(); ++i) {
      d(static_cast<Eigen::Index>(i), col) = jets[i].derivative(a, s - a);
    }
  }
  return d;
}

Mat2 first_fundamental_form(const SurfaceChart& chart, const Vec2& p) {
  const Mat d = derivatives_of_order(jet_eval(chart, p, 1), 1);
  Mat2 g = d.transpose() * d;
  g(0, 1) = g(1, 0) = 0.5 * (g(0, 1) + g(1, 0));
  const double tr = g.trace();
  if (!(g.determinant() > 1e-14 * tr * tr) || !(tr > 0.0)) {
    throw DegenerateMetricError("degenerate first fundamental form at (" + std::to_string(p.x()) +
                                ", " + std::to_string(p.y()) + ") of chart '" + chart.label() +
                                "'");
  }
  return g;
}

Mat2 complex_structure_coords(const Mat2& g) {
  const double r = std::sqrt(g.determinant());
  Mat2 J;
  J << -g(0, 1), -g(1, 1), g(0, 0), g(0, 1);
  return J / r;
}

TangentData tangent_data(const SurfaceChart& chart, const Vec2& p, const TangentData* gauge) {
  TangentData t;
  t.point = p;
  t.metric = first_fundamental_form(chart, p);
  const Mat d = derivatives_of_order(jet_eval(chart, p, 1), 1);
  const double guu = t.metric(0, 0), guv = t.metric(0, 1);
  const double det = t.metric.determinant();
  // e1 = x_u / |x_u|, e2 = (x_v - <x_v, e1> e1) / |...|
  t.coord_frame << 1.0 / std::sqrt(guu), -guv / std::sqrt(guu * det), 0.0, std::sqrt(guu / det);
  if (gauge != nullptr) {
    const Vec e1 = d * t.coord_frame.col(0);
    const Vec e2 = d * t.coord_frame.col(1);
    const double c = gauge->e1.dot(e1) + gauge->e2.dot(e2);
    const double s = gauge->e1.dot(e2) - gauge->e2.dot(e1);
    const double phi = std::atan2(s, c);
    Mat2 R;
    R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    t.coord_frame = t.coord_frame * R;
  }
  t.e1 = d * t.coord_frame.col(0);
  t.e2 = d * t.coord_frame.col(1);
  t.J << 0.0, -1.0, 1.0, 0.0;
  t.E = t.e1.cast<std::complex<double>>() - std::complex<double>(0, 1) * t.e2.cast<std::complex<double>>();
  return t;
}

OneForm hodge_star(const OneForm& w) { return {-w.y(), w.x()}; }

std::complex<double> on_E(const OneForm& w) { return {w.x(), -w.y()}; }

}  // namespace isosurf
