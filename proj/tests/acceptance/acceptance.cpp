// Acceptance battery: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "isosurf/catalog.hpp"
#include "isosurf/congruence.hpp"
#include "isosurf/family.hpp"
#include "isosurf/higher_forms.hpp"

using namespace isosurf;

namespace {

constexpr double kPi = std::numbers::pi;

ChartPtr chart(const char* label) { return catalog_get(label).chart; }

FamilyParams member(double theta) {
  FamilyParams p;
  p.theta = theta;
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok) { pass = pass && ok; }
};

int failures = 0;

void criterion(int id, const char* name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s:%s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.str().c_str(), seconds_since(t0));
  std::fflush(stdout);
}

// Interior probe points offset from the nodes, at most 16 per axis.
std::vector<Vec2> probes(const GridSpec& g) {
  std::vector<Vec2> pts;
  const int su = std::max(1, g.nu / 16), sv = std::max(1, g.nv / 16);
  for (int j = 0; j + 1 < g.nv; j += sv)
    for (int i = 0; i + 1 < g.nu; i += su) pts.push_back(g.node(i, j) + Vec2(0.37 * g.step_u(), 0.61 * g.step_v()));
  return pts;
}

}  // namespace

int main() {
  criterion(1, "analyzer exactness", [](Outcome& o) {
    for (const char* label : {"clifford-s3", "veronese-s4", "equilateral-s5", "holo-r4"}) {
      const auto& e = catalog_get(label);
      const auto t0 = std::chrono::steady_clock::now();
      const IsotropyReport r = isotropy_report(*e.chart, GridSpec::for_chart(*e.chart, 64));
      const double t = seconds_since(t0);
      bool ranks = r.nonregular.empty();
      for (const auto& p : r.points) ranks = ranks && p.ranks == e.expected.ranks;
      o.require(r.max_minimality < 1e-10 && ranks && r.max_dev < 1e-8 && t < 10.0);
      o.detail << " " << label << " H=" << r.max_minimality << " dev=" << r.max_dev << (ranks ? "" : " ranks!")
               << " " << t << "s;";
    }
  });

  criterion(2, "connection identities", [](Outcome& o) {
    const auto& c = *chart("equilateral-s5");
    const double h = 1e-3;
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> d(0.0, 2 * kPi);
    double worst_h = 0.0, worst_h2 = 0.0, worst_ratio = 1e300, best_ratio = 0.0;
    for (int k = 0; k < 5; ++k) {
      const Vec2 p(d(rng), d(rng));
      const ConnectionForms w1 = connection_forms(c, p, h), w2 = connection_forms(c, p, h / 2),
                            w4 = connection_forms(c, p, h / 4);
      worst_h = std::max(worst_h, connection_identity_residuals(w1, c.ambient()).max());
      worst_h2 = std::max(worst_h2, connection_identity_residuals(w2, c.ambient()).max());
      // The forms themselves carry the O(h^2) difference error; the
      // identities cancel it on this homogeneous torus.
      double e12 = 0.0, e24 = 0.0;
      for (std::size_t t = 0; t < w1.table.size(); ++t) {
        e12 = std::max(e12, (w1.table[t] - w2.table[t]).cwiseAbs().maxCoeff());
        e24 = std::max(e24, (w2.table[t] - w4.table[t]).cwiseAbs().maxCoeff());
      }
      worst_ratio = std::min(worst_ratio, e12 / e24);
      best_ratio = std::max(best_ratio, e12 / e24);
    }
    o.require(worst_h < 1e-6 && worst_h2 < 1e-6 && worst_ratio > 3.5 && best_ratio < 4.5);
    o.detail << " residual(h)=" << worst_h << " residual(h/2)=" << worst_h2 << " form error ratio in ["
             << worst_ratio << ", " << best_ratio << "]";
  });

  criterion(3, "associated family fidelity", [](Outcome& o) {
    const ChartPtr c = chart("equilateral-s5");
    const GridSpec g = GridSpec::for_chart(*c, 128);
    const SampledImmersion s = sample(*c, g);
    auto t0 = std::chrono::steady_clock::now();
    const double r0 = congruence_test(s, integrate_family(*c, g, member(0.0)).surface).residual;
    o.require(r0 < 1e-8);
    o.detail << " theta=0 residual " << r0 << ";";
    for (double theta : {kPi / 6, kPi / 4, kPi / 3}) {
      t0 = std::chrono::steady_clock::now();
      const FamilyMemberChart m(c, g, member(theta));
      double metric = 0.0, mean = 0.0, iso = 0.0;
      for (const Vec2& p : probes(g)) {
        metric = std::max(metric, (first_fundamental_form(m, p) - first_fundamental_form(*c, p)).cwiseAbs().maxCoeff());
        const OsculatingFlag f = osculating_flag(m, p);
        mean = std::max(mean, minimality_residual(f));
        iso = std::max(iso, curvature_ellipse(f, 1).circularity_dev);
      }
      const double t = seconds_since(t0);
      o.require(metric < 1e-5 && mean < 1e-5 && iso < 1e-5 && t < 60.0);
      o.detail << " theta=" << theta << ": metric " << metric << " H " << mean << " dev " << iso << " " << t << "s;";
    }
  });

  criterion(4, "even codimension congruence", [](Outcome& o) {
    for (const char* label : {"veronese-s4", "holo-r4"}) {
      const auto& c = *chart(label);
      const GridSpec g = GridSpec::for_chart(c, 32);
      const SampledImmersion s = sample(c, g);
      double worst = 0.0;
      for (double theta : {kPi / 6, kPi / 4, kPi / 3, 1.0, 2.0, 3.0})
        worst = std::max(worst, congruence_test(s, integrate_family(c, g, member(theta)).surface).residual);
      o.require(worst < 1e-5);
      o.detail << " " << label << " max residual " << worst << ";";
    }
  });

  criterion(5, "odd codimension noncongruence", [](Outcome& o) {
    const auto& c = *chart("equilateral-s5");
    for (int n : {32, 64}) {
      const GridSpec g = GridSpec::for_chart(c, n);
      const CongruenceResult r = congruence_test(sample(c, g), integrate_family(c, g, member(kPi / 4)).surface);
      o.require(!r.congruent && r.residual > 1e-2);
      o.detail << " grid " << n << " residual " << r.residual << ";";
    }
  });

  criterion(6, "polar surface", [](Outcome& o) {
    const ChartPtr c = chart("equilateral-s5");
    const GridSpec g = GridSpec::for_chart(*c, 32);
    const PolarSample p0 = polar_surface(c, g);
    const IsotropyReport iso = isotropy_report(PolarChart(c), g);
    o.require(iso.isotropic && iso.max_dev < 1e-6 && p0.max_conformality_dev < 1e-6);
    o.detail << " dev " << iso.max_dev << " conformality " << p0.max_conformality_dev << ";";
    for (double theta : {kPi / 6, kPi / 4, kPi / 3}) {
      const PolarSample pt = polar_surface(std::make_shared<FamilyMemberChart>(c, g, member(theta)), g);
      double diff = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k)
        if (!p0.excluded[k] && !pt.excluded[k]) diff = std::max(diff, std::abs(pt.conformal_factor[k] - p0.conformal_factor[k]));
      o.require(diff < 1e-5 && pt.max_conformality_dev < 1e-6);
      o.detail << " theta=" << theta << " factor diff " << diff << ";";
    }
  });

  criterion(7, "monodromy dichotomy", [](Outcome& o) {
    const auto& c = *chart("clifford-s3");
    std::vector<double> found[2];
    int k = 0;
    for (int steps : {360, 720}) {
      ModuliOptions mo;
      mo.samples = steps;
      const ModuliResult r = moduli_scan(c, mo);
      const bool has_zero = !r.members.empty() && std::abs(r.members.front()) < 1e-8;
      o.require(r.classification == "finite" && has_zero);
      o.detail << " " << steps << " steps: " << r.classification << " {";
      for (double t : r.members) o.detail << " " << t;
      o.detail << " };";
      found[k++] = r.members;
    }
    bool same = found[0].size() == found[1].size();
    for (std::size_t i = 0; same && i < found[0].size(); ++i) same = std::abs(found[0][i] - found[1][i]) < 1e-6;
    o.require(same);
  });

  criterion(8, "Takahashi check", [](Outcome& o) {
    for (const char* label : {"clifford-s3", "equilateral-s5"}) {
      const auto& c = *chart(label);
      const double ratio =
          takahashi_convergence(c, [&](const GridSpec& g) { return sample(c, g); }, GridSpec::for_chart(c, 32));
      o.require(ratio > 3.5 && ratio < 4.5);
      o.detail << " " << label << " ratio " << ratio << ";";
    }
  });

  criterion(9, "height independence", [](Outcome& o) {
    const auto& c = *chart("equilateral-s5");
    for (int n : {32, 64}) {
      const GridSpec g = GridSpec::for_chart(c, n);
      const HeightIndependence h = height_independence({sample(c, g), integrate_family(c, g, member(kPi / 4)).surface});
      o.require(h.independent && h.sigma_min > 1e-2);
      o.detail << " grid " << n << " sigma_min " << h.sigma_min << ";";
    }
  });

  criterion(10, "alpha^3 cross-definition", [](Outcome& o) {
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> d(0.05, 0.95);
    double worst = 0.0;
    for (const auto& e : catalog()) {
      const Domain& D = e.chart->domain();
      double w = 0.0;
      for (int k = 0; k < 20; ++k) {
        const Vec2 p(D.u0 + d(rng) * (D.u1 - D.u0), D.v0 + d(rng) * (D.v1 - D.v0));
        w = std::max(w, alpha3_cross_check(*e.chart, p));
      }
      worst = std::max(worst, w);
      o.require(w < 1e-6);
    }
    o.detail << " max discrepancy " << worst << " over " << catalog().size() << " charts";
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
