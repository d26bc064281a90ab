// Self-check battery run by `isosurf check`: every property recorded in a
// catalog entry's Expected block is recomputed and compared.
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cli.hpp"
#include <json.hpp>

#include "isosurf/catalog.hpp"
#include "isosurf/chart_io.hpp"
#include "isosurf/congruence.hpp"
#include "isosurf/errors.hpp"
#include "isosurf/family.hpp"
#include "isosurf/higher_forms.hpp"

namespace isosurf::cli {

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  return os.str();
}

// Seeded interior points at which the flag is regular.
std::vector<Vec2> sample_points(const SurfaceChart& chart, int count, double rank_tol) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  const Domain& d = chart.domain();
  std::vector<Vec2> pts;
  for (int tries = 0; tries < 50 * count && static_cast<int>(pts.size()) < count; ++tries) {
    const double a = unit(rng), b = unit(rng);
    const Vec2 p(d.u0 + a * (d.u1 - d.u0), d.v0 + b * (d.v1 - d.v0));
    if (osculating_flag(chart, p, rank_tol).regular) pts.push_back(p);
  }
  return pts;
}

// Copy of the chart on the right 40% of its u-range, away from a centred
// branch point; the family needs a regular domain.
ChartPtr regular_part(const FormulaChart& chart) {
  auto def = nlohmann::json::parse(chart_definition(chart));
  const double u0 = def["domain"]["u"][0], u1 = def["domain"]["u"][1];
  def["domain"]["u"][0] = u0 + 0.6 * (u1 - u0);
  def["label"] = chart.label() + "@regular";
  return parse_chart_definition(def.dump());
}

// Second-order convergence, or a residual already at rounding level (the
// stencil is exact on low-degree polynomials).
CheckRow takahashi_row(const SurfaceChart& chart, const GridSpec& g, int jobs, bool minimal) {
  const double r1 = takahashi_residual(chart, sample(chart, g, jobs), jobs).residual;
  const double r2 = takahashi_residual(chart, sample(chart, g.refined(), jobs), jobs).residual;
  const double ratio = r1 / r2;
  std::ostringstream os;
  os << "residual " << r1 << " -> " << r2;
  if (!minimal) return {"takahashi-nonzero", r2 > 1e-3 && std::abs(ratio - 1.0) < 0.2, ratio, os.str()};
  const bool pass = (ratio > 3.0 && ratio < 5.0) || std::max(r1, r2) < 1e-9;
  return {"takahashi-order", pass, ratio, os.str()};
}

}  // namespace

std::vector<CheckRow> check_catalog_entry(const std::string& label, const RunConfig& config) {
  const CatalogEntry& entry = catalog_get(label);
  const Expected& x = entry.expected;
  const ChartPtr chart = entry.chart;
  std::vector<CheckRow> rows;
  AnalysisOptions ao;
  ao.rank_tol = config.tol_rank;
  ao.circ_tol = config.tol_circ;
  ao.jobs = config.jobs;
  FrameOptions fo{config.tol_rank};
  const int n = config.grid > 0 ? config.grid : 24;
  // Odd resolution so that centred special points are nodes.
  const GridSpec odd = GridSpec::for_chart(*chart, n | 1);
  const GridSpec g = GridSpec::for_chart(*chart, n);
  const std::vector<Vec2> pts = sample_points(*chart, 3, config.tol_rank);

  rows.push_back({"ambient", chart->ambient() == x.ambient, static_cast<double>(chart->ambient().dim),
                  to_string(chart->ambient().kind)});
  if (!pts.empty()) {
    const OsculatingFlag f = osculating_flag(*chart, pts.front(), config.tol_rank);
    rows.push_back({"ranks", f.ranks == x.ranks, 0.0, "found " + join(f.ranks) + ", expected " + join(x.ranks)});
    rows.push_back({"substantial", f.substantial == x.substantial, 0.0, f.substantial ? "yes" : "no"});
  } else {
    rows.push_back({"ranks", false, 0.0, "no regular sample point"});
  }

  if (!x.minimal) {
    bool rejected = false;
    double trace = 0.0;
    try {
      (void)isotropy_report(*chart, odd, ao);
    } catch (const NonMinimalError& e) {
      rejected = true;
      trace = e.trace();
    }
    rows.push_back({"minimality-rejected", rejected, trace, "analyze refuses the chart"});
    bool incompatible = false;
    try {
      FamilyParams fp;
      fp.theta = std::numbers::pi / 6;
      fp.rank_tol = config.tol_rank;
      (void)integrate_family(*chart, g, fp);
    } catch (const CompatibilityError&) {
      incompatible = true;
    }
    rows.push_back({"family-incompatible", incompatible, 0.0, "theta = pi/6 must fail the integrability check"});
    rows.push_back(takahashi_row(*chart, g, config.jobs, false));
    return rows;
  }

  const IsotropyReport rep = isotropy_report(*chart, odd, ao);
  rows.push_back({"minimality", rep.max_minimality < 1e-8, rep.max_minimality, "relative mean curvature"});
  rows.push_back({"isotropy", rep.isotropic == x.isotropic, rep.max_dev, rep.isotropic ? "isotropic" : "not isotropic"});
  if (x.has_nonregular_node) {
    rows.push_back({"nonregular-isolated", !rep.nonregular.empty() && rep.nonregular_isolated,
                    static_cast<double>(rep.nonregular.size()), "isolated nonregular nodes"});
  } else if (x.isotropic) {
    rows.push_back({"nonregular-none", rep.nonregular.empty(), static_cast<double>(rep.nonregular.size()),
                    "no nonregular nodes"});
  }

  double a3 = 0.0;
  for (const Vec2& p : pts) a3 = std::max(a3, alpha3_cross_check(*chart, p, 1e-4, config.tol_rank));
  rows.push_back({"alpha3-cross-check", a3 < 1e-6, a3, "third form by projection vs by differentiation"});

  if (!x.isotropic) return rows;

  double ident = 0.0;
  for (const Vec2& p : pts)
    ident = std::max(ident, connection_identity_residuals(connection_forms(*chart, p, 2e-4, fo), chart->ambient()).max());
  rows.push_back({"connection-identities", ident < 1e-5, ident, "central differences, step 2e-4"});

  const ChartPtr fchart = x.has_nonregular_node ? regular_part(*entry.chart) : chart;
  const GridSpec fg = GridSpec::for_chart(*fchart, n);
  const std::string where = x.has_nonregular_node ? " (regular part)" : "";
  const SampledImmersion base = sample(*fchart, fg, config.jobs);
  FamilyParams fp;
  fp.rank_tol = config.tol_rank;
  fp.jobs = config.jobs;
  // Taylor steps lose accuracy near the branch point (radius of convergence).
  if (x.has_nonregular_node) fp.substeps = 4;
  const FamilyResult f0 = integrate_family(*fchart, fg, fp);
  const CongruenceResult c0 = congruence_test(base, f0.surface);
  rows.push_back({"family-theta0", c0.congruent, c0.residual, "reconstruction of the surface itself" + where});

  fp.theta = std::numbers::pi / 4;
  const FamilyResult fq = integrate_family(*fchart, fg, fp);
  const CongruenceResult cq = congruence_test(base, fq.surface);
  const bool even = chart->ambient().dim % 2 == 0;
  rows.push_back({"family-congruence", cq.congruent == even, cq.residual,
                  (even ? "members congruent to the surface" : "member at pi/4 not congruent") + where});
  const HeightIndependence hi = height_independence({base, fq.surface});
  rows.push_back({"height-independence", hi.independent == !even, hi.sigma_min, "heights of g and g_pi/4"});

  rows.push_back(takahashi_row(*chart, g, config.jobs, true));

  if (chart->ambient().kind == AmbientKind::Sphere && chart->ambient().dim % 2 == 1) {
    const PolarSample ps = polar_surface(chart, g, ao);
    rows.push_back({"polar-conformal", ps.max_conformality_dev < 1e-8, ps.max_conformality_dev,
                    "polar surface conformal to the surface"});
  }

  if (x.periodic && x.moduli) {
    ModuliOptions mo;
    mo.samples = config.steps;
    mo.close_tol = config.tol_close;
    mo.rank_tol = config.tol_rank;
    mo.jobs = config.jobs;
    const ModuliResult m = moduli_scan(*chart, mo);
    rows.push_back({"moduli", m.classification == *x.moduli, static_cast<double>(m.members.size()),
                    "found " + m.classification + ", expected " + *x.moduli});
  }
  return rows;
}

}  // namespace isosurf::cli
