#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "isosurf/catalog.hpp"
#include "isosurf/chart_io.hpp"
#include "isosurf/congruence.hpp"
#include "isosurf/errors.hpp"
#include "isosurf/family.hpp"
#include "isosurf/higher_forms.hpp"
#include "isosurf/parallel.hpp"

namespace isosurf::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{"analyze", "family", "moduli", "polar", "congruence", "check", "catalog"};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

json chart_json(const SurfaceChart& c) {
  const Domain& d = c.domain();
  json periods = json::array();
  for (const auto& p : c.periods()) periods.push_back({p.x(), p.y()});
  return {{"label", c.label()},
          {"ambient", {{"kind", to_string(c.ambient().kind)}, {"dim", c.ambient().dim}}},
          {"domain", {{"u", {d.u0, d.u1}}, {"v", {d.v0, d.v1}}}},
          {"periods", periods}};
}

json document(const RunConfig& config) {
  return {{"schema_version", kSchemaVersion}, {"command", config.command}, {"config", config_json(config)}};
}

int grid_or(const RunConfig& c, int fallback) { return c.grid > 0 ? c.grid : fallback; }

AnalysisOptions analysis_options(const RunConfig& c) {
  AnalysisOptions o;
  o.rank_tol = c.tol_rank;
  o.circ_tol = c.tol_circ;
  o.jobs = c.jobs;
  return o;
}

FamilyParams family_params(const RunConfig& c, double theta) {
  FamilyParams p;
  p.theta = theta;
  p.rank_tol = c.tol_rank;
  p.jobs = c.jobs;
  return p;
}

// Writes the summary (and the table) under --out and echoes the selected
// format on stdout.
void emit(const RunConfig& config, const json& summary, const std::string& csv, const std::string& base,
          std::ostream& out) {
  if (config.format == "csv") {
    out << csv;
  } else {
    out << summary.dump(2) << "\n";
  }
  if (config.out.empty()) return;
  std::filesystem::create_directories(config.out);
  const std::filesystem::path dir(config.out);
  std::ofstream(dir / (base + ".json")) << summary.dump(2) << "\n";
  if (!csv.empty()) std::ofstream(dir / (base + ".csv")) << csv;
}

// Nodes at which per-point diagnostics of a family member are evaluated:
// at most 16 per axis, shifted into cell interiors so that the frame
// transport between nodes is exercised too.
std::vector<Vec2> probe_points(const SurfaceChart& chart, const GridSpec& g) {
  std::vector<Vec2> pts;
  const int su = std::max(1, g.nu / 16), sv = std::max(1, g.nv / 16);
  for (int j = 0; j < g.nv; j += sv) {
    for (int i = 0; i < g.nu; i += su) {
      const Vec2 p = g.node(i, j) + Vec2(0.37 * g.step_u(), 0.61 * g.step_v());
      if (chart.domain().contains(p, 0.0)) pts.push_back(p);
    }
  }
  return pts;
}

struct MemberDiagnostics {
  double isometry = 0.0, minimality = 0.0, isotropy = 0.0;
};

MemberDiagnostics member_diagnostics(const SurfaceChart& base, const SurfaceChart& member, const GridSpec& g,
                                     double rank_tol) {
  MemberDiagnostics d;
  for (const Vec2& p : probe_points(base, g)) {
    d.isometry = std::max(
        d.isometry, (first_fundamental_form(member, p) - first_fundamental_form(base, p)).cwiseAbs().maxCoeff());
    const OsculatingFlag f = osculating_flag(member, p, rank_tol);
    d.minimality = std::max(d.minimality, minimality_residual(f));
    if (!f.regular) continue;
    for (int k = 1; k <= f.levels; ++k)
      if (f.ranks[static_cast<std::size_t>(k - 1)] == 2)
        d.isotropy = std::max(d.isotropy, curvature_ellipse(f, k).circularity_dev);
  }
  return d;
}

std::string points_csv(const SampledImmersion& s, const std::string& prefix_header = "",
                       const std::string& prefix = "") {
  std::ostringstream os;
  os << prefix_header << "i,j,u,v";
  for (Eigen::Index k = 0; k < s.points.rows(); ++k) os << ",x" << k + 1;
  os << "\n";
  for (int j = 0; j < s.grid.nv; ++j) {
    for (int i = 0; i < s.grid.nu; ++i) {
      const Vec2 p = s.grid.node(i, j);
      os << prefix << i << "," << j << "," << num(p.x()) << "," << num(p.y());
      const auto col = s.points.col(static_cast<Eigen::Index>(s.grid.index(i, j)));
      for (Eigen::Index k = 0; k < col.size(); ++k) os << "," << num(col[k]);
      os << "\n";
    }
  }
  return os.str();
}

ChartPtr member_or_base(const ChartPtr& chart, const GridSpec& g, const RunConfig& c, double theta) {
  if (theta == 0.0) return chart;
  return std::make_shared<FamilyMemberChart>(chart, g, family_params(c, theta));
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  const ChartPtr chart = resolve_chart(c.chart, c.chart_file);
  const GridSpec g = GridSpec::for_chart(*chart, grid_or(c, 64));
  json doc = document(c);
  doc["chart"] = chart_json(*chart);
  IsotropyReport rep;
  try {
    rep = isotropy_report(*chart, g, analysis_options(c));
  } catch (const NonMinimalError& e) {
    doc["status"] = "rejected";
    doc["reason"] = "not minimal";
    doc["diagnostic"] = e.what();
    doc["trace"] = {{"point", {e.point().x(), e.point().y()}}, {"relative_mean_curvature", e.trace()}};
    emit(c, doc, "", chart->label() + ".analyze", out);
    return kValidation;
  }
  const int m = std::max(1, chart->ambient().normal_levels());
  std::vector<double> kmin(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity()), kmax(kmin.size(), 0.0);
  std::ostringstream csv;
  csv << "i,j,u,v,regular";
  for (int k = 1; k <= m; ++k) csv << ",rank_" << k;
  for (int k = 1; k <= m; ++k) csv << ",kappa_" << k;
  for (int k = 1; k <= m; ++k) csv << ",circularity_" << k;
  csv << "\n";
  for (const auto& r : rep.points) {
    csv << r.i << "," << r.j << "," << num(r.point.x()) << "," << num(r.point.y()) << "," << (r.regular ? 1 : 0);
    for (int k : r.ranks) csv << "," << k;
    for (double k : r.kappa) csv << "," << num(k);
    for (double d : r.circularity) csv << "," << num(d);
    csv << "\n";
    if (!r.regular) continue;
    for (std::size_t k = 0; k < r.kappa.size(); ++k) {
      kmin[k] = std::min(kmin[k], r.kappa[k]);
      kmax[k] = std::max(kmax[k], r.kappa[k]);
    }
  }
  json nonregular = json::array();
  for (const auto& r : rep.nonregular)
    nonregular.push_back({{"i", r.i}, {"j", r.j}, {"u", r.point.x()}, {"v", r.point.y()}, {"ranks", r.ranks}});
  json kappa = json::array();
  for (std::size_t k = 0; k < kmin.size(); ++k) kappa.push_back({{"order", k + 1}, {"min", kmin[k]}, {"max", kmax[k]}});
  doc["status"] = "ok";
  doc["result"] = {{"grid", {g.nu, g.nv}},
                   {"isotropic", rep.isotropic},
                   {"max_dev", rep.max_dev},
                   {"max_minimality", rep.max_minimality},
                   {"regular_ranks", OsculatingFlag::regular_ranks(chart->ambient())},
                   {"kappa", kappa},
                   {"nonregular", nonregular},
                   {"nonregular_isolated", rep.nonregular_isolated}};
  emit(c, doc, csv.str(), chart->label() + ".analyze", out);
  return kOk;
}

int cmd_family(const RunConfig& c, std::ostream& out) {
  const ChartPtr chart = resolve_chart(c.chart, c.chart_file);
  const GridSpec g = GridSpec::for_chart(*chart, grid_or(c, 64));
  const std::vector<double> thetas = c.thetas.empty() ? std::vector<double>{0.0} : c.thetas;
  const SampledImmersion original = sample(*chart, g, c.jobs);
  json doc = document(c);
  doc["chart"] = chart_json(*chart);
  json members = json::array();
  std::string csv;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    const auto member = std::make_shared<FamilyMemberChart>(chart, g, family_params(c, thetas[t]));
    const FamilyResult& res = member->result();
    const CongruenceResult cg = congruence_test(original, res.surface);
    const MemberDiagnostics d = member_diagnostics(*chart, *member, g, c.tol_rank);
    members.push_back({{"theta", thetas[t]},
                       {"max_drift", res.max_drift},
                       {"path_defect", res.path_defect},
                       {"compat_residual", res.compat_residual},
                       {"congruence", {{"residual", cg.residual}, {"congruent", cg.congruent}, {"reflection", cg.reflection}}},
                       {"isometry_residual", d.isometry},
                       {"minimality_residual", d.minimality},
                       {"isotropy_max_dev", d.isotropy}});
    const std::string table = points_csv(res.surface, "theta,", num(thetas[t]) + ",");
    csv += t == 0 ? table : table.substr(table.find('\n') + 1);
    if (!c.out.empty()) {
      std::filesystem::create_directories(c.out);
      std::ofstream(std::filesystem::path(c.out) / (chart->label() + ".family-" + std::to_string(t) + ".csv"))
          << points_csv(res.surface);
    }
  }
  doc["grid"] = {g.nu, g.nv};
  doc["members"] = members;
  emit(c, doc, csv, chart->label() + ".family", out);
  return kOk;
}

int cmd_moduli(const RunConfig& c, std::ostream& out) {
  const ChartPtr chart = resolve_chart(c.chart, c.chart_file);
  ModuliOptions o;
  o.samples = c.steps;
  o.close_tol = c.tol_close;
  o.rank_tol = c.tol_rank;
  o.jobs = c.jobs;
  const ModuliResult r = moduli_scan(*chart, o);
  json doc = document(c);
  doc["chart"] = chart_json(*chart);
  json classes = nullptr;
  if (r.classification != "circle") {
    // Congruence classes of the closing members, from integrated samples.
    const GridSpec g = GridSpec::for_chart(*chart, grid_or(c, 32));
    std::vector<SampledImmersion> samples;
    for (double th : r.members) {
      samples.push_back(th == 0.0 ? sample(*chart, g, c.jobs)
                                  : integrate_family(*chart, g, family_params(c, th)).surface);
    }
    std::vector<int> cls(r.members.size(), -1);
    int next = 0;
    classes = json::array();
    for (std::size_t a = 0; a < r.members.size(); ++a) {
      if (cls[a] >= 0) continue;
      cls[a] = next++;
      json group = json::array({r.members[a]});
      for (std::size_t b = a + 1; b < r.members.size(); ++b) {
        if (cls[b] < 0 && congruence_test(samples[a], samples[b], 1e-5).congruent) {
          cls[b] = cls[a];
          group.push_back(r.members[b]);
        }
      }
      classes.push_back(group);
    }
  }
  doc["result"] = {{"classification", r.classification},
                   {"members", r.members},
                   {"member_defects", r.member_defects},
                   {"congruence_classes", classes},
                   {"curve", {{"theta", r.thetas}, {"defect", r.defects}}}};
  std::ostringstream csv;
  csv << "theta,defect\n";
  for (std::size_t k = 0; k < r.thetas.size(); ++k) csv << num(r.thetas[k]) << "," << num(r.defects[k]) << "\n";
  emit(c, doc, csv.str(), chart->label() + ".moduli", out);
  return kOk;
}

int cmd_polar(const RunConfig& c, std::ostream& out) {
  const ChartPtr chart = resolve_chart(c.chart, c.chart_file);
  const GridSpec g = GridSpec::for_chart(*chart, grid_or(c, 32));
  std::vector<double> thetas = c.thetas.empty() ? std::vector<double>{0.0} : c.thetas;
  if (std::find(thetas.begin(), thetas.end(), 0.0) == thetas.end()) thetas.insert(thetas.begin(), 0.0);
  json doc = document(c);
  doc["chart"] = chart_json(*chart);
  json members = json::array();
  std::vector<double> base_factor;
  std::string csv;
  for (double th : thetas) {
    const ChartPtr src = member_or_base(chart, g, c, th);
    const PolarSample ps = polar_surface(src, g, analysis_options(c));
    const IsotropyReport iso = isotropy_report(PolarChart(src, FrameOptions{c.tol_rank}), g, analysis_options(c));
    if (th == 0.0) base_factor = ps.conformal_factor;
    double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0, fdev = 0.0;
    std::size_t excluded = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (ps.excluded[k]) {
        ++excluded;
        continue;
      }
      fmin = std::min(fmin, ps.conformal_factor[k]);
      fmax = std::max(fmax, ps.conformal_factor[k]);
      fdev = std::max(fdev, std::abs(ps.conformal_factor[k] - base_factor[k]));
    }
    members.push_back({{"theta", th},
                       {"max_conformality_dev", ps.max_conformality_dev},
                       {"polar_isotropy_max_dev", iso.max_dev},
                       {"conformal_factor", {{"min", fmin}, {"max", fmax}}},
                       {"factor_deviation_from_theta0", fdev},
                       {"excluded_nodes", excluded}});
    const std::string table = points_csv(ps.surface, "theta,", num(th) + ",");
    csv += csv.empty() ? table : table.substr(table.find('\n') + 1);
  }
  doc["grid"] = {g.nu, g.nv};
  doc["members"] = members;
  emit(c, doc, csv, chart->label() + ".polar", out);
  return kOk;
}

int cmd_congruence(const RunConfig& c, std::ostream& out) {
  const ChartPtr a = resolve_chart(c.chart, c.chart_file);
  const bool against_member = c.chart_b.empty() && c.chart_b_file.empty();
  if (against_member && c.thetas.empty()) {
    throw ValidationError("congruence needs --chart-b/--chart-b-file or a --theta for a family member");
  }
  const ChartPtr b = against_member ? nullptr : resolve_chart(c.chart_b, c.chart_b_file);
  if (b && !(a->domain() == b->domain())) throw ValidationError("grid mismatch: charts have different domains");
  json doc = document(c);
  doc["chart"] = chart_json(*a);
  if (b) doc["chart_b"] = chart_json(*b);
  const int n = grid_or(c, 32);
  json resolutions = json::array();
  CongruenceResult first;
  bool stable = true;
  for (int level = 0; level < 2; ++level) {
    const GridSpec g = level == 0 ? GridSpec::for_chart(*a, n) : GridSpec::for_chart(*a, n).refined();
    const SampledImmersion sa = sample(*a, g, c.jobs);
    const SampledImmersion sb = b ? sample(*b, g, c.jobs)
                                  : integrate_family(*a, g, family_params(c, c.thetas.front())).surface;
    const CongruenceResult r = congruence_test(sa, sb);
    if (level == 0) first = r;
    stable = stable && r.congruent == first.congruent;
    resolutions.push_back({{"grid", {g.nu, g.nv}}, {"residual", r.residual}, {"congruent", r.congruent}});
  }
  if (against_member) doc["theta"] = c.thetas.front();
  doc["result"] = {{"residual", first.residual},
                   {"scale", first.scale},
                   {"congruent", first.congruent},
                   {"reflection", first.reflection},
                   {"isometry", matrix_json(first.Q)},
                   {"translation", std::vector<double>(first.translation.data(), first.translation.data() + first.translation.size())},
                   {"resolutions", resolutions},
                   {"verdict_stable", stable}};
  std::ostringstream csv;
  csv << "grid,residual,congruent\n";
  for (const auto& r : resolutions)
    csv << r["grid"][0].get<int>() << "," << num(r["residual"].get<double>()) << "," << (r["congruent"].get<bool>() ? 1 : 0) << "\n";
  emit(c, doc, csv.str(), a->label() + ".congruence", out);
  return kOk;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  if (!c.chart_file.empty()) throw ValidationError("check runs on catalog charts (--chart LABEL or --all)");
  if (!c.all && c.chart.empty()) throw ValidationError("check needs --chart LABEL or --all");
  const std::vector<std::string> labels = c.all ? catalog_labels() : std::vector<std::string>{c.chart};
  for (const auto& l : labels) (void)catalog_get(l);
  json doc = document(c);
  json results = json::array();
  std::ostringstream csv;
  csv << "label,check,pass,value,detail\n";
  bool all_pass = true;
  for (const auto& l : labels) {
    json rows = json::array();
    for (const CheckRow& r : check_catalog_entry(l, c)) {
      all_pass = all_pass && r.pass;
      rows.push_back({{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"detail", r.detail}});
      csv << l << "," << r.name << "," << (r.pass ? 1 : 0) << "," << num(r.value) << "," << r.detail << "\n";
    }
    results.push_back({{"label", l}, {"rows", rows}});
  }
  doc["results"] = results;
  doc["all_pass"] = all_pass;
  emit(c, doc, csv.str(), c.all ? "catalog.check" : c.chart + ".check", out);
  return all_pass ? kOk : kNumerical;
}

int cmd_catalog(const RunConfig& c, std::ostream& out) {
  if (!c.chart.empty()) {
    const CatalogEntry& e = catalog_get(c.chart);
    out << chart_definition(*e.chart) << "\n";
    return kOk;
  }
  json doc = document(c);
  json entries = json::array();
  std::ostringstream csv;
  csv << "label,ambient,dim,substantial,minimal,isotropic,periodic,description\n";
  for (const auto& e : catalog()) {
    const Expected& x = e.expected;
    entries.push_back({{"label", e.label},
                       {"description", e.description},
                       {"ambient", {{"kind", to_string(x.ambient.kind)}, {"dim", x.ambient.dim}}},
                       {"expected",
                        {{"substantial", x.substantial},
                         {"minimal", x.minimal},
                         {"isotropic", x.isotropic},
                         {"levels", x.levels},
                         {"ranks", x.ranks},
                         {"periodic", x.periodic},
                         {"moduli", x.moduli ? json(*x.moduli) : json(nullptr)}}}});
    csv << e.label << "," << to_string(x.ambient.kind) << "," << x.ambient.dim << "," << x.substantial << ","
        << x.minimal << "," << x.isotropic << "," << x.periodic << ",\"" << e.description << "\"\n";
  }
  doc["entries"] = entries;
  emit(c, doc, csv.str(), "catalog", out);
  return kOk;
}

void validate(const RunConfig& c) {
  if (c.grid != 0 && c.grid < 8) throw ValidationError("--grid must be at least 8");
  if (c.steps < 8) throw ValidationError("--steps must be at least 8");
  if (!(c.tol_rank > 0.0) || !(c.tol_circ > 0.0) || !(c.tol_close > 0.0)) {
    throw ValidationError("tolerances must be positive");
  }
  if (c.format != "json" && c.format != "csv") throw ValidationError("--format must be csv or json");
  for (double t : c.thetas)
    if (!std::isfinite(t)) throw ValidationError("--theta must be finite");
  const bool needs_chart = c.command != "catalog" && c.command != "check";
  if (needs_chart && c.chart.empty() == c.chart_file.empty()) {
    throw ValidationError("give exactly one of --chart and --chart-file");
  }
}

}  // namespace

json config_json(const RunConfig& c) {
  return {{"command", c.command},     {"chart", c.chart},         {"chart_file", c.chart_file},
          {"chart_b", c.chart_b},     {"chart_b_file", c.chart_b_file}, {"all", c.all},
          {"grid", c.grid},           {"theta", c.thetas},        {"steps", c.steps},
          {"tol_rank", c.tol_rank},   {"tol_circ", c.tol_circ},   {"tol_close", c.tol_close},
          {"jobs", c.jobs},           {"out", c.out},             {"format", c.format}};
}

ChartPtr resolve_chart(const std::string& label, const std::string& file) {
  if (!file.empty()) return load_chart_file(file);
  return catalog_get(label).chart;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.jobs > 0) set_default_jobs(config.jobs);
    if (config.command == "analyze") return cmd_analyze(config, out);
    if (config.command == "family") return cmd_family(config, out);
    if (config.command == "moduli") return cmd_moduli(config, out);
    if (config.command == "polar") return cmd_polar(config, out);
    if (config.command == "congruence") return cmd_congruence(config, out);
    if (config.command == "check") return cmd_check(config, out);
    if (config.command == "catalog") return cmd_catalog(config, out);
    throw ValidationError("unknown command '" + config.command + "'");
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Numerical analysis of isotropic minimal surfaces and their associated families", "isosurf"};
  app.add_option("command", c.command, "analyze | family | moduli | polar | congruence | check | catalog")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--chart", c.chart, "catalog label");
  app.add_option("--chart-file", c.chart_file, "chart definition file (JSON)");
  app.add_option("--chart-b", c.chart_b, "second catalog label (congruence)");
  app.add_option("--chart-b-file", c.chart_b_file, "second chart definition file (congruence)");
  app.add_flag("--all", c.all, "run check on every catalog entry");
  app.add_option("--grid", c.grid, "grid nodes per axis (>= 8)");
  app.add_option("--theta", c.thetas, "family parameter(s)")->delimiter(',');
  app.add_option("--steps", c.steps, "theta samples of the moduli scan (>= 8)");
  app.add_option("--tol-rank", c.tol_rank, "relative rank tolerance");
  app.add_option("--tol-circ", c.tol_circ, "circularity tolerance");
  app.add_option("--tol-close", c.tol_close, "monodromy closing tolerance");
  app.add_option("--jobs", c.jobs, "worker threads (0 = hardware)");
  app.add_option("--out", c.out, "directory for report files");
  app.add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"csv", "json"}));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return run(c, out, err);
}

}  // namespace isosurf::cli
