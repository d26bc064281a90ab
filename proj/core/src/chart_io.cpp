#include "isosurf/chart_io.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "isosurf/errors.hpp"

namespace isosurf {

namespace {

using nlohmann::json;

Expr parse_expr(const json& j, const std::string& path) {
  if (j.is_number()) return Expr(j.get<double>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "u") return Expr::u();
    if (s == "v") return Expr::v();
    if (s == "pi") return Expr(std::numbers::pi);
    throw ValidationError(path + ": unknown symbol '" + s + "'");
  }
  if (!j.is_object() || j.size() != 1) {
    throw ValidationError(path + ": expected number, symbol or single-key operation object");
  }
  const auto& [key, arg] = *j.items().begin();
  const std::string here = path + "." + key;
  auto list = [&](std::size_t min, std::size_t max) {
    if (!arg.is_array() || arg.size() < min || arg.size() > max) {
      throw ValidationError(here + ": wrong number of arguments");
    }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < arg.size(); ++i) {
      out.push_back(parse_expr(arg[i], here + "[" + std::to_string(i) + "]"));
    }
    return out;
  };
  using Op = Expr::Op;
  if (key == "add") return Expr::make(Op::Add, list(1, SIZE_MAX));
  if (key == "mul") return Expr::make(Op::Mul, list(1, SIZE_MAX));
  if (key == "sub") return Expr::make(Op::Sub, list(2, 2));
  if (key == "div") return Expr::make(Op::Div, list(2, 2));
  if (key == "neg") return Expr::make(Op::Neg, {parse_expr(arg, here)});
  if (key == "sin") return Expr::make(Op::Sin, {parse_expr(arg, here)});
  if (key == "cos") return Expr::make(Op::Cos, {parse_expr(arg, here)});
  if (key == "exp") return Expr::make(Op::Exp, {parse_expr(arg, here)});
  if (key == "sqrt") return Expr::make(Op::Sqrt, {parse_expr(arg, here)});
  if (key == "pow") {
    if (!arg.is_array() || arg.size() != 2 || !arg[1].is_number_integer()) {
      throw ValidationError(here + ": expected [expr, integer]");
    }
    return Expr::make(Op::Pow, {parse_expr(arg[0], here + "[0]")}, 0.0, arg[1].get<int>());
  }
  throw ValidationError(here + ": unknown operation");
}

json expr_json(const Expr& e) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::Constant: return e.constant();
    case Op::U: return "u";
    case Op::V: return "v";
    case Op::Pow: return json{{"pow", json::array({expr_json(e.args()[0]), e.exponent()})}};
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Sqrt: return json{{op_name(e.op()), expr_json(e.args()[0])}};
    default: {
      json args = json::array();
      for (const auto& a : e.args()) args.push_back(expr_json(a));
      return json{{op_name(e.op()), args}};
    }
  }
}

std::pair<double, double> interval(const json& j, const std::string& name) {
  if (!j.contains(name) || !j[name].is_array() || j[name].size() != 2) {
    throw ValidationError("domain." + name + ": expected [lo, hi]");
  }
  return {j[name][0].get<double>(), j[name][1].get<double>()};
}

}  // namespace

std::shared_ptr<const FormulaChart> parse_chart_definition(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("chart definition is not valid JSON: ") + e.what());
  }
  try {
    const std::string label = doc.value("label", std::string("unnamed"));
    if (!doc.contains("ambient")) throw ValidationError("missing 'ambient'");
    const auto& amb = doc["ambient"];
    const AmbientKind kind = parse_ambient_kind(amb.at("kind").get<std::string>());
    const int dim = amb.at("dim").get<int>();
    const AmbientSpace ambient =
        kind == AmbientKind::Sphere ? AmbientSpace::sphere(dim) : AmbientSpace::euclidean(dim);

    if (!doc.contains("domain")) throw ValidationError("missing 'domain'");
    const auto [u0, u1] = interval(doc["domain"], "u");
    const auto [v0, v1] = interval(doc["domain"], "v");

    std::vector<Vec2> periods;
    if (doc.contains("periods")) {
      for (const auto& s : doc["periods"]) {
        if (!s.is_array() || s.size() != 2) throw ValidationError("periods: expected [du, dv] pairs");
        periods.emplace_back(s[0].get<double>(), s[1].get<double>());
      }
    }

    if (!doc.contains("formula")) throw ValidationError("missing 'formula'");
    const auto& f = doc["formula"];
    Formula formula;
    formula.scale = f.value("scale", 1.0);
    if (!f.contains("components") || !f["components"].is_array()) {
      throw ValidationError("formula.components: expected a list of expressions");
    }
    for (std::size_t i = 0; i < f["components"].size(); ++i) {
      formula.components.push_back(
          parse_expr(f["components"][i], "formula.components[" + std::to_string(i) + "]"));
    }
    if (f.contains("linear")) {
      const auto& L = f["linear"];
      const auto rows = static_cast<Eigen::Index>(L.size());
      const auto cols = rows > 0 ? static_cast<Eigen::Index>(L[0].size()) : 0;
      Mat m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(L[static_cast<std::size_t>(i)].size()) != cols) {
          throw ValidationError("formula.linear: ragged matrix");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
          m(i, k) = L[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
        }
      }
      formula.linear = m;
    }
    return std::make_shared<const FormulaChart>(label, ambient, Domain{u0, u1, v0, v1},
                                                std::move(periods), std::move(formula));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("chart definition: ") + e.what());
  }
}

std::shared_ptr<const FormulaChart> load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open chart file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_chart_definition(ss.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string chart_definition(const FormulaChart& chart) {
  json doc;
  doc["label"] = chart.label();
  doc["ambient"] = {{"kind", to_string(chart.ambient().kind)}, {"dim", chart.ambient().dim}};
  const Domain& d = chart.domain();
  doc["domain"] = {{"u", {d.u0, d.u1}}, {"v", {d.v0, d.v1}}};
  if (chart.is_periodic()) {
    json ps = json::array();
    for (const auto& s : chart.periods()) ps.push_back({s.x(), s.y()});
    doc["periods"] = ps;
  }
  json f;
  f["scale"] = chart.formula().scale;
  json comps = json::array();
  for (const auto& c : chart.formula().components) comps.push_back(expr_json(c));
  f["components"] = comps;
  if (chart.formula().linear) {
    const Mat& L = *chart.formula().linear;
    json rows = json::array();
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      json r = json::array();
      for (Eigen::Index k = 0; k < L.cols(); ++k) r.push_back(L(i, k));
      rows.push_back(r);
    }
    f["linear"] = rows;
  }
  doc["formula"] = f;
  return doc.dump(2);
}

}  // namespace isosurf
