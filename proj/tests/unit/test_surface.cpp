#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isosurf/catalog.hpp"
#include "isosurf/chart.hpp"
#include "isosurf/chart_io.hpp"
#include "isosurf/errors.hpp"
#include "isosurf/grid.hpp"

using namespace isosurf;

namespace {
const SurfaceChart& chart(const char* label) { return *catalog_get(label).chart; }
}  // namespace

TEST_SUITE("surface") {
  TEST_CASE("first fundamental forms of the flat tori") {
    // Metrics from an independent symbolic computation.
    const Mat2 gc = first_fundamental_form(chart("clifford-s3"), {0.7, 1.3});
    CHECK((gc - 0.5 * Mat2::Identity()).norm() < 1e-14);
    Mat2 ref;
    ref << 2.0, 1.0, 1.0, 2.0;
    const Mat2 ge = first_fundamental_form(chart("equilateral-s5"), {0.7, 1.3});
    CHECK((ge - ref / 3.0).norm() < 1e-14);
    const Mat2 gv = first_fundamental_form(chart("veronese-s4"), {1.1, 0.5});
    CHECK(gv(0, 0) == doctest::Approx(3.0));
    CHECK(gv(1, 1) == doctest::Approx(2.3827516758830186));
    CHECK(std::abs(gv(0, 1)) < 1e-14);
    const Mat2 gh = first_fundamental_form(chart("holo-r4"), {0.3, -0.5});
    CHECK((gh - 2.36 * Mat2::Identity()).norm() < 1e-13);
  }

  TEST_CASE("tangent frame is orthonormal and positively oriented") {
    for (const auto& e : catalog()) {
      CAPTURE(e.label);
      const Vec2 p = e.chart->domain().center() + Vec2(0.21, 0.13);
      const TangentData t = tangent_data(*e.chart, p);
      CHECK(std::abs(t.e1.norm() - 1.0) < 1e-13);
      CHECK(std::abs(t.e2.norm() - 1.0) < 1e-13);
      CHECK(std::abs(t.e1.dot(t.e2)) < 1e-13);
      // coord_frame maps frame components to coordinate components: C^T g C = I.
      CHECK((t.coord_frame.transpose() * t.metric * t.coord_frame - Mat2::Identity()).norm() < 1e-12);
      CHECK(t.coord_frame.determinant() > 0.0);
    }
  }

  TEST_CASE("Clifford frame and the complex vector E") {
    const TangentData t = tangent_data(chart("clifford-s3"), {0.0, 0.0});
    CHECK((t.e1 - Vec::Unit(4, 1)).norm() < 1e-15);
    CHECK((t.e2 - Vec::Unit(4, 3)).norm() < 1e-15);
    CHECK((t.J * t.J + Mat2::Identity()).norm() == 0.0);
    CHECK(std::abs(t.E.dot(t.E) - 2.0) < 1e-15);  // <E, conj E>: dot conjugates its first argument
    CHECK(std::abs((t.E.transpose() * t.E)(0, 0)) < 1e-15);
  }

  TEST_CASE("frames at random points are orthonormal and tangent to the sphere") {
    std::mt19937 rng(100);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (const auto& e : catalog()) {
      CAPTURE(e.label);
      const Domain& D = e.chart->domain();
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        const Vec2 p(D.u0 + d(rng) * (D.u1 - D.u0), D.v0 + d(rng) * (D.v1 - D.v0));
        const TangentData t = tangent_data(*e.chart, p);
        worst = std::max({worst, std::abs(t.e1.norm() - 1.0), std::abs(t.e2.norm() - 1.0), std::abs(t.e1.dot(t.e2))});
        if (e.chart->ambient().is_sphere()) {
          const Vec x = position(*e.chart, p);
          worst = std::max({worst, std::abs(x.dot(t.e1)), std::abs(x.dot(t.e2))});
        }
      }
      CHECK(worst < 1e-10);
    }
  }

  TEST_CASE("gauge continuity along a grid row") {
    for (const auto& e : catalog()) {
      CAPTURE(e.label);
      const GridSpec g = GridSpec::for_chart(*e.chart, 24);
      TangentData prev = tangent_data(*e.chart, g.node(0, 5));
      for (int i = 1; i < g.nu; ++i) {
        const TangentData t = tangent_data(*e.chart, g.node(i, 5), &prev);
        CHECK(t.e1.dot(prev.e1) > 0.0);
        CHECK(t.e2.dot(prev.e2) > 0.0);
        prev = t;
      }
    }
  }

  TEST_CASE("coordinate complex structure is a metric rotation by pi/2") {
    const Mat2 g = first_fundamental_form(chart("equilateral-s5"), {0.2, 0.4});
    const Mat2 J = complex_structure_coords(g);
    CHECK((J * J + Mat2::Identity()).norm() < 1e-13);
    CHECK((J.transpose() * g * J - g).norm() < 1e-13);
    // J d_u points to the positive side of d_u.
    const Vec2 ju = J.col(0);
    CHECK(ju.y() > 0.0);
  }

  TEST_CASE("Hodge star and evaluation on E") {
    CHECK((hodge_star(OneForm(1.0, 0.0)) - OneForm(0.0, 1.0)).norm() == 0.0);
    const OneForm w(0.3, -1.7);
    CHECK((hodge_star(hodge_star(w)) + w).norm() == 0.0);
    // (*w)(E) = -i w(E)
    const auto lhs = on_E(hodge_star(w));
    const auto rhs = std::complex<double>(0, -1) * on_E(w);
    CHECK(std::abs(lhs - rhs) < 1e-15);
  }

  TEST_CASE("periodic charts agree across their periods") {
    for (const auto& e : catalog()) {
      if (!e.chart->is_periodic()) continue;
      CAPTURE(e.label);
      const Vec2 p = e.chart->domain().center() + Vec2(0.05, -0.2);
      const JetVector a = jet_eval(*e.chart, p, 4);
      for (const Vec2& s : e.chart->periods()) {
        const Vec2 q = e.chart->admits(p + s) ? Vec2(p + s) : Vec2(p - s);
        const JetVector b = jet_eval(*e.chart, q, 4);
        for (std::size_t k = 0; k < a.size(); ++k)
          for (std::size_t i = 0; i < Jet2::size_for(4); ++i) CHECK(std::abs(a[k][i] - b[k][i]) < 1e-10);
      }
    }
  }

  TEST_CASE("sphere charts stay on the unit sphere") {
    for (const auto& e : catalog()) {
      if (!e.chart->ambient().is_sphere()) continue;
      const GridSpec g = GridSpec::for_chart(*e.chart, 9);
      const SampledImmersion s = sample(*e.chart, g);
      CHECK((s.points.colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("rejects points outside the domain") {
    CHECK_THROWS_AS(jet_eval(chart("holo-r4"), {5.0, 0.0}, 2), ValidationError);
    CHECK_THROWS_AS(jet_eval(chart("veronese-s4"), {0.0, 0.0}, 2), ValidationError);
    // Doubly periodic charts accept any point.
    CHECK_NOTHROW(jet_eval(chart("clifford-s3"), {40.0, -9.0}, 2));
  }

  TEST_CASE("non-smooth formula is an evaluation error") {
    const auto c = parse_chart_definition(R"({
      "label": "cone", "ambient": {"kind": "euclidean", "dim": 3},
      "domain": {"u": [-1, 1], "v": [-1, 1]},
      "formula": {"components": ["u", "v", {"sqrt": {"add": [{"mul": ["u", "u"]}, {"mul": ["v", "v"]}]}}]}})");
    CHECK_NOTHROW(jet_eval(*c, {0.5, 0.5}, 2));
    CHECK_THROWS_AS(jet_eval(*c, {0.0, 0.0}, 2), EvaluationError);
  }

  TEST_CASE("sphere chart off the sphere is rejected") {
    const auto c = parse_chart_definition(R"({
      "label": "off", "ambient": {"kind": "sphere", "dim": 2},
      "domain": {"u": [0, 1], "v": [0, 1]},
      "formula": {"components": [{"cos": "u"}, {"sin": "u"}, "v"]}})");
    CHECK_THROWS_AS(jet_eval(*c, {0.5, 0.5}, 1), ValidationError);
  }

  TEST_CASE("chart definitions round-trip") {
    for (const auto& e : catalog()) {
      CAPTURE(e.label);
      const std::string text = chart_definition(*e.chart);
      const auto back = parse_chart_definition(text);
      CHECK(back->label() == e.chart->label());
      CHECK(back->ambient() == e.chart->ambient());
      CHECK(back->domain() == e.chart->domain());
      CHECK(back->periods().size() == e.chart->periods().size());
      CHECK(chart_definition(*back) == text);
      const Vec2 p = e.chart->domain().center() + Vec2(0.1, 0.2);
      CHECK((position(*back, p) - position(*e.chart, p)).norm() < 1e-15);
    }
  }

  TEST_CASE("malformed definitions are validation errors") {
    CHECK_THROWS_AS(parse_chart_definition("{"), ValidationError);
    CHECK_THROWS_AS(parse_chart_definition(R"({"label": "x"})"), ValidationError);
    CHECK_THROWS_AS(parse_chart_definition(R"({
      "label": "x", "ambient": {"kind": "hyperbolic", "dim": 3},
      "domain": {"u": [0, 1], "v": [0, 1]}, "formula": {"components": ["u", "v", 0]}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_chart_definition(R"({
      "label": "x", "ambient": {"kind": "euclidean", "dim": 3},
      "domain": {"u": [0, 1], "v": [0, 1]}, "formula": {"components": ["u", {"tan": "v"}, 0]}})"),
                    ValidationError);
    CHECK_THROWS_AS(load_chart_file("/nonexistent/chart.json"), ValidationError);
  }

  TEST_CASE("grids") {
    const GridSpec g = GridSpec::for_chart(chart("clifford-s3"), 16);
    CHECK(g.periodic_u);
    CHECK(g.periodic_v);
    CHECK(g.step_u() == doctest::Approx(2 * std::numbers::pi / 16));
    const GridSpec h = GridSpec::for_chart(chart("holo-r4"), 9);
    CHECK_FALSE(h.periodic_u);
    CHECK(h.node(8, 8).x() == doctest::Approx(h.domain.u1));
    CHECK(h.refined().nu == 17);
    CHECK(g.refined().nu == 32);
    const GridSpec v = GridSpec::for_chart(chart("veronese-s4"), 8);
    CHECK_FALSE(v.periodic_u);
    CHECK(v.periodic_v);
  }
}
