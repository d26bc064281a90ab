#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isosurf/catalog.hpp"
#include "isosurf/congruence.hpp"
#include "isosurf/family.hpp"
#include "isosurf/higher_forms.hpp"

using namespace isosurf;

namespace {

ChartPtr chart(const char* label) { return catalog_get(label).chart; }

FamilyParams at(double theta) {
  FamilyParams p;
  p.theta = theta;
  return p;
}

// The Clifford torus is flat with alpha(d_u, d_v) = 0, so its member g_theta
// is g composed with a rotation of the parameter plane by theta / 2. The
// monodromy over (2 pi, 0) therefore rotates the two coordinate planes by
// 2 pi cos(theta / 2) and 2 pi sin(theta / 2).
double clifford_defect(double theta) {
  const double a = 2 * std::numbers::pi * std::cos(theta / 2), b = 2 * std::numbers::pi * std::sin(theta / 2);
  return std::max(2 * std::abs(std::sin(a / 2)), 2 * std::abs(std::sin(b / 2)));
}

}  // namespace

TEST_SUITE("family") {
  TEST_CASE("theta = 0 reconstructs the surface") {
    for (const char* label : {"clifford-s3", "equilateral-s5", "veronese-s4", "holo-r4"}) {
      CAPTURE(label);
      const auto& c = *chart(label);
      const GridSpec g = GridSpec::for_chart(c, 32);
      const FamilyResult r = integrate_family(c, g, at(0.0));
      const CongruenceResult cg = congruence_test(sample(c, g), r.surface);
      CHECK(cg.residual < 1e-8);
      CHECK(r.path_defect < 1e-8);
      CHECK(r.compat_residual < 1e-10);
    }
  }

  TEST_CASE("members are isometric, minimal and isotropic") {
    const ChartPtr c = chart("equilateral-s5");
    const GridSpec g = GridSpec::for_chart(*c, 24);
    const FamilyMemberChart m(c, g, at(std::numbers::pi / 3));
    for (const Vec2& p : {Vec2(0.1, 0.2), Vec2(2.95, 4.4), Vec2(5.0, 1.7)}) {
      CHECK((first_fundamental_form(m, p) - first_fundamental_form(*c, p)).norm() < 1e-8);
      const OsculatingFlag f = osculating_flag(m, p);
      CHECK(minimality_residual(f) < 1e-8);
      CHECK(f.ranks == std::vector<int>{2, 1});
      CHECK(curvature_ellipse(f, 1).circularity_dev < 1e-8);
    }
  }

  TEST_CASE("member charts have consistent jets") {
    const ChartPtr c = chart("veronese-s4");
    const FamilyMemberChart m(c, GridSpec::for_chart(*c, 24), at(0.7));
    const Vec2 p(1.3, 2.2);
    const double h = 1e-4;
    const JetVector j = jet_eval(m, p, 2);
    const Vec d = (position(m, p + Vec2(h, 0)) - position(m, p - Vec2(h, 0))) / (2 * h);
    for (std::size_t k = 0; k < j.size(); ++k) CHECK(std::abs(j[k].derivative(1, 0) - d[static_cast<Eigen::Index>(k)]) < 1e-6);
  }

  TEST_CASE("even codimension: members are congruent") {
    for (const char* label : {"veronese-s4", "holo-r4", "holo-cyl-r4"}) {
      CAPTURE(label);
      const auto& c = *chart(label);
      const GridSpec g = GridSpec::for_chart(c, 24);
      const SampledImmersion s = sample(c, g);
      for (double t : {0.5, 1.0, 2.5}) CHECK(congruence_test(s, integrate_family(c, g, at(t)).surface).residual < 1e-5);
    }
  }

  TEST_CASE("odd codimension: members are not congruent") {
    const auto& c = *chart("equilateral-s5");
    const GridSpec g = GridSpec::for_chart(c, 24);
    const CongruenceResult r = congruence_test(sample(c, g), integrate_family(c, g, at(std::numbers::pi / 4)).surface);
    CHECK_FALSE(r.congruent);
    CHECK(r.residual > 1e-2);
  }

  TEST_CASE("non-minimal charts fail the integrability check") {
    const auto& c = *chart("perturbed-nonminimal");
    const GridSpec g = GridSpec::for_chart(c, 16);
    CHECK(family_compatibility(c, g, std::numbers::pi / 6) > 1e-3);
    CHECK_THROWS_AS(integrate_family(c, g, at(std::numbers::pi / 6)), CompatibilityError);
  }

  TEST_CASE("loop holonomy is trivial") {
    const auto& c = *chart("equilateral-s5");
    const Mat H = loop_holonomy(c, 1.1, {0.2, 0.3}, {1.0, 0.8});
    CHECK((H - Mat::Identity(H.rows(), H.cols())).norm() < 1e-8);
  }
}

TEST_SUITE("monodromy") {
  TEST_CASE("Clifford monodromy matches the rotated-parameter model") {
    const MonodromyEvaluator ev(*chart("clifford-s3"), 512);
    REQUIRE(ev.periodic());
    for (double t : {0.0, 0.2, 0.45, 1.0, 2.0, 3.0}) {
      CAPTURE(t);
      const MonodromyRecord r = ev(t);
      CHECK(r.defect == doctest::Approx(clifford_defect(t)).epsilon(1e-6).scale(1.0));
      CHECK(r.orthogonality < 1e-8);
    }
  }

  TEST_CASE("every member closes for the Veronese surface") {
    const MonodromyEvaluator ev(*chart("veronese-s4"), 512);
    for (double t : {0.3, 1.4, 2.9}) CHECK(ev.defect(t) < 1e-6);
  }

  TEST_CASE("moduli scans") {
    ModuliOptions o;
    o.samples = 90;
    o.path_steps = 512;
    const ModuliResult c = moduli_scan(*chart("clifford-s3"), o);
    CHECK(c.classification == "finite");
    REQUIRE(c.members.size() == 1);
    CHECK(std::abs(c.members.front()) < 1e-8);
    CHECK(c.thetas.size() == 90);
    const ModuliResult v = moduli_scan(*chart("veronese-s4"), o);
    CHECK(v.classification == "circle");
    CHECK_THROWS_AS(moduli_scan(*chart("holo-r4"), o), PreconditionError);
  }
}
