#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isosurf/catalog.hpp"
#include "isosurf/congruence.hpp"
#include "isosurf/errors.hpp"
#include "isosurf/family.hpp"

using namespace isosurf;

namespace {

const SurfaceChart& chart(const char* label) { return *catalog_get(label).chart; }

Mat random_orthogonal(int n, std::mt19937& rng, bool reflect) {
  std::normal_distribution<double> d;
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = d(rng);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ();
  if ((Q.determinant() < 0) != reflect) Q.col(0) *= -1.0;
  return Q;
}

SampledImmersion moved(const SampledImmersion& s, const Mat& Q, const Vec& t) {
  SampledImmersion out = s;
  out.points = (Q * s.points).colwise() + t;
  return out;
}

}  // namespace

TEST_SUITE("congruence") {
  TEST_CASE("recovers random isometries") {
    std::mt19937 rng(42);
    const SampledImmersion s = sample(chart("equilateral-s5"), GridSpec::for_chart(chart("equilateral-s5"), 12));
    for (int trial = 0; trial < 5; ++trial) {
      const bool reflect = trial % 2 == 1;
      const Mat Q = random_orthogonal(6, rng, reflect);
      const CongruenceResult r = congruence_test(s, moved(s, Q, Vec::Zero(6)));
      CHECK(r.congruent);
      CHECK(r.residual < 1e-12);
      CHECK((r.Q - Q).norm() < 1e-10);
      CHECK(r.reflection == reflect);
      CHECK(r.translation.norm() == 0.0);
    }
    const SampledImmersion e = sample(chart("holo-r4"), GridSpec::for_chart(chart("holo-r4"), 12));
    const Mat Q = random_orthogonal(4, rng, false);
    const Vec t = Vec::LinSpaced(4, -1.0, 2.0);
    const CongruenceResult r = congruence_test(e, moved(e, Q, t));
    CHECK(r.residual < 1e-12);
    CHECK((r.translation - t).norm() < 1e-10);
  }

  TEST_CASE("symmetric and invariant under moving either side") {
    std::mt19937 rng(3);
    const auto& c = chart("equilateral-s5");
    const GridSpec g = GridSpec::for_chart(c, 12);
    FamilyParams p;
    p.theta = 0.9;
    const SampledImmersion a = sample(c, g), b = integrate_family(c, g, p).surface;
    const CongruenceResult ab = congruence_test(a, b), ba = congruence_test(b, a);
    CHECK(ab.residual == doctest::Approx(ba.residual).epsilon(1e-9));
    const Mat Q = random_orthogonal(6, rng, false);
    CHECK(congruence_test(moved(a, Q, Vec::Zero(6)), b).residual == doctest::Approx(ab.residual).epsilon(1e-9));
    CHECK(congruence_test(a, moved(b, Q, Vec::Zero(6))).residual == doctest::Approx(ab.residual).epsilon(1e-9));
    CHECK_FALSE(ab.congruent);
  }

  TEST_CASE("masks and mismatched grids") {
    const auto& c = chart("holo-r4");
    SampledImmersion a = sample(c, GridSpec::for_chart(c, 9));
    SampledImmersion b = a;
    b.points(0, 0) += 5.0;
    CHECK_FALSE(congruence_test(a, b).congruent);
    std::vector<bool> mask(a.grid.size(), true);
    mask[0] = false;
    CHECK(congruence_test(a, b, 1e-6, &mask).congruent);
    CHECK_THROWS_AS(congruence_test(a, sample(c, GridSpec::for_chart(c, 10))), ValidationError);
  }

  TEST_CASE("height independence") {
    const auto& c = chart("equilateral-s5");
    for (int n : {16, 32}) {
      const GridSpec g = GridSpec::for_chart(c, n);
      const SampledImmersion s = sample(c, g);
      // Duplicate immersions share every height function.
      CHECK(height_independence({s, s}).sigma_min < 1e-12);
      FamilyParams p;
      p.theta = std::numbers::pi / 4;
      const HeightIndependence h = height_independence({s, integrate_family(c, g, p).surface});
      CHECK(h.independent);
      CHECK(h.sigma_min > 1e-2);
    }
    CHECK(height_independence({sample(chart("clifford-s3"), GridSpec::for_chart(chart("clifford-s3"), 8))}).independent);
  }
}

TEST_SUITE("takahashi") {
  TEST_CASE("second-order convergence on minimal spherical tori") {
    for (const char* label : {"clifford-s3", "equilateral-s5", "veronese-s4"}) {
      CAPTURE(label);
      const auto& c = chart(label);
      const double ratio = takahashi_convergence(c, [&](const GridSpec& g) { return sample(c, g); }, GridSpec::for_chart(c, 24));
      CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
    }
  }

  TEST_CASE("harmonic coordinates in euclidean space") {
    const auto& c = chart("holo-r4");
    CHECK(takahashi_residual(c, sample(c, GridSpec::for_chart(c, 16))).residual < 1e-10);
  }

  TEST_CASE("non-minimal surfaces keep a residual") {
    const auto& c = chart("perturbed-nonminimal");
    const GridSpec g = GridSpec::for_chart(c, 24);
    const TakahashiResult r = takahashi_residual(c, sample(c, g));
    CHECK(r.residual > 0.1);
    CHECK(r.per_node.size() == g.size());
  }

  TEST_CASE("boundary nodes are skipped on open charts") {
    const auto& c = chart("holo-r4");
    const GridSpec g = GridSpec::for_chart(c, 8);
    const TakahashiResult r = takahashi_residual(c, sample(c, g));
    CHECK(std::isnan(r.per_node[g.index(0, 3)]));
    CHECK_FALSE(std::isnan(r.per_node[g.index(3, 3)]));
  }
}
