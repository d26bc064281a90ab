#include <doctest.h>

#include <cmath>
#include <random>

#include "isosurf/catalog.hpp"
#include "isosurf/chart.hpp"
#include "isosurf/expr.hpp"
#include "isosurf/jet.hpp"

using namespace isosurf;

namespace {

// f = exp(sin(u) v) cos(u^2 - 3v) / (2 + uv) + sqrt(1 + u^2 + v^2) (u - v)^3
Expr test_function() {
  const Expr u = Expr::u(), v = Expr::v();
  return exp(sin(u) * v) * cos(pow(u, 2) - 3.0 * v) / (2.0 + u * v) + sqrt(1.0 + u * u + v * v) * pow(u - v, 3);
}

// Poly of total degree <= 3 with seeded coefficients, as a jet about (u0, v0).
Jet2 random_cubic(std::mt19937& rng, int order, double u0, double v0, std::vector<double>& c) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  c.assign(10, 0.0);
  for (double& x : c) x = d(rng);
  const Jet2 u = Jet2::variable_u(order, u0), v = Jet2::variable_v(order, v0);
  return c[0] + c[1] * u + c[2] * v + c[3] * u * u + c[4] * u * v + c[5] * v * v + c[6] * u * u * u +
         c[7] * u * u * v + c[8] * u * v * v + c[9] * v * v * v;
}

}  // namespace

TEST_SUITE("jets") {
  TEST_CASE("coefficients match the symbolic expansion") {
    // Taylor coefficients about (0.3, -0.2) from an independent symbolic expansion.
    struct Ref {
      int a, b;
      double c;
    };
    const Ref refs[] = {{0, 0, 0.50761043028180424614}, {1, 0, 0.61400225565231552506},
                        {0, 1, 0.15985742816477634722}, {2, 1, -3.8806848104608321060},
                        {1, 3, -3.3149035538160836369}, {4, 0, 0.70561590487985055506},
                        {3, 3, 2.8041659434053402901},  {0, 6, -0.42969563442389055319},
                        {2, 4, -2.3116125056112450525}};
    const Jet2 f = test_function().evaluate(Jet2::variable_u(6, 0.3), Jet2::variable_v(6, -0.2));
    for (const Ref& r : refs) {
      CAPTURE(r.a);
      CAPTURE(r.b);
      CHECK(f.coeff(r.a, r.b) == doctest::Approx(r.c).epsilon(1e-12));
    }
    CHECK(test_function().evaluate(0.3, -0.2) == doctest::Approx(0.50761043028180424614).epsilon(1e-14));
  }

  TEST_CASE("derivative extraction is a! b! c_ab") {
    const Jet2 f = test_function().evaluate(Jet2::variable_u(6, 0.3), Jet2::variable_v(6, -0.2));
    CHECK(f.derivative(2, 1) == doctest::Approx(2.0 * -3.8806848104608321060).epsilon(1e-12));
    CHECK(f.derivative(3, 3) == doctest::Approx(36.0 * 2.8041659434053402901).epsilon(1e-12));
    CHECK(f.diff_u().coeff(1, 1) == doctest::Approx(2.0 * f.coeff(2, 1)));
  }

  TEST_CASE("polynomial products are exact truncations") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> a, b;
      const Jet2 p = random_cubic(rng, 6, 0.0, 0.0, a);
      const Jet2 q = random_cubic(rng, 6, 0.0, 0.0, b);
      const Jet2 pq = p * q;
      // Coefficient of u^a v^b of the product, by explicit convolution.
      const int ea[10] = {0, 1, 0, 2, 1, 0, 3, 2, 1, 0}, eb[10] = {0, 0, 1, 0, 1, 2, 0, 1, 2, 3};
      for (int da = 0; da <= 6; ++da) {
        for (int db = 0; da + db <= 6; ++db) {
          double ref = 0.0;
          for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
              if (ea[i] + ea[j] == da && eb[i] + eb[j] == db) ref += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
          CHECK(pq.coeff(da, db) == doctest::Approx(ref).epsilon(1e-13).scale(1.0));
        }
      }
    }
  }

  TEST_CASE("chain rule for linear angles") {
    // sin(2u - 3v) about (0.4, 0.1): c_ab = (2^a (-3)^b / (a! b!)) sin^{(a+b)}(0.5)
    const Jet2 u = Jet2::variable_u(8, 0.4), v = Jet2::variable_v(8, 0.1);
    const Jet2 s = sin(2.0 * u - 3.0 * v);
    for (int a = 0; a <= 4; ++a) {
      for (int b = 0; a + b <= 8; ++b) {
        const int n = a + b;
        const double d = (n % 4 == 0) ? std::sin(0.5) : (n % 4 == 1) ? std::cos(0.5) : (n % 4 == 2) ? -std::sin(0.5) : -std::cos(0.5);
        const double ref = std::pow(2.0, a) * std::pow(-3.0, b) * d / (std::tgamma(a + 1.0) * std::tgamma(b + 1.0));
        CHECK(s.coeff(a, b) == doctest::Approx(ref).epsilon(1e-13).scale(1.0));
      }
    }
  }

  TEST_CASE("division and reciprocal invert multiplication") {
    const Jet2 u = Jet2::variable_u(7, 0.2), v = Jet2::variable_v(7, 0.5);
    const Jet2 x = exp(u * v) + cos(u) * 2.0;
    const Jet2 r = (x / x) - 1.0;
    for (std::size_t k = 0; k < Jet2::size_for(7); ++k) CHECK(std::abs(r[k]) < 1e-13);
    const Jet2 sq = sqrt(x);
    const Jet2 d = sq * sq - x;
    for (std::size_t k = 0; k < Jet2::size_for(7); ++k) CHECK(std::abs(d[k]) < 1e-12);
  }

  TEST_CASE("Clifford torus jets") {
    const auto& c = *catalog_get("clifford-s3").chart;
    const JetVector j = jet_eval(c, {0.0, 0.0}, 2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(j[0].value() == doctest::Approx(r));
    CHECK(j[2].value() == doctest::Approx(r));
    CHECK(j[1].derivative(1, 0) == doctest::Approx(r));
    CHECK(j[0].derivative(2, 0) == doctest::Approx(-r));
    double n2 = 0.0;
    for (const auto& x : j) n2 += x.value() * x.value();
    CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-12);
  }

  TEST_CASE("order-6 coefficients agree with central differences") {
    // Each coefficient c_{a+1,b} is compared with the central difference
    // (step 1e-2, Richardson extrapolated with 5e-3) of the neighbouring
    // expansions' c_{a,b}, so every retained order is checked.
    const double h = 1e-2;
    auto coef = [](const JetVector& j, std::size_t k, int a, int b) {
      return j[k].derivative(a, b) / (std::tgamma(a + 1.0) * std::tgamma(b + 1.0));
    };
    for (const auto& e : catalog()) {
      CAPTURE(e.label);
      const Vec2 p = e.chart->domain().center() + Vec2(0.137, -0.071);
      const JetVector j = jet_eval(*e.chart, p, 6);
      const JetVector jp = jet_eval(*e.chart, p + Vec2(h, 0), 6), jm = jet_eval(*e.chart, p - Vec2(h, 0), 6);
      const JetVector jp2 = jet_eval(*e.chart, p + Vec2(h / 2, 0), 6), jm2 = jet_eval(*e.chart, p - Vec2(h / 2, 0), 6);
      double worst = 0.0;
      for (std::size_t k = 0; k < j.size(); ++k) {
        for (int a = 0; a < 6; ++a) {
          for (int b = 0; a + 1 + b <= 6; ++b) {
            // d/du c_{a,b} = (a + 1) c_{a+1,b}
            const double d1 = (coef(jp, k, a, b) - coef(jm, k, a, b)) / (2 * h);
            const double d2 = (coef(jp2, k, a, b) - coef(jm2, k, a, b)) / h;
            const double fd = (4 * d2 - d1) / 3 / (a + 1);
            const double ex = coef(j, k, a + 1, b);
            worst = std::max(worst, std::abs(fd - ex) / std::max(1.0, std::abs(ex)));
          }
        }
      }
      CHECK(worst < 1e-6);
    }
  }
}
