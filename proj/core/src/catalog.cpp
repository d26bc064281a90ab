#include "isosurf/catalog.hpp"

#include <cmath>
#include <numbers>

#include "isosurf/errors.hpp"

namespace isosurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

CatalogEntry entry(std::string label, std::string description, AmbientSpace ambient, Domain domain,
                   std::vector<Vec2> periods, Formula formula, Expected expected) {
  expected.ambient = ambient;
  expected.levels = ambient.normal_levels();
  expected.periodic = !periods.empty();
  auto chart = std::make_shared<FormulaChart>(label, ambient, domain, std::move(periods), std::move(formula));
  return {std::move(label), std::move(description), std::move(chart), std::move(expected)};
}

std::vector<CatalogEntry> build() {
  const Expr u = Expr::u(), v = Expr::v();
  std::vector<CatalogEntry> out;

  {
    Formula f{{cos(u), sin(u), cos(v), sin(v)}, std::nullopt, 1.0 / std::sqrt(2.0)};
    Expected e;
    e.ranks = {1};
    e.moduli = "finite";
    out.push_back(entry("clifford-s3", "Clifford torus in S^3", AmbientSpace::sphere(3), {0, kTwoPi, 0, kTwoPi},
                        {{kTwoPi, 0}, {0, kTwoPi}}, std::move(f), e));
  }
  {
    const Expr x = sin(u) * cos(v), y = sin(u) * sin(v), z = cos(u);
    Formula f{{y * z, x * z, x * y, (x * x - y * y) / 2.0, (x * x + y * y - 2.0 * z * z) / (2.0 * std::sqrt(3.0))},
              std::nullopt,
              std::sqrt(3.0)};
    Expected e;
    e.ranks = {2};
    e.moduli = "circle";
    out.push_back(entry("veronese-s4", "Veronese surface in S^4 (polar chart of the 2-sphere)",
                        AmbientSpace::sphere(4), {0.3, kPi - 0.3, 0, kTwoPi}, {{0, kTwoPi}}, std::move(f), e));
  }
  {
    Formula f{{cos(u), sin(u), cos(v), sin(v), cos(u + v), -sin(u + v)}, std::nullopt, 1.0 / std::sqrt(3.0)};
    Expected e;
    e.ranks = {2, 1};
    e.moduli = "finite";
    out.push_back(entry("equilateral-s5", "equilateral flat torus in S^5", AmbientSpace::sphere(5),
                        {0, kTwoPi, 0, kTwoPi}, {{kTwoPi, 0}, {0, kTwoPi}}, std::move(f), e));
  }
  {
    Formula f{{u, v, u * u - v * v, 2.0 * u * v}, std::nullopt, 1.0};
    Expected e;
    e.ranks = {2};
    out.push_back(entry("holo-r4", "holomorphic curve z -> (z, z^2) in R^4", AmbientSpace::euclidean(4),
                        {-1, 1, -1, 1}, {}, std::move(f), e));
  }
  {
    // Enneper's surface plus the conjugate-holomorphic curve exp(conj z):
    // both conformal harmonic with cancelling Hopf differentials.
    Formula f{{u - (pow(u, 3) - 3.0 * u * v * v) / 3.0, -v - (3.0 * u * u * v - pow(v, 3)) / 3.0, u * u - v * v,
               exp(u) * cos(v), -(exp(u) * sin(v))},
              std::nullopt,
              1.0};
    Expected e;
    e.isotropic = false;
    e.ranks = {2, 1};
    out.push_back(entry("nonisotropic-r5", "minimal, non-isotropic surface in R^5 (Enneper + exp of conj z)",
                        AmbientSpace::euclidean(5), {-1, 1, -1, 1}, {}, std::move(f), e));
  }
  {
    const Expr rho = kPi / 4.0 + 0.2 * sin(u);
    Formula f{{cos(u) * cos(rho), sin(u) * cos(rho), cos(v) * sin(rho), sin(v) * sin(rho)}, std::nullopt, 1.0};
    Expected e;
    e.minimal = false;
    e.isotropic = false;
    e.ranks = {1};
    out.push_back(entry("perturbed-nonminimal", "perturbed Clifford torus in S^3 (not minimal)",
                        AmbientSpace::sphere(3), {0, kTwoPi, 0, kTwoPi}, {{kTwoPi, 0}, {0, kTwoPi}}, std::move(f),
                        e));
  }
  {
    Formula f{{exp(u) * cos(v), exp(u) * sin(v), exp(2.0 * u) * cos(2.0 * v) / 2.0, exp(2.0 * u) * sin(2.0 * v) / 2.0},
              std::nullopt,
              1.0};
    Expected e;
    e.ranks = {2};
    e.moduli = "circle";
    out.push_back(entry("holo-cyl-r4", "holomorphic curve z -> (e^z, e^{2z}/2) in R^4, periodic in v",
                        AmbientSpace::euclidean(4), {-0.5, 0.5, 0, kTwoPi}, {{0, kTwoPi}}, std::move(f), e));
  }
  {
    Formula f{{u, v, pow(u, 3) - 3.0 * u * v * v, 3.0 * u * u * v - pow(v, 3)}, std::nullopt, 1.0};
    Expected e;
    e.ranks = {2};
    e.has_nonregular_node = true;
    out.push_back(entry("holo-cubic-r4", "holomorphic curve z -> (z, z^3) in R^4, branch of N_1 at z = 0",
                        AmbientSpace::euclidean(4), {-1, 1, -1, 1}, {}, std::move(f), e));
  }
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

std::vector<std::string> catalog_labels() {
  std::vector<std::string> r;
  for (const auto& e : catalog()) r.push_back(e.label);
  return r;
}

const CatalogEntry& catalog_get(const std::string& label) {
  for (const auto& e : catalog())
    if (e.label == label) return e;
  std::string known;
  for (const auto& e : catalog()) known += (known.empty() ? "" : ", ") + e.label;
  throw ValidationError("unknown catalog label '" + label + "' (known: " + known + ")");
}

}  // namespace isosurf
