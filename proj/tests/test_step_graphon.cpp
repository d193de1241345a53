#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "strauss/entropy.hpp"
#include "strauss/families.hpp"
#include "strauss/step_graphon.hpp"

using namespace strauss;

namespace {

StepGraphon random_graphon(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> uv(0.02, 0.98), us(0.2, 1.0);
  std::vector<double> sizes(k);
  double total = 0;
  for (auto& s : sizes) total += (s = us(rng));
  for (auto& s : sizes) s /= total;
  // renormalize exactly enough for the 1e-12 gate
  double resum = 0;
  for (double s : sizes) resum += s;
  sizes.back() += 1.0 - resum;
  std::vector<std::vector<double>> v(k, std::vector<double>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) v[i][j] = v[j][i] = uv(rng);
  return StepGraphon(sizes, v);
}

} // namespace

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(StepGraphon({0.5, 0.6}, {{0.1, 0.2}, {0.2, 0.1}}),
                  std::domain_error); // sizes sum to 1.1
  CHECK_THROWS_AS(StepGraphon({1.0, 0.0}, {{0.1, 0.2}, {0.2, 0.1}}),
                  std::domain_error); // zero-width pode
  CHECK_THROWS_AS(StepGraphon({0.5, 0.5}, {{0.1, 0.2}, {0.3, 0.1}}),
                  std::domain_error); // asymmetric
  CHECK_THROWS_AS(StepGraphon({0.5, 0.5}, {{0.1, 1.2}, {1.2, 0.1}}),
                  std::domain_error); // value far outside [0,1]
  CHECK_THROWS_AS(StepGraphon({1.0}, {{0.1, 0.2}}), std::domain_error);

  // values within 1e-12 of the boundary are clamped onto it
  const StepGraphon g({1.0}, {{1.0 + 5e-13}});
  CHECK(g.value(0, 0) == 1.0);
  const StepGraphon h({1.0}, {{-5e-13}});
  CHECK(h.value(0, 0) == 0.0);
}

TEST_CASE("constant graphon functionals") {
  for (double p : {0.0, 0.3, 0.5, 1.0}) {
    const auto g = StepGraphon::constant(p);
    CHECK(edge_density(g) == p);
    CHECK(triangle_density(g) == p * p * p); // exact
    CHECK(graphon_entropy(g) ==
          doctest::Approx(h_entropy(p, 0)).epsilon(1e-15));
    CHECK(degree_vector(g)[0] == p);
  }
  CHECK(graphon_entropy(StepGraphon::constant(0.5)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("two-podal functionals against the direct sums") {
  const StepGraphon g({0.3, 0.7}, {{0.2, 0.5}, {0.5, 0.8}});
  const double expect =
      0.3 * 0.3 * 0.2 + 2 * 0.3 * 0.7 * 0.5 + 0.7 * 0.7 * 0.8;
  CHECK(edge_density(g) == doctest::Approx(expect).epsilon(1e-15));
  const auto grid = riemann_oracle(g, 1000);
  CHECK(grid.edge == doctest::Approx(edge_density(g)).epsilon(1e-12));
  CHECK(grid.triangle ==
        doctest::Approx(triangle_density(g)).epsilon(5e-3));
  CHECK(grid.entropy == doctest::Approx(graphon_entropy(g)).epsilon(5e-3));
}

TEST_CASE("bipodal densities") {
  CHECK(edge_density(symmetric_bipodal(0.3, 0.1)) ==
        doctest::Approx(0.3).epsilon(1e-15));
  CHECK(triangle_density(symmetric_bipodal(0.2, 0.1)) ==
        doctest::Approx(0.007).epsilon(1e-13));
}

TEST_CASE("functional ranges, permutation and split invariance") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 4;
    const auto g = random_graphon(rng, k);
    const double eps = edge_density(g), tau = triangle_density(g),
                 ent = graphon_entropy(g);
    CHECK(eps >= 0.0);
    CHECK(eps <= 1.0);
    CHECK(tau >= 0.0);
    CHECK(tau <= 1.0);
    CHECK(ent >= 0.0);
    CHECK(ent <= std::log(2.0) + 1e-15);

    std::vector<std::size_t> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = (i + 1) % k;
    const auto gp = g.permuted(perm);
    CHECK(edge_density(gp) == doctest::Approx(eps).epsilon(1e-14));
    CHECK(triangle_density(gp) == doctest::Approx(tau).epsilon(1e-14));
    CHECK(graphon_entropy(gp) == doctest::Approx(ent).epsilon(1e-14));

    const auto gs = g.with_split_pode(trial % k, 0.35);
    CHECK(gs.podes() == g.podes() + 1);
    CHECK(edge_density(gs) == doctest::Approx(eps).epsilon(1e-14));
    CHECK(triangle_density(gs) == doctest::Approx(tau).epsilon(1e-14));
    CHECK(graphon_entropy(gs) == doctest::Approx(ent).epsilon(1e-14));

    const auto deg = degree_vector(g);
    double resum = 0;
    for (int i = 0; i < k; ++i) resum += g.sizes()[i] * deg[i];
    CHECK(resum == doctest::Approx(eps).epsilon(1e-14));
  }
}

TEST_CASE("degree vectors of the tripodal families") {
  const auto g = tripodal_ansatz(0.1, 0.12, 0.05, 0.1);
  for (double d : degree_vector(g))
    CHECK(d == doctest::Approx(0.1).epsilon(1e-14));

  const Sym21Params p{0.1, 0.1, 0.02, 0.05, 0.01};
  const auto deg = degree_vector(sym21_graphon(p));
  CHECK(deg[0] == doctest::Approx(0.1 + 0.95 * 0.01 / 2).epsilon(1e-14));
  CHECK(deg[1] == doctest::Approx(0.1 + 0.95 * 0.01 / 2).epsilon(1e-14));
  CHECK(deg[2] == doctest::Approx(0.1 - 0.05 * 0.01 / 2).epsilon(1e-14));
}

TEST_CASE("grid oracle: aligned grids are exact") {
  CHECK_THROWS_AS(riemann_oracle(StepGraphon::constant(0.5), 15),
                  std::invalid_argument);

  const auto c = riemann_oracle(StepGraphon::constant(0.5), 100);
  CHECK(std::abs(c.edge - 0.5) < 1e-12);
  CHECK(std::abs(c.triangle - 0.125) < 1e-12);
  CHECK(std::abs(c.entropy - std::log(2.0)) < 1e-12);

  const auto b = riemann_oracle(symmetric_bipodal(0.2, 0.1), 200);
  CHECK(std::abs(b.edge - 0.2) < 1e-12);
  CHECK(std::abs(b.triangle - 0.007) < 1e-12);
  CHECK(std::abs(b.entropy - bipodal_entropy(0.2, 0.1)) < 1e-12);
}

TEST_CASE("grid oracle: unaligned podes converge at O(1/n)") {
  const double r2 = std::sqrt(2.0) - 1.0, r3 = 0.5 * (std::sqrt(3.0) - 1.0);
  const StepGraphon g({r2, r3, 1.0 - r2 - r3},
                      {{0.15, 0.4, 0.65}, {0.4, 0.8, 0.3}, {0.65, 0.3, 0.5}});
  const double eps = edge_density(g), tau = triangle_density(g),
               ent = graphon_entropy(g);
  for (int n : {500, 1000, 4000}) {
    const auto o = riemann_oracle(g, n);
    const double bound = 5.0 / n;
    CHECK(std::abs(o.edge - eps) < bound);
    CHECK(std::abs(o.triangle - tau) < bound);
    CHECK(std::abs(o.entropy - ent) < bound);
  }
}

TEST_CASE("JSON round trip") {
  const StepGraphon g({0.25, 0.75}, {{0.1, 0.6}, {0.6, 0.9}});
  const auto back = StepGraphon::from_json(g.to_json());
  CHECK(back.podes() == 2);
  CHECK(back.sizes() == g.sizes());
  CHECK(back.values() == g.values());

  CHECK_THROWS_AS(StepGraphon::from_json("{not json"), std::domain_error);
  CHECK_THROWS_AS(StepGraphon::from_json("{\"sizes\":[1.0]}"),
                  std::domain_error);
  CHECK_THROWS_AS(
      StepGraphon::from_json("{\"sizes\":[1.0],\"values\":[[2.0]]}"),
      std::domain_error);
}
