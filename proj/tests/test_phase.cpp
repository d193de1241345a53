#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "strauss/entropy.hpp"
#include "strauss/families.hpp"
#include "strauss/phase.hpp"

using namespace strauss;
using namespace strauss::phase;

namespace {

const BranchMax* find_branch(const std::vector<BranchMax>& v, Branch b) {
  for (const auto& bm : v)
    if (bm.branch == b) return &bm;
  return nullptr;
}

} // namespace

TEST_CASE("threshold constant") {
  CHECK(e_threshold() ==
        doctest::Approx((3.0 - std::sqrt(3.0)) / 6.0).epsilon(1e-16));
  CHECK(e_threshold() == doctest::Approx(0.2113248654).epsilon(1e-9));
}

TEST_CASE("F maximization across regimes") {
  // comfortably below the threshold: positive advantage over H''
  {
    const auto bs = maximize_F_at(0.15);
    REQUIRE(!bs.empty());
    CHECK(bs.front().max.value - h_entropy(0.15, 2) > 0.01);
    CHECK(bs.front().max.converged);
  }
  // pinned optimum at e = 0.1 (verified against an independent run)
  {
    const auto bs = maximize_F_at(0.1);
    const auto& top = bs.front().max;
    CHECK(top.point[0] == doctest::Approx(0.1029157).epsilon(2e-5));
    CHECK(top.point[1] == doctest::Approx(0.0333466).epsilon(2e-4));
    CHECK(top.value == doctest::Approx(-10.9889206).epsilon(1e-7));
  }
  // above the threshold no advantage survives
  CHECK(F_max(0.25) <= h_entropy(0.25, 2) + 1e-6);
  // at very low density the large-amplitude branch dominates
  {
    const auto bs = maximize_F_at(0.001);
    const auto* oe = find_branch(bs, Branch::OE);
    const auto* t1 = find_branch(bs, Branch::Theta1);
    REQUIRE(oe != nullptr);
    REQUIRE(t1 != nullptr);
    CHECK(t1->max.value > oe->max.value);
    CHECK(oe->max.point[0] == doctest::Approx(2.39e-3).epsilon(0.05));
    CHECK(oe->max.point[1] == doctest::Approx(1.43e-3).epsilon(0.05));
  }
  // explicit seeds are refined as given
  {
    const auto bs = maximize_F_at(0.1, {{0.1, 0.03}});
    REQUIRE(bs.size() == 1);
    CHECK(bs[0].max.value == doctest::Approx(-10.9889206).epsilon(1e-7));
  }
  CHECK_THROWS_AS(maximize_F_at(0.6), std::domain_error);
}

TEST_CASE("fm curve") {
  const auto single = fm_curve(0.15, 0.15, 0.001);
  REQUIRE(single.rows.size() == 1);
  const auto bs = maximize_F_at(0.15);
  CHECK(single.rows[0][3] ==
        doctest::Approx(bs.front().max.value).epsilon(1e-9));

  const auto table = fm_curve(0.15, 0.17, 0.001);
  REQUIRE(table.rows.size() == 21);
  CHECK(table.columns ==
        std::vector<std::string>{"e", "A", "B", "F_m", "Hpp", "gap"});
  const auto gap = table.column("gap");
  for (std::size_t i = 1; i < gap.size(); ++i) {
    CHECK(gap[i] > 0.0);
    CHECK(gap[i] < gap[i - 1] + 1e-9); // decays toward the threshold
  }
}

TEST_CASE("scaling fit recovers exact power laws") {
  SweepTable t;
  t.kind = "fm-curve";
  t.columns = {"e", "A", "B", "F_m", "Hpp", "gap"};
  const double e0 = e_threshold();
  for (double h = 0.005; h <= 0.05; h += 0.001) {
    t.rows.push_back({e0 - h, 2.0 * h, 3.0 * h * h, 0.0, 0.0,
                      5.0 * h * h * h});
  }
  const auto fit = scaling_fit(t, 0.005, 0.05);
  CHECK(fit.slope_A == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fit.slope_B == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.slope_gap == doctest::Approx(3.0).epsilon(1e-10));

  // a window straddling the threshold has nonpositive gaps
  SweepTable bad = t;
  bad.rows.push_back({e0 + 0.002, 1e-3, 1e-4, 0.0, 0.0, -1e-8});
  CHECK_THROWS_AS(scaling_fit(bad, -0.003, 0.05), std::runtime_error);
  CHECK_THROWS_AS(scaling_fit(t, 0.0049, 0.0052), std::invalid_argument);
}

TEST_CASE("deficit maximization at the anchor density") {
  const auto ansatz = delta_max(0.1, DMode::Ansatz);
  REQUIRE(ansatz.has_value());
  CHECK(ansatz->converged);
  CHECK(ansatz->delta_m == doctest::Approx(0.004471).epsilon(2e-3));
  CHECK(std::abs(ansatz->S_tri - ansatz->S_sb) <= 1e-10);
  CHECK(ansatz->D == 0.0);

  const auto freed = delta_max(0.1, DMode::FreeD);
  REQUIRE(freed.has_value());
  CHECK(freed->converged);
  CHECK(freed->delta_m == doctest::Approx(0.004753).epsilon(2e-3));
  CHECK(std::abs(freed->S_tri - freed->S_sb) <= 1e-10);
  CHECK(freed->delta_m >= ansatz->delta_m);

  // the winning family is a genuine local maximum: small parameter nudges
  // do not increase the entropy at fixed deficit
  {
    const double e = 0.1, d = freed->delta_m;
    const double base = freed->S_tri;
    for (double s : {-1e-5, 1e-5}) {
      const Sym21Params nudged{e,
                              0.0, // A recomputed below
                              freed->B + s, freed->c, freed->D};
      // recover A so the triangle constraint still holds
      const double d2 = nudged.D * nudged.D;
      const double extra = d * d * d +
                           0.75 * e * nudged.c * (1 - nudged.c) * d2 +
                           0.75 * nudged.c * nudged.c * (1 - nudged.c) *
                               nudged.B * d2;
      Sym21Params q = nudged;
      q.A = std::cbrt(q.B * q.B * q.B + extra / (q.c * q.c * q.c));
      CHECK(sym21_entropy(q) <= base + 1e-11);
    }
  }

  CHECK(!delta_max(0.25, DMode::Ansatz).has_value());
  CHECK(!delta_max(0.25, DMode::FreeD).has_value());
}

TEST_CASE("deficit maximization is continuable in e") {
  const auto anchor = delta_max(0.1, DMode::FreeD);
  REQUIRE(anchor.has_value());
  for (double e : {0.099, 0.101}) {
    auto row = delta_max(e, DMode::FreeD, &*anchor);
    REQUIRE(row.has_value());
    CHECK(row->converged);
    CHECK(std::abs(row->delta_m - anchor->delta_m) < 5e-5);
  }
}

TEST_CASE("boundary curve over a short window") {
  const auto table = boundary_curve(0.095, 0.105, 0.001, DMode::Ansatz);
  REQUIRE(table.rows.size() == 11);
  const auto e = table.column("e");
  const auto dm = table.column("delta_m");
  for (std::size_t i = 0; i < e.size(); ++i) {
    REQUIRE(std::isfinite(dm[i]));
    CHECK(dm[i] < 0.11 * e[i]);
    if (i > 0) CHECK(std::abs(dm[i] - dm[i - 1]) < 1e-4); // smooth
  }
  CHECK(*table.find_meta("d_mode") == std::string("ansatz"));
}

TEST_CASE("vanishing-deficit limit matches the F maximizer") {
  const auto bs = maximize_F_at(0.1);
  const auto* oe = find_branch(bs, Branch::OE);
  REQUIRE(oe != nullptr);
  const auto fit =
      best_tripodal(0.1, 1e-4, DMode::Ansatz, fit_from_branch(0.1, *oe));
  CHECK(std::abs(fit.A - oe->max.point[0]) < 1e-3);
  CHECK(std::abs(fit.B - oe->max.point[1]) < 1e-3);
  CHECK(fit.converged);
}

TEST_CASE("free degree split beats the pinned one by a whisker") {
  const auto bs = maximize_F_at(0.1);
  const auto* oe = find_branch(bs, Branch::OE);
  REQUIRE(oe != nullptr);
  const auto seed = fit_from_branch(0.1, *oe);
  TripodalFit a = seed, f = seed;
  for (int k = 1; k <= 6; ++k) {
    const double d = 5e-4 * k;
    a = best_tripodal(0.1, d, DMode::Ansatz, a);
    f = best_tripodal(0.1, d, DMode::FreeD, f);
  }
  const double diff = f.entropy - a.entropy;
  CHECK(diff >= -1e-14);
  CHECK(diff < 1e-7); // the degree split only matters at fourth order
  // and the free solution still honors the triangle constraint exactly
  const auto g = sym21_graphon({0.1, f.A, f.B, f.c, f.D});
  CHECK(triangle_density(g) ==
        doctest::Approx(1e-3 - f.delta * f.delta * f.delta).epsilon(1e-12));
}

TEST_CASE("trace in the deficit") {
  const auto table = trace_vs_delta(0.1, DMode::FreeD, 2e-4);
  REQUIRE(table.rows.size() > 20);
  const auto* cross = table.find_meta("crossing_delta");
  REQUIRE(cross != nullptr);
  CHECK(std::stod(*cross) == doctest::Approx(0.004753).epsilon(5e-3));

  const auto d = table.column("delta");
  const auto c = table.column("c");
  const auto B = table.column("B");
  const auto gap = table.column("S_gap");
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (!std::isfinite(c[i])) continue;
    CHECK(c[i] > c[i - 1]);           // widths grow with the deficit
    CHECK(B[i] < B[i - 1] + 1e-6);    // background amplitude declines
    // no parameter jumps across the boundary crossing
    CHECK(std::abs(c[i] - c[i - 1]) < 1e-2);
  }
  // the entropy gap changes sign exactly once
  int changes = 0;
  for (std::size_t i = 1; i < gap.size(); ++i)
    if ((gap[i] > 0) != (gap[i - 1] > 0)) ++changes;
  CHECK(changes == 1);
}

TEST_CASE("pinned and free traces stay close") {
  const auto ta = trace_vs_delta(0.1, DMode::Ansatz, 5e-4, 4e-3);
  const auto tf = trace_vs_delta(0.1, DMode::FreeD, 5e-4, 4e-3);
  REQUIRE(ta.rows.size() == tf.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    for (const char* col : {"A", "B", "c"}) {
      const double va = ta.rows[i][ta.column_index(col)];
      const double vf = tf.rows[i][tf.column_index(col)];
      CHECK(std::abs(va - vf) / std::abs(vf) < 0.1);
    }
  }
}

TEST_CASE("branch competition at low density") {
  CHECK(branch_crossover() == doctest::Approx(0.0024).epsilon(0.1));

  const auto cross = theta1_crossing(0.001);
  REQUIRE(cross.has_value());
  CHECK(*cross > 0.0);
  CHECK(*cross < 0.1 * 0.001); // hugs the independence curve tightly

  CHECK(!theta1_crossing(0.005).has_value());
  CHECK_THROWS_AS(theta1_crossing(0.02), std::invalid_argument);
}

TEST_CASE("point classification") {
  // at the curve itself the families merge
  const auto flat = classify_point(0.1, 1e-3);
  CHECK(flat.label == Branch::Bipodal);
  CHECK(flat.delta < 1e-6); // e^3 rounds a hair above 1e-3

  // just below the curve the small-amplitude tripodal family wins
  const auto tri = classify_point(0.1, 1e-3 - 1e-9);
  CHECK(tri.label == Branch::OE);
  REQUIRE(tri.tripodal.has_value());
  CHECK(tri.entropy > bipodal_entropy(0.1, std::cbrt(1e-9)));

  // far below it the bipodal graphon wins
  const double t_far = 1e-3 - 1e-6; // delta = 0.01 past the boundary
  CHECK(classify_point(0.1, t_far).label == Branch::Bipodal);

  // at very low density and tiny deficit the large-amplitude family wins
  const double e = 0.001;
  const double t_tiny = e * e * e - 1e-15;
  CHECK(classify_point(e, t_tiny).label == Branch::Theta1);

  CHECK_THROWS_AS(classify_point(0.1, 1.1e-3), std::invalid_argument);
  CHECK_THROWS_AS(classify_point(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("classification is stable under tighter solver tolerances") {
  int idx = 0;
  for (double e : {0.002, 0.05, 0.1, 0.15}) {
    for (double frac : {0.2, 0.5, 0.8, 0.99, 0.999}) {
      ++idx;
      const double dm_guess = 0.05 * e; // spans both sides of the boundary
      const double delta = frac * dm_guess;
      const double t = e * e * e - delta * delta * delta;
      if (!(t > 0.0)) continue;
      const auto a = classify_point(e, t, 1.0);
      const auto b = classify_point(e, t, 0.1);
      CHECK(a.label == b.label);
    }
  }
  CHECK(idx == 20);
}
