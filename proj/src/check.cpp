#include "strauss/check.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "strauss/entropy.hpp"
#include "strauss/families.hpp"
#include "strauss/step_graphon.hpp"

namespace strauss {

namespace {

struct Suite {
  std::ostream& out;
  bool all_ok = true;

  void report(const char* name, double err, double tol) {
    const bool ok = err <= tol;
    all_ok &= ok;
    out << (ok ? "[ok]   " : "[FAIL] ") << name << "  (max err " << err
        << ", tol " << tol << ")\n";
  }
};

// Random valid parameter draws for the (2,1)-symmetric family. The margin
// keeps blocks away from {0,1}; derivative checks need a wider one because
// H''' grows like 1/u^2 and inflates the finite-difference truncation.
std::vector<Sym21Params> draw_params(int draws, bool with_D, double margin) {
  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> ue(0.05, 0.45), uc(0.01, 0.5),
      ua(-0.3, 0.3), ub(-0.2, 0.3), ud(-0.1, 0.1);
  std::vector<Sym21Params> out;
  while (static_cast<int>(out.size()) < draws) {
    Sym21Params p{ue(rng), ua(rng), ub(rng), uc(rng), with_D ? ud(rng) : 0.0};
    const Sym21Blocks b = sym21_blocks(p);
    if (b.g11 > margin && b.g11 < 1 - margin && b.g12 > margin &&
        b.g12 < 1 - margin && b.g13 > margin && b.g13 < 1 - margin &&
        b.g33 > margin && b.g33 < 1 - margin)
      out.push_back(p);
  }
  return out;
}

double fd_dS_dD(const Sym21Params& p, int order, double h) {
  auto S = [&](double D) {
    Sym21Params q = p;
    q.D = D;
    return sym21_entropy(q);
  };
  if (order == 1) return (S(h) - S(-h)) / (2.0 * h);
  return (S(h) - 2.0 * S(0.0) + S(-h)) / (h * h);
}

} // namespace

bool run_check(int n_grid, int draws, std::ostream& out) {
  Suite s{out};

  // Closed-form triangle and entropy against the generic functionals.
  {
    double err_t = 0, err_s = 0, err_e = 0, err_deg = 0;
    for (const auto& p : draw_params(draws, true, 1e-3)) {
      const StepGraphon g = sym21_graphon(p);
      err_t = std::max(err_t, std::abs(sym21_triangle(p) - triangle_density(g)));
      err_s = std::max(err_s, std::abs(sym21_entropy(p) - graphon_entropy(g)));
      err_e = std::max(err_e, std::abs(edge_density(g) - p.e));
      const auto d = degree_vector(g);
      const double d_small = p.e + 0.5 * (1.0 - p.c) * p.D;
      const double d_big = p.e - 0.5 * p.c * p.D;
      err_deg = std::max({err_deg, std::abs(d[0] - d_small),
                          std::abs(d[1] - d_small), std::abs(d[2] - d_big)});
    }
    s.report("sym21 triangle closed form vs generic", err_t, 1e-13);
    s.report("sym21 entropy closed form vs generic", err_s, 1e-13);
    s.report("sym21 edge density is e", err_e, 1e-14);
    s.report("sym21 degree split", err_deg, 1e-14);
  }

  // Constant-degree ansatz triangle density e^3 - c^3 (A^3 - B^3).
  {
    double err = 0;
    for (auto p : draw_params(draws, false, 1e-3)) {
      p.D = 0.0;
      const StepGraphon g = sym21_graphon(p);
      const double expect =
          p.e * p.e * p.e -
          p.c * p.c * p.c * (p.A * p.A * p.A - p.B * p.B * p.B);
      err = std::max(err, std::abs(triangle_density(g) - expect));
    }
    s.report("ansatz triangle density e^3 - c^3(A^3-B^3)", err, 1e-13);
  }

  // Corner-embedding coefficient vs F on the bipodal base family.
  {
    double err = 0;
    for (double e : {0.05, 0.1, 0.2, 0.3}) {
      for (double A : {0.2, 0.4, 0.5}) {
        for (double B : {0.0, 0.05, 0.15}) {
          if (e + A + B >= 1.0 || e - A + B <= 0.0 || A <= B) continue;
          const StepGraphon g0 = StepGraphon(
              {0.5, 0.5},
              {{e - A + B, e + A + B}, {e + A + B, e - A + B}});
          err = std::max(err, std::abs(corner_coefficient(g0, e) -
                                       F_coefficient(e, A, B)));
        }
      }
    }
    s.report("corner coefficient equals F on bipodal base", err, 1e-13);
  }

  // Exact D-derivatives vs central differences.
  {
    double err1 = 0, err2 = 0;
    for (auto p : draw_params(std::min(draws, 200), false, 0.08)) {
      p.D = 0.0;
      err1 = std::max(err1,
                      std::abs(sym21_dS_dD(p, 1) - fd_dS_dD(p, 1, 1e-4)));
      err2 = std::max(err2,
                      std::abs(sym21_dS_dD(p, 2) - fd_dS_dD(p, 2, 1e-4)));
    }
    s.report("dS/dD at D=0 vs finite differences", err1, 1e-7);
    s.report("d2S/dD2 at D=0 vs finite differences", err2, 1e-7);
  }

  // Bipodal identities.
  {
    double err_t = 0, err_s = 0;
    for (double e : {0.1, 0.2, 0.3, 0.45}) {
      for (double d : {0.0, 0.01, 0.05, 0.09}) {
        const StepGraphon g = symmetric_bipodal(e, d);
        err_t = std::max(err_t, std::abs(triangle_density(g) -
                                         (e * e * e - d * d * d)));
        err_s = std::max(err_s,
                         std::abs(graphon_entropy(g) - bipodal_entropy(e, d)));
      }
    }
    s.report("bipodal triangle density e^3 - d^3", err_t, 1e-14);
    s.report("bipodal entropy closed form vs generic", err_s, 1e-14);
  }

  // Permutation and pode-split invariance of the functionals.
  {
    double err = 0;
    std::mt19937_64 rng(0xabcdu);
    std::uniform_real_distribution<double> uv(0.05, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> sizes{0.2, 0.5, 0.3};
      std::vector<std::vector<double>> vals(3, std::vector<double>(3));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) vals[i][j] = vals[j][i] = uv(rng);
      const StepGraphon g(sizes, vals);
      const StepGraphon gp = g.permuted({2, 0, 1});
      const StepGraphon gs = g.with_split_pode(1, 0.4);
      for (const StepGraphon* h : {&gp, &gs}) {
        err = std::max(err, std::abs(edge_density(g) - edge_density(*h)));
        err = std::max(err,
                       std::abs(triangle_density(g) - triangle_density(*h)));
        err = std::max(err,
                       std::abs(graphon_entropy(g) - graphon_entropy(*h)));
      }
      // size-weighted degrees resum to the edge density
      const auto deg = degree_vector(g);
      double resum = 0;
      for (int i = 0; i < 3; ++i) resum += sizes[i] * deg[i];
      err = std::max(err, std::abs(resum - edge_density(g)));
    }
    s.report("permutation/split invariance, degree resum", err, 1e-14);
  }

  // Grid oracle against the exact sums.
  {
    const GridFunctionals c = riemann_oracle(StepGraphon::constant(0.5), n_grid);
    const double errc = std::max({std::abs(c.edge - 0.5),
                                  std::abs(c.triangle - 0.125),
                                  std::abs(c.entropy - std::log(2.0))});
    s.report("oracle on constant 1/2 (aligned)", errc, 1e-12);

    const StepGraphon bip = symmetric_bipodal(0.2, 0.1);
    const GridFunctionals b = riemann_oracle(bip, n_grid % 2 ? n_grid + 1 : n_grid);
    const double errb = std::max({std::abs(b.edge - 0.2),
                                  std::abs(b.triangle - 0.007),
                                  std::abs(b.entropy - bipodal_entropy(0.2, 0.1))});
    s.report("oracle on bipodal (aligned grid)", errb, 1e-12);

    const double r2 = std::sqrt(2.0) - 1.0, r3 = 0.5 * (std::sqrt(3.0) - 1.0);
    const StepGraphon irr({r2, r3, 1.0 - r2 - r3},
                          {{0.15, 0.4, 0.65}, {0.4, 0.8, 0.3}, {0.65, 0.3, 0.5}});
    const GridFunctionals o = riemann_oracle(irr, n_grid);
    const double erri = std::max(
        {std::abs(o.edge - edge_density(irr)),
         std::abs(o.triangle - triangle_density(irr)),
         std::abs(o.entropy - graphon_entropy(irr))});
    s.report("oracle on irrational podes (O(1/n))", erri, 5.0 / n_grid);
  }

  out << (s.all_ok ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
  return s.all_ok;
}

} // namespace strauss
