#include "strauss/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "strauss/entropy.hpp"

namespace strauss::phase {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double hpp(double e) { return h_entropy(e, 2); }

opt::NewtonOptions f_opts(double tol_scale = 1.0) {
  opt::NewtonOptions o;
  o.fd_step = 1e-6;
  o.max_iter = 120;
  o.step_tol *= tol_scale;
  o.grad_tol *= tol_scale;
  return o;
}

// The entropy objectives mix coordinates spanning several orders of
// magnitude (c ~ delta, D ~ delta^2); a 1e-4 difference scale keeps the FD
// Hessian above the rounding floor of the entropy values.
opt::NewtonOptions entropy_opts(double tol_scale = 1.0) {
  opt::NewtonOptions o;
  o.fd_step = 1e-4;
  o.max_iter = 250;
  o.step_tol *= tol_scale;
  o.grad_tol *= tol_scale;
  return o;
}

// F(A,B) masked for the optimizer: NaN outside the region where the
// construction exists (A^3 > B^3 and both H arguments inside [0,1]).
opt::Objective f_objective(double e) {
  return [e](const std::vector<double>& x) {
    const double A = x[0], B = x[1];
    const double diff = A * A * A - B * B * B;
    if (!(diff > 0.0)) return kNan;
    const double num = detail::h_block(e + A + B) + detail::h_block(e - A + B) -
                       2.0 * detail::h_unchecked(e) -
                       2.0 * B * std::log((1.0 - e) / e);
    const double r = std::cbrt(diff);
    return num / (r * r);
  };
}

double entropy_of_blocks(const Sym21Blocks& b, double c) {
  const double cc = 1.0 - c;
  return 0.5 * c * c * (detail::h_block(b.g11) + detail::h_block(b.g12)) +
         2.0 * c * cc * detail::h_block(b.g13) + cc * cc * detail::h_block(b.g33);
}

double recover_A(double e, double B, double c, double D, double delta) {
  const double d2 = D * D;
  const double extra = delta * delta * delta +
                       0.75 * e * c * (1.0 - c) * d2 +
                       0.75 * c * c * (1.0 - c) * B * d2;
  return std::cbrt(B * B * B + extra / (c * c * c));
}

opt::Objective ansatz_objective(double e, double delta) {
  return [e, delta](const std::vector<double>& x) {
    const double A = x[0], B = x[1];
    const double diff = A * A * A - B * B * B;
    if (!(diff > 0.0)) return kNan;
    const double c = delta / std::cbrt(diff);
    if (!(c > 0.0 && c < 1.0)) return kNan;
    return entropy_of_blocks(sym21_blocks({e, A, B, c, 0.0}), c);
  };
}

opt::Objective freed_objective(double e, double delta) {
  return [e, delta](const std::vector<double>& x) {
    const double B = x[0], c = x[1], D = x[2];
    if (!(c > 0.0 && c < 1.0)) return kNan;
    const double A = recover_A(e, B, c, D, delta);
    return entropy_of_blocks(sym21_blocks({e, A, B, c, D}), c);
  };
}

// The large-amplitude (Theta1) maximizer keeps its small diagonal block on
// the zero edge: the entropy pull H'(g11) off the edge loses to the shrink
// of A - B at any representable g11 > 0 when e is small. On that manifold
// A is determined by B through g11 = 0, i.e. A = e + B(1 - c(A, B)).
double pinned_A(double e, double B, double delta) {
  double A = e + B;
  for (int i = 0; i < 40; ++i) {
    const double diff = A * A * A - B * B * B;
    if (!(diff > 0.0)) return kNan;
    const double c = delta / std::cbrt(diff);
    if (!(c > 0.0 && c < 1.0)) return kNan;
    const double next = e + B * (1.0 - c);
    if (std::abs(next - A) < 1e-16) return next;
    A = next;
  }
  return A;
}

opt::Objective theta1_objective(double e, double delta) {
  return [e, delta](const std::vector<double>& x) {
    const double B = x[0];
    if (!(B > 0.0)) return kNan;
    const double A = pinned_A(e, B, delta);
    if (std::isnan(A)) return kNan;
    const double diff = A * A * A - B * B * B;
    const double c = delta / std::cbrt(diff);
    return entropy_of_blocks(sym21_blocks({e, A, B, c, 0.0}), c);
  };
}

// Does the fitted maximizer sit on the zero edge of its small diagonal
// block? Both branches do at very low edge density (the width c reacts so
// strongly to A there that backing off the edge never pays), and the
// held-parameter delta variation must then ride the edge too.
bool edge_pinned(const TripodalFit& p) {
  if (p.branch == Branch::Theta1) return true;
  const Sym21Blocks b = sym21_blocks({p.e, p.A, p.B, p.c, p.D});
  return b.g11 <= 1e-8;
}

// Entropy at fixed parameters as the deficit delta varies: the half of the
// alternation that holds the maximizer still. On a pinned edge only B is an
// independent parameter; A follows from g11 = 0.
double held_entropy(double e, const TripodalFit& p, DMode mode, double delta,
                    bool pinned) {
  if (mode == DMode::Ansatz) {
    if (pinned) {
      const double A = pinned_A(e, p.B, delta);
      if (std::isnan(A)) return kNan;
      const double diff = A * A * A - p.B * p.B * p.B;
      const double c = delta / std::cbrt(diff);
      return entropy_of_blocks(sym21_blocks({e, A, p.B, c, 0.0}), c);
    }
    const double diff = p.A * p.A * p.A - p.B * p.B * p.B;
    if (!(diff > 0.0)) return kNan;
    const double c = delta / std::cbrt(diff);
    if (!(c > 0.0 && c < 1.0)) return kNan;
    return entropy_of_blocks(sym21_blocks({e, p.A, p.B, c, 0.0}), c);
  }
  const double A = recover_A(e, p.B, p.c, p.D, delta);
  return entropy_of_blocks(sym21_blocks({e, A, p.B, p.c, p.D}), p.c);
}

Branch label_by_amplitude(double e, double A) {
  return A < 10.0 * e ? Branch::OE : Branch::Theta1;
}

double delta_cap(double e) { return std::min(e, 1.0 - e); }

} // namespace

double e_threshold() { return (3.0 - std::sqrt(3.0)) / 6.0; }

const char* to_string(Branch b) {
  switch (b) {
    case Branch::OE: return "O_E";
    case Branch::Theta1: return "THETA_1";
    default: return "BIPODAL";
  }
}

const char* to_string(DMode m) {
  return m == DMode::Ansatz ? "ansatz" : "free";
}

std::vector<BranchMax> maximize_F_at(double e,
                                     const std::vector<std::vector<double>>& seeds) {
  if (!(e > 0.0 && e < 0.5))
    throw std::domain_error("maximize_F_at: e outside (0, 1/2)");
  const auto f = f_objective(e);
  std::vector<BranchMax> out;

  auto refine = [&](const std::vector<double>& seed) {
    auto m = opt::newton_maximize(f, seed, f_opts());
    out.push_back({label_by_amplitude(e, m.point[0]), std::move(m)});
  };

  if (!seeds.empty()) {
    for (const auto& s : seeds) refine(s);
  } else {
    const double hi = std::min(10.0 * e, 0.45);
    auto cands = opt::grid_scan(f, {{1e-9, hi}, {1e-9, hi}}, {96, 96});
    if (!cands.empty()) refine(cands.front().point);

    // Large-amplitude basin. Its maximizer sits numerically on the
    // H(e-A+B) = H(0) edge (the balancing argument puts e-A+B below any
    // representable positive double for small e), so FD stencils at the
    // corner seed (1/2, 1/2-e) are blocked in both axes. Refine along the
    // edge B = A - e first, then polish in the full plane.
    auto edge = [&f, e](const std::vector<double>& a) {
      return f({a[0], a[0] - e});
    };
    const auto em = opt::newton_maximize(edge, {0.5}, f_opts());
    refine({em.point[0], em.point[0] - e});
  }

  // Collapse duplicates that refined into the same point.
  std::sort(out.begin(), out.end(), [](const BranchMax& a, const BranchMax& b) {
    return a.max.value > b.max.value;
  });
  std::vector<BranchMax> dedup;
  for (auto& bm : out) {
    bool dup = false;
    for (const auto& kept : dedup) {
      if (std::abs(kept.max.point[0] - bm.max.point[0]) < 1e-6 &&
          std::abs(kept.max.point[1] - bm.max.point[1]) < 1e-6)
        dup = true;
    }
    if (!dup) dedup.push_back(std::move(bm));
  }
  return dedup;
}

double F_max(double e) {
  const auto branches = maximize_F_at(e);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& b : branches) best = std::max(best, b.max.value);
  return best;
}

SweepTable fm_curve(double e_lo, double e_hi, double step) {
  if (!(e_lo > 0.0 && e_hi < 0.5 && e_lo <= e_hi))
    throw std::invalid_argument("fm_curve: range must sit in (0, 1/2)");
  auto start_branches = maximize_F_at(e_lo);
  if (start_branches.empty()) throw std::runtime_error("fm_curve: no maximum found");
  const auto& seed = start_branches.front().max.point;

  opt::ContinuationProblem prob;
  prob.kind = "fm-curve";
  prob.param_column = "e";
  prob.columns = {"A", "B", "F_m", "Hpp", "gap"};
  prob.seed_size = 2;
  prob.solve = [](double e, const std::vector<double>& s)
      -> std::optional<std::vector<double>> {
    auto m = opt::newton_maximize(f_objective(e), s, f_opts());
    if (!m.converged) return std::nullopt;
    const double h2 = hpp(e);
    return std::vector<double>{m.point[0], m.point[1], m.value, h2,
                               m.value - h2};
  };
  auto table = opt::continuation_sweep(prob, e_lo, e_hi, step, seed);
  table.add_meta("e_min", format_double(e_lo));
  table.add_meta("e_max", format_double(e_hi));
  table.add_meta("e_step", format_double(step));
  return table;
}

ScalingFit scaling_fit(const SweepTable& fm, double window_lo,
                       double window_hi) {
  const double e0 = e_threshold();
  const auto e = fm.column("e");
  const auto A = fm.column("A");
  const auto B = fm.column("B");
  const auto gap = fm.column("gap");

  std::vector<double> x, la, lb, lg;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double h = e0 - e[i];
    if (h < window_lo || h > window_hi) continue;
    if (!(A[i] > 0.0 && B[i] > 0.0 && gap[i] > 0.0))
      throw std::runtime_error(
          "scaling_fit: nonpositive data in window (window must sit below the "
          "threshold)");
    x.push_back(std::log(h));
    la.push_back(std::log(A[i]));
    lb.push_back(std::log(B[i]));
    lg.push_back(std::log(gap[i]));
  }
  if (x.size() < 10)
    throw std::invalid_argument("scaling_fit: fewer than 10 rows in window");

  auto slope = [&](const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= x.size();
    my /= x.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
  };
  return {slope(la), slope(lb), slope(lg)};
}

double fm_crossing() {
  const auto table = fm_curve(0.190, 0.2145, 5e-4);
  const auto e = table.column("e");
  const auto gap = table.column("gap");
  // The gap vanishes like a cube near the threshold; extrapolate its cube
  // root linearly through the decade above the rounding floor.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (std::isfinite(gap[i]) && gap[i] >= 1e-6 && gap[i] <= 1e-3) {
      xs.push_back(e[i]);
      ys.push_back(std::cbrt(gap[i]));
    }
  }
  if (xs.size() < 5)
    throw std::runtime_error("fm_crossing: too few clean rows near threshold");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double b = sxy / sxx;
  const double a = my - b * mx;
  return -a / b;
}

TripodalFit fit_from_branch(double e, const BranchMax& branch) {
  TripodalFit fit;
  fit.branch = branch.branch;
  fit.e = e;
  fit.A = branch.max.point[0];
  fit.B = branch.max.point[1];
  fit.entropy = detail::h_unchecked(e);
  fit.converged = branch.max.converged;
  return fit;
}

TripodalFit best_tripodal(double e, double delta, DMode mode,
                          const TripodalFit& seed_in, double tol_scale) {
  if (!(delta > 0.0))
    throw std::domain_error("best_tripodal: delta must be > 0");
  // A seed fitted at another deficit predicts across the step: the pode
  // width rides the deficit linearly and the degree split quadratically.
  TripodalFit seed = seed_in;
  if (seed.delta > 0.0 && seed.c > 0.0 && delta != seed.delta) {
    const double r = delta / seed.delta;
    seed.c *= r;
    seed.D *= r * r;
  }
  TripodalFit fit;
  fit.mode = mode;
  fit.branch = seed.branch;
  fit.e = e;
  fit.delta = delta;

  const auto opts = entropy_opts(tol_scale);
  if (mode == DMode::Ansatz && seed.branch == Branch::Theta1) {
    auto m = opt::newton_maximize(theta1_objective(e, delta), {seed.B}, opts);
    fit.B = m.point[0];
    fit.A = pinned_A(e, fit.B, delta);
    fit.c = c_from_delta(delta, fit.A, fit.B);
    fit.D = 0.0;
    fit.entropy = m.value;
    fit.converged = m.converged;
    fit.iterations = m.iterations;
    return fit;
  }
  if (mode == DMode::Ansatz) {
    // Seeds coming from an F maximizer can sit exactly on a block edge
    // (the large-amplitude branch does); pull A inside before iterating.
    double A = seed.A, B = seed.B;
    for (int pass = 0; pass < 3; ++pass) {
      const double diff = A * A * A - B * B * B;
      if (!(diff > 0.0)) break;
      const double c = delta / std::cbrt(diff);
      if (!(c > 0.0 && c < 1.0)) break;
      const double margin = 1e-9;
      const double g11 = e - A + B * (1.0 - c);
      const double g12 = e + A + B * (1.0 - c);
      if (g11 < margin)
        A = e + B * (1.0 - c) - margin;
      else if (g12 > 1.0 - margin)
        A = 1.0 - margin - e - B * (1.0 - c);
      else
        break;
    }
    auto m = opt::newton_maximize(ansatz_objective(e, delta), {A, B}, opts);
    fit.A = m.point[0];
    fit.B = m.point[1];
    fit.c = c_from_delta(delta, fit.A, fit.B);
    fit.D = 0.0;
    fit.entropy = m.value;
    fit.converged = m.converged;
    fit.iterations = m.iterations;
  } else {
    double c0 = seed.c;
    if (!(c0 > 0.0)) c0 = c_from_delta(delta, seed.A, seed.B);
    auto m = opt::newton_maximize(freed_objective(e, delta),
                                  {seed.B, c0, seed.D}, opts);
    fit.B = m.point[0];
    fit.c = m.point[1];
    fit.D = m.point[2];
    fit.A = recover_A(e, fit.B, fit.c, fit.D, delta);
    fit.entropy = m.value;
    fit.converged = m.converged;
    fit.iterations = m.iterations;
  }
  return fit;
}

namespace {

// Track a tripodal branch from its delta -> 0 seed up to delta_target,
// splitting steps in half (up to 8 levels) whenever a solve fails.
TripodalFit walk_to_delta(double e, double delta_target, DMode mode,
                          TripodalFit fit, double tol_scale = 1.0) {
  const double base_step = std::max(delta_target / 40.0, 1e-4);
  double current = fit.delta;
  while (current < delta_target) {
    double step = std::min(base_step, delta_target - current);
    int depth = 0;
    for (;;) {
      const double next = std::min(current + step, delta_target);
      try {
        fit = best_tripodal(e, next, mode, fit, tol_scale);
        current = next;
        break;
      } catch (const std::domain_error&) {
        if (++depth > 8) throw;
        step *= 0.5;
      }
    }
  }
  return fit;
}

PhaseBoundaryRow row_from_fit(const TripodalFit& fit, double delta,
                              DMode mode) {
  PhaseBoundaryRow row;
  row.e = fit.e;
  row.delta_m = delta;
  row.A = fit.A;
  row.B = fit.B;
  row.c = fit.c;
  row.D = fit.D;
  row.S_tri = fit.entropy;
  row.S_sb = bipodal_entropy(fit.e, delta);
  row.d_mode = mode;
  row.branch = fit.branch;
  return row;
}

// Expand outward from x0 until g changes sign; returns a bracket ordered as
// (positive side, non-positive side), or nullopt when none exists within
// [lo_limit, hi_limit]. A NaN probe marks a feasibility wall: back the span
// off toward the last good point instead of giving up, since g stays defined
// up to the wall itself.
std::optional<std::pair<double, double>> bracket_sign_change(
    const std::function<double(double)>& g, double x0, double lo_limit,
    double hi_limit, double span) {
  double g0 = g(x0);
  if (std::isnan(g0)) return std::nullopt;
  if (g0 == 0.0) return std::make_pair(x0, x0);
  const bool up = g0 > 0.0; // crossing lies above iff currently positive
  double prev = x0;
  for (int k = 0; k < 120; ++k) {
    const double probe = up ? std::min(prev + span, hi_limit)
                            : std::max(prev - span, lo_limit);
    if (std::abs(probe - prev) < 1e-14 * std::max(1.0, std::abs(prev)))
      return std::nullopt; // pinned against a wall or limit, same sign
    const double gp = g(probe);
    if (std::isnan(gp)) {
      span *= 0.3;
      continue;
    }
    if (up ? gp <= 0.0 : gp >= 0.0)
      return up ? std::make_pair(prev, probe) : std::make_pair(probe, prev);
    prev = probe;
    span *= 2.0;
  }
  return std::nullopt;
}

// Alternate between re-equating the tripodal and bipodal entropies in delta
// (parameters held) and re-maximizing the parameters (delta held).
std::optional<PhaseBoundaryRow> alternate_to_boundary(double e, DMode mode,
                                                      TripodalFit fit,
                                                      double delta_hint) {
  double delta = delta_hint;
  const double cap = delta_cap(e);
  bool delta_converged = false;

  // The held-parameter equality step needs a starting point inside the
  // phase: when the seed lands just past the boundary (routine when the
  // swept boundary curve turns), the held curve stays below the bipodal
  // entropy everywhere. Walk inward, re-maximizing, until the true gap is
  // positive.
  {
    // Gaps below ~10 ulps of the entropies cannot be root-solved honestly;
    // such boundaries (right under the threshold) are unresolvable.
    const double gap_floor = 1e-13;
    const double floor_delta = std::max(1e-9, 0.1 * delta_hint);
    double gap = fit.entropy - bipodal_entropy(e, delta);
    double step = std::max(1e-3 * delta, 1e-6);
    int guard = 0;
    while (gap <= gap_floor && ++guard <= 60) {
      double next = delta - step;
      if (next <= floor_delta) next = 0.5 * (delta + floor_delta);
      if (delta - next < 1e-12) return std::nullopt; // pinned at the floor
      delta = next;
      step *= 2.0;
      try {
        fit = best_tripodal(e, delta, mode, fit);
      } catch (const std::domain_error&) {
        return std::nullopt;
      }
      gap = fit.entropy - bipodal_entropy(e, delta);
    }
    if (gap <= gap_floor) return std::nullopt;
  }
  double prev_move = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int outer = 0; outer < 100; ++outer) {
    const bool pinned = mode == DMode::Ansatz && edge_pinned(fit);
    auto g = [&, pinned](double d) {
      const double s = held_entropy(e, fit, mode, d, pinned);
      if (std::isnan(s)) return kNan;
      return s - bipodal_entropy(e, d);
    };
    const auto bracket = bracket_sign_change(
        g, delta, 1e-9, cap, std::max(0.25 * delta, 1e-5));
    if (!bracket) return std::nullopt;
    const double next =
        bracket->first == bracket->second
            ? bracket->first
            : opt::solve_scalar_root(g, bracket->first, bracket->second, 1e-13);
    fit = best_tripodal(e, next, mode, fit);
    const double move = std::abs(next - delta);
    delta = next;
    if (move < 1e-12) {
      delta_converged = true;
      break;
    }
    // Parameter-refit noise puts a floor under the delta moves near the
    // threshold; treat three outer steps without contraction as settled
    // (the entropy-equality check below still gates the row).
    if (move >= 0.3 * prev_move) {
      if (++stalled >= 3) {
        delta_converged = true;
        break;
      }
    } else {
      stalled = 0;
    }
    prev_move = move;
  }
  auto row = row_from_fit(fit, delta, mode);
  row.converged = delta_converged && fit.converged &&
                  std::abs(row.S_tri - row.S_sb) <= 1e-10;
  return row;
}

} // namespace

std::optional<PhaseBoundaryRow> delta_max(double e, DMode mode,
                                          const PhaseBoundaryRow* seed) {
  if (seed) {
    TripodalFit fit;
    fit.mode = mode;
    fit.branch = seed->branch;
    fit.e = e;
    fit.delta = seed->delta_m;
    fit.A = seed->A;
    fit.B = seed->B;
    fit.c = seed->c;
    fit.D = seed->D;
    try {
      fit = best_tripodal(e, seed->delta_m, mode, fit);
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    return alternate_to_boundary(e, mode, fit, seed->delta_m);
  }

  // Cold start: seed at vanishing deficit from the small-amplitude branch
  // and scan outward until the bipodal entropy wins.
  const auto branches = maximize_F_at(e);
  const BranchMax* pick = nullptr;
  for (const auto& b : branches)
    if (b.branch == Branch::OE) {
      pick = &b;
      break;
    }
  if (!pick && !branches.empty()) pick = &branches.front();
  if (!pick) return std::nullopt;

  // Deficit grid for the exploration scan; refined below the default when
  // the whole feasible range is itself only a few grid cells wide.
  const double cap = delta_cap(e);
  const double step = std::min(1e-4, cap / 50.0);
  TripodalFit fit = fit_from_branch(e, *pick);
  TripodalFit prev = fit;
  bool have_positive = false;
  for (int k = 1; step * k <= cap; ++k) {
    const double d = step * k;
    try {
      fit = best_tripodal(e, d, mode, fit);
    } catch (const std::domain_error&) {
      return std::nullopt; // branch left the feasible region before crossing
    }
    const double gap = fit.entropy - bipodal_entropy(e, d);
    if (gap > 0.0) {
      have_positive = true;
      prev = fit;
    } else {
      if (!have_positive) break; // maybe a phase thinner than the grid
      return alternate_to_boundary(e, mode, prev, prev.delta);
    }
  }
  if (have_positive) return std::nullopt; // still above bipodal at the cap

  // The phase can be thinner than the scan step close to the threshold;
  // probe decades below before concluding there is none. Demand a gap
  // comfortably above the rounding floor of the entropies, else the
  // boundary is not resolvable in double precision.
  for (double d = step / 10.0; d >= 1e-8; d /= 10.0) {
    try {
      fit = best_tripodal(e, d, mode, fit_from_branch(e, *pick));
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
    if (fit.entropy - bipodal_entropy(e, d) > 1e-13)
      return alternate_to_boundary(e, mode, fit, fit.delta);
  }
  return std::nullopt;
}

SweepTable boundary_curve(double e_lo, double e_hi, double step, DMode mode) {
  if (!(e_lo > 0.0 && e_hi < 0.5 && e_lo <= e_hi && step > 0.0))
    throw std::invalid_argument("boundary_curve: bad range");
  double anchor = std::clamp(0.1, e_lo, e_hi);
  anchor = e_lo + std::round((anchor - e_lo) / step) * step;
  anchor = std::clamp(anchor, e_lo, e_hi);

  auto row0 = delta_max(anchor, mode);
  if (!row0 || !row0->converged)
    throw std::runtime_error("boundary_curve: no tripodal phase at anchor e = " +
                             format_double(anchor));

  opt::ContinuationProblem prob;
  prob.kind = "boundary";
  prob.param_column = "e";
  prob.columns = {"delta_m", "A", "B", "c", "D", "S_tri", "S_sb"};
  prob.seed_size = 7;
  prob.solve = [mode](double e, const std::vector<double>& s)
      -> std::optional<std::vector<double>> {
    PhaseBoundaryRow seed;
    seed.e = e;
    seed.delta_m = s[0];
    seed.A = s[1];
    seed.B = s[2];
    seed.c = s[3];
    seed.D = s[4];
    seed.d_mode = mode;
    auto row = delta_max(e, mode, &seed);
    if (!row || !row->converged) return std::nullopt;
    return std::vector<double>{row->delta_m, row->A, row->B, row->c,
                               row->D,       row->S_tri, row->S_sb};
  };

  const std::vector<double> anchor_seed{row0->delta_m, row0->A, row0->B,
                                        row0->c,       row0->D, row0->S_tri,
                                        row0->S_sb};
  auto up = opt::continuation_sweep(prob, anchor, e_hi, step, anchor_seed);
  SweepTable table;
  table.kind = "boundary";
  table.columns = up.columns;
  if (anchor - step >= e_lo) {
    auto down =
        opt::continuation_sweep(prob, anchor - step, e_lo, step, anchor_seed);
    for (auto it = down.rows.rbegin(); it != down.rows.rend(); ++it)
      table.rows.push_back(*it);
    if (const auto* t = down.find_meta("truncated_at"))
      table.add_meta("truncated_below", *t);
  }
  for (auto& r : up.rows) table.rows.push_back(std::move(r));
  if (const auto* t = up.find_meta("truncated_at"))
    table.add_meta("truncated_above", *t);
  table.add_meta("d_mode", to_string(mode));
  table.add_meta("anchor", format_double(anchor));
  table.add_meta("e_min", format_double(e_lo));
  table.add_meta("e_max", format_double(e_hi));
  table.add_meta("e_step", format_double(step));
  return table;
}

SweepTable trace_vs_delta(double e, DMode mode, double delta_step,
                          double delta_stop) {
  if (!(delta_step > 0.0))
    throw std::invalid_argument("trace_vs_delta: delta_step must be > 0");
  if (delta_stop <= 0.0) {
    auto bound = delta_max(e, mode);
    if (!bound)
      throw std::runtime_error("trace_vs_delta: no tripodal phase at e = " +
                               format_double(e));
    delta_stop = std::min(1.25 * bound->delta_m, delta_cap(e));
  }

  const auto branches = maximize_F_at(e);
  const BranchMax* pick = nullptr;
  for (const auto& b : branches)
    if (b.branch == Branch::OE) {
      pick = &b;
      break;
    }
  if (!pick) throw std::runtime_error("trace_vs_delta: no branch at this e");

  opt::ContinuationProblem prob;
  prob.kind = "trace";
  prob.param_column = "delta";
  prob.columns = {"A", "B", "c", "D", "S_tri", "S_sb", "S_gap"};
  prob.seed_size = 4;
  prob.predict = [](double from, double to, std::vector<double> s) {
    if (from > 0.0) {
      const double r = to / from;
      s[2] *= r;           // c scales with the deficit
      s[3] *= r * r;       // D with its square
    }
    return s;
  };
  prob.solve = [e, mode](double d, const std::vector<double>& s)
      -> std::optional<std::vector<double>> {
    TripodalFit seed;
    seed.e = e;
    seed.A = s[0];
    seed.B = s[1];
    seed.c = s[2];
    seed.D = s[3];
    try {
      const auto fit = best_tripodal(e, d, mode, seed);
      if (!fit.converged) return std::nullopt;
      const double sb = bipodal_entropy(e, d);
      return std::vector<double>{fit.A, fit.B,      fit.c,
                                 fit.D, fit.entropy, sb,
                                 fit.entropy - sb};
    } catch (const std::domain_error&) {
      return std::nullopt;
    }
  };

  const std::vector<double> seed0{pick->max.point[0], pick->max.point[1], 0.0,
                                  0.0};
  auto table = opt::continuation_sweep(prob, delta_step, delta_stop,
                                       delta_step, seed0);
  table.add_meta("e", format_double(e));
  table.add_meta("d_mode", to_string(mode));
  table.add_meta("delta_step", format_double(delta_step));
  table.add_meta("delta_stop", format_double(delta_stop));

  // Mark where the bipodal entropy overtakes.
  const auto dcol = table.column("delta");
  const auto gcol = table.column("S_gap");
  for (std::size_t i = 1; i < gcol.size(); ++i) {
    if (std::isfinite(gcol[i - 1]) && std::isfinite(gcol[i]) &&
        gcol[i - 1] > 0.0 && gcol[i] <= 0.0) {
      const double t = gcol[i - 1] / (gcol[i - 1] - gcol[i]);
      table.add_meta("crossing_delta",
                     format_double(dcol[i - 1] + t * (dcol[i] - dcol[i - 1])));
      break;
    }
  }
  return table;
}

std::optional<double> theta1_crossing(double e) {
  if (!(e > 0.0 && e < 0.01))
    throw std::invalid_argument("theta1_crossing: requires 0 < e < 0.01");
  const auto branches = maximize_F_at(e);
  const BranchMax *oe = nullptr, *t1 = nullptr;
  for (const auto& b : branches) {
    if (b.branch == Branch::OE && !oe) oe = &b;
    if (b.branch == Branch::Theta1 && !t1) t1 = &b;
  }
  if (!oe || !t1)
    throw std::runtime_error("theta1_crossing: failed to track both branches");
  if (oe->max.value >= t1->max.value) return std::nullopt;

  const double step = std::max(e / 100.0, 1e-7);
  const double cap = delta_cap(e);
  TripodalFit f_oe = fit_from_branch(e, *oe);
  TripodalFit f_t1 = fit_from_branch(e, *t1);
  TripodalFit prev_oe = f_oe, prev_t1 = f_t1;
  bool have_positive = false;
  double lo_delta = 0.0;
  for (int k = 1; step * k <= cap; ++k) {
    const double d = step * k;
    try {
      f_oe = best_tripodal(e, d, DMode::Ansatz, f_oe);
      f_t1 = best_tripodal(e, d, DMode::Ansatz, f_t1);
    } catch (const std::domain_error&) {
      throw std::runtime_error(
          "theta1_crossing: branch left the feasible region before crossing");
    }
    const double gap = f_t1.entropy - f_oe.entropy;
    if (gap > 0.0) {
      have_positive = true;
      prev_oe = f_oe;
      prev_t1 = f_t1;
      lo_delta = d;
    } else {
      if (!have_positive) break; // maybe thinner than the grid
      break;
    }
  }
  // Close to the dominance crossover the region narrows below the grid;
  // probe decades down before reporting none.
  if (!have_positive) {
    for (double d = step / 10.0; d >= 1e-9; d /= 10.0) {
      try {
        f_oe = best_tripodal(e, d, DMode::Ansatz, fit_from_branch(e, *oe));
        f_t1 = best_tripodal(e, d, DMode::Ansatz, fit_from_branch(e, *t1));
      } catch (const std::domain_error&) {
        return std::nullopt;
      }
      if (f_t1.entropy - f_oe.entropy > 1e-14) {
        have_positive = true;
        prev_oe = f_oe;
        prev_t1 = f_t1;
        lo_delta = d;
        break;
      }
    }
  }
  if (!have_positive) return std::nullopt;

  // Alternate: equate the held branch entropies in delta, then re-maximize
  // both branches at the new delta.
  double delta = lo_delta;
  TripodalFit a = prev_t1, b = prev_oe;
  for (int outer = 0; outer < 100; ++outer) {
    const bool pin_a = edge_pinned(a), pin_b = edge_pinned(b);
    auto g = [&, pin_a, pin_b](double d) {
      const double st = held_entropy(e, a, DMode::Ansatz, d, pin_a);
      const double so = held_entropy(e, b, DMode::Ansatz, d, pin_b);
      if (std::isnan(st) || std::isnan(so)) return kNan;
      return st - so;
    };
    const auto bracket = bracket_sign_change(
        g, delta, 0.5 * step, cap, std::max(0.25 * step, 0.05 * delta));
    if (!bracket) return std::nullopt;
    const double next =
        bracket->first == bracket->second
            ? bracket->first
            : opt::solve_scalar_root(g, bracket->first, bracket->second, 1e-14);
    a = best_tripodal(e, next, DMode::Ansatz, a);
    b = best_tripodal(e, next, DMode::Ansatz, b);
    const bool done = std::abs(next - delta) < 1e-13;
    delta = next;
    if (done) break;
  }
  return delta;
}

double branch_crossover() {
  auto dominance = [](double e) {
    const auto branches = maximize_F_at(e);
    const BranchMax *oe = nullptr, *t1 = nullptr;
    for (const auto& b : branches) {
      if (b.branch == Branch::OE && !oe) oe = &b;
      if (b.branch == Branch::Theta1 && !t1) t1 = &b;
    }
    if (!oe || !t1)
      throw std::runtime_error("branch_crossover: lost a branch");
    return t1->max.value - oe->max.value;
  };
  return opt::solve_scalar_root(dominance, 0.0015, 0.004, 1e-7);
}

Classification classify_point(double e, double t, double tol_scale) {
  if (!(e > 0.0 && e < 1.0))
    throw std::invalid_argument("classify_point: e outside (0,1)");
  if (!(t > 0.0) || t > e * e * e + 1e-15)
    throw std::invalid_argument(
        "classify_point: t must satisfy 0 < t <= e^3 (at or below the "
        "independence curve)");
  const double delta = std::cbrt(std::max(0.0, e * e * e - t));
  Classification out;
  out.delta = delta;
  if (delta == 0.0) {
    out.label = Branch::Bipodal;
    out.entropy = detail::h_unchecked(e);
    return out;
  }
  if (delta > delta_cap(e))
    throw std::invalid_argument("classify_point: deficit outside the bipodal range");

  out.entropy = bipodal_entropy(e, delta);
  out.label = Branch::Bipodal;

  auto consider = [&](Branch wanted) {
    const auto branches = maximize_F_at(e);
    const BranchMax* pick = nullptr;
    for (const auto& b : branches)
      if (b.branch == wanted) {
        pick = &b;
        break;
      }
    if (!pick) return;
    try {
      auto fit = walk_to_delta(e, delta, DMode::Ansatz,
                               fit_from_branch(e, *pick), tol_scale);
      fit.branch = wanted;
      const double diff = fit.entropy - out.entropy;
      if (std::abs(diff) <= 1e-12) {
        out.tie = true; // ties stay with the earlier (preferred) label
      } else if (diff > 0.0) {
        out.label = wanted;
        out.entropy = fit.entropy;
        out.tripodal = fit;
        out.tie = false;
      }
    } catch (const std::exception&) {
      // branch infeasible at this deficit; nothing to consider
    }
  };
  consider(Branch::OE);
  consider(Branch::Theta1);
  return out;
}

} // namespace strauss::phase
