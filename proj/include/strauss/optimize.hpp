#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "strauss/sweep_table.hpp"

namespace strauss::opt {

/// Objective convention: pure function of the point, returning NaN at
/// infeasible points. grid_scan skips NaN cells; newton_maximize backtracks
/// away from them.
using Objective = std::function<double(const std::vector<double>&)>;

struct NewtonOptions {
  double step_tol = 1e-12; ///< stop when the accepted step has |dx|_inf below this
  double grad_tol = 1e-10; ///< stop when the FD gradient |g|_inf is below this
  int max_iter = 50;
  double fd_step = 1e-6;   ///< FD scale; per-coordinate step is fd_step*max(1,|x_i|)
  double damping = 0.5;    ///< backtracking factor in (0,1)
};

struct LocalMax {
  std::vector<double> point;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0; ///< |g|_inf at the last gradient evaluation
};

/// Strict local maxima of the objective over a rectangular grid (inclusive
/// endpoints, resolution[i] points per axis, full Moore neighborhood).
/// Invalid (NaN) cells are skipped; candidates are sorted by value descending
/// with ties within 1e-12 broken toward the lexicographically smaller point.
/// Throws std::invalid_argument for resolution < 8 and std::runtime_error if
/// the objective is invalid on the whole grid.
std::vector<LocalMax> grid_scan(const Objective& f,
                                const std::vector<std::pair<double, double>>& box,
                                const std::vector<int>& resolution);

/// Damped Newton ascent with central finite differences (one-sided at
/// feasibility walls). Falls back to gradient ascent when the Hessian is not
/// negative definite. Only improving steps are accepted, so the result never
/// has a lower value than the seed. Convergence means: gradient below
/// grad_tol, or accepted step below step_tol, or no improving step exists at
/// working precision; hitting max_iter leaves converged false.
LocalMax newton_maximize(const Objective& f, std::vector<double> x0,
                         const NewtonOptions& opts = {});

/// Hybrid secant/bisection root finder on a sign-changing bracket. Returns x
/// with |f(x)| <= tol or bracket width <= tol. Throws std::invalid_argument
/// when f(lo), f(hi) are not finite with opposite signs (an endpoint root is
/// returned directly).
double solve_scalar_root(const std::function<double(double)>& f, double lo,
                         double hi, double tol);

/// One step of a parameter continuation: solve at t starting from seed,
/// returning the full row of named column values, or nullopt on failure.
struct ContinuationProblem {
  std::string kind;         ///< table kind
  std::string param_column; ///< name of the swept parameter column
  std::vector<std::string> columns;
  std::function<std::optional<std::vector<double>>(
      double t, const std::vector<double>& seed)>
      solve;
  /// Leading row entries that re-seed the next solve.
  std::size_t seed_size = 0;
  /// Optional seed predictor across a parameter step.
  std::function<std::vector<double>(double t_from, double t_to,
                                    std::vector<double> seed)>
      predict;
};

/// Sweep the parameter from start to stop (inclusive) in increments of step,
/// re-seeding each solve from the previous row. On failure the step is halved
/// up to 8 times to walk the seed forward; if the target still fails a gap
/// row of NaNs is recorded, and after 3 consecutive gaps the sweep is
/// truncated with a diagnostic in the table metadata. The seed must solve the
/// problem at start. Deterministic for fixed inputs.
SweepTable continuation_sweep(const ContinuationProblem& problem, double start,
                              double stop, double step,
                              std::vector<double> seed);

} // namespace strauss::opt
