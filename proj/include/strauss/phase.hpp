#pragma once

#include <optional>
#include <vector>

#include "strauss/families.hpp"
#include "strauss/optimize.hpp"
#include "strauss/sweep_table.hpp"

namespace strauss::phase {

/// Edge-density threshold (3 - sqrt(3))/6 below which the tripodal family
/// beats the symmetric bipodal one infinitesimally under the independence
/// curve t = e^3.
double e_threshold();

enum class Branch { OE, Theta1, Bipodal };
enum class DMode { Ansatz, FreeD };

const char* to_string(Branch b);
const char* to_string(DMode m);

/// A refined local maximum of F(A,B) at fixed e, labeled by basin:
/// OE for maximizers with A < 10e, Theta1 for the large-amplitude basin
/// near (1/2, 1/2 - e).
struct BranchMax {
  Branch branch;
  opt::LocalMax max; ///< point = (A, B)
};

/// Locate and refine the local maxima of F(A,B) for a given e. With no seeds
/// the OE basin is scanned over A,B in (0, min(10e, 0.45)) and the Theta1
/// basin is refined from exactly (1/2, 1/2 - e). Sorted by value descending.
std::vector<BranchMax> maximize_F_at(
    double e, const std::vector<std::vector<double>>& seeds = {});

/// Best F value across branches at e.
double F_max(double e);

/// Continuation sweep of the F maximization over e.
/// Columns: e, A, B, F_m, Hpp, gap (gap = F_m - H''(e)).
SweepTable fm_curve(double e_lo, double e_hi, double step);

struct ScalingFit {
  double slope_A;
  double slope_B;
  double slope_gap;
};

/// Log-log slopes of A, B and F_m - H'' against e_threshold() - e over rows
/// of an fm_curve table with e_threshold() - e inside [window_lo, window_hi].
/// Requires at least 10 rows in the window; throws std::runtime_error when
/// the window contains nonpositive data (it must sit below the threshold).
ScalingFit scaling_fit(const SweepTable& fm, double window_lo, double window_hi);

/// Location of the sign change of F_m(e) - H''(e): continuation toward the
/// threshold plus cube-root extrapolation of the vanishing gap.
double fm_crossing();

/// A refined entropy maximizer of the (2,1)-symmetric family at fixed
/// (e, delta = (e^3 - t)^(1/3)).
struct TripodalFit {
  DMode mode;
  Branch branch;
  double e = 0.0;
  double delta = 0.0;
  double A = 0.0, B = 0.0, c = 0.0, D = 0.0;
  double entropy = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Maximize the exact family entropy at fixed (e, delta).
/// Ansatz mode: free (A, B), D = 0, c = c_from_delta(delta, A, B).
/// FreeD mode: free (B, c, D), A recovered in closed form so the triangle
/// density equals e^3 - delta^3 exactly.
/// The seed supplies starting parameters (its mode fields are read per the
/// requested mode). tol_scale < 1 tightens the Newton tolerances.
TripodalFit best_tripodal(double e, double delta, DMode mode,
                          const TripodalFit& seed, double tol_scale = 1.0);

/// Seed fit at vanishing delta from an F-branch maximizer.
TripodalFit fit_from_branch(double e, const BranchMax& branch);

/// One point of the tripodal/bipodal phase boundary.
struct PhaseBoundaryRow {
  double e = 0.0;
  double delta_m = 0.0;
  double A = 0.0, B = 0.0, c = 0.0, D = 0.0;
  double S_tri = 0.0;
  double S_sb = 0.0;
  DMode d_mode = DMode::Ansatz;
  Branch branch = Branch::OE;
  bool converged = false;
};

/// Largest delta at which the best (2,1)-tripodal entropy still matches the
/// symmetric bipodal entropy, by alternating Newton: re-equate entropies in
/// delta with parameters held, then re-maximize parameters with delta held.
/// Returns nullopt when no crossing with positive tripodal advantage exists
/// in (0, min(e, 1-e)] ("no tripodal phase", expected above the threshold).
std::optional<PhaseBoundaryRow> delta_max(
    double e, DMode mode, const PhaseBoundaryRow* seed = nullptr);

/// Boundary curve delta_m(e), anchored at e = 0.1 and swept outward in both
/// directions. Columns: e, delta_m, A, B, c, D, S_tri, S_sb.
SweepTable boundary_curve(double e_lo, double e_hi, double step, DMode mode);

/// Optimal parameters as a function of delta at fixed e, starting from the
/// F maximizer at delta -> 0. Columns: delta, A, B, c, D, S_tri, S_sb, S_gap.
/// delta_stop <= 0 sweeps to 25% past the boundary crossing. The metadata
/// records "crossing_delta" where S_gap changes sign.
SweepTable trace_vs_delta(double e, DMode mode, double delta_step,
                          double delta_stop = 0.0);

/// For small e (< 0.01): the delta at which the Theta1-branch entropy falls
/// to the OE-branch entropy. nullopt when OE already dominates as delta -> 0
/// (e above ~0.0024).
std::optional<double> theta1_crossing(double e);

/// Edge density of the F-dominance crossover between the Theta1 and OE
/// branches (where max F switches basin).
double branch_crossover();

/// Conditional classification of a point (e, t) with t <= e^3 among the
/// symmetric bipodal graphon and the two tripodal branches.
struct Classification {
  Branch label = Branch::Bipodal;
  double entropy = 0.0;
  double delta = 0.0;
  std::optional<TripodalFit> tripodal; ///< present when a tripodal branch wins
  bool tie = false;                    ///< within 1e-12; broken toward Bipodal, then OE
};
Classification classify_point(double e, double t, double tol_scale = 1.0);

} // namespace strauss::phase
