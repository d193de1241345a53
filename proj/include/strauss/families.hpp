#pragma once

#include "strauss/step_graphon.hpp"

namespace strauss {

// ---------------------------------------------------------------------------
// Symmetric bipodal family
// ---------------------------------------------------------------------------

/// Two podes of width 1/2, value e-d on the diagonal blocks and e+d off the
/// diagonal. Edge density e, triangle density e^3 - d^3.
/// Requires 0 < e < 1 and 0 <= d <= min(e, 1-e).
StepGraphon symmetric_bipodal(double e, double d);

/// Entropy of the symmetric bipodal graphon: (H(e+d) + H(e-d)) / 2.
double bipodal_entropy(double e, double d);

// ---------------------------------------------------------------------------
// (2,1)-symmetric tripodal family
// ---------------------------------------------------------------------------

/// Parameters of the general (2,1)-symmetric tripodal graphon: two podes of
/// width c/2 (interchangeable) and one of width 1-c, with
///   g11 = g22 = e - A + (1-c)(B+D)
///   g12       = e + A + (1-c)(B+D)
///   g13 = g23 = e - cB + (1-2c)D/2
///   g33       = e + c^2 B/(1-c) - cD
/// The edge density is e for every parameter choice; the per-pode degrees are
/// e + (1-c)D/2 (small podes) and e - cD/2 (large pode). D = 0 is the
/// constant-degree ansatz.
struct Sym21Params {
  double e;
  double A; ///< pode-coupling amplitude
  double B; ///< background amplitude
  double c; ///< combined width of the two small podes
  double D; ///< degree-split parameter
};

/// Block values of the family, without constructing a StepGraphon.
struct Sym21Blocks {
  double g11, g12, g13, g33;
};
Sym21Blocks sym21_blocks(const Sym21Params& p);

/// Materialize the graphon; throws std::domain_error naming the first block
/// outside [0,1] (beyond the 1e-12 clamp) or for c outside (0,1).
StepGraphon sym21_graphon(const Sym21Params& p);

/// Triangle density in closed form:
///   e^3 + (3/4) e c(1-c) D^2 + (3/4) c^2 (1-c) B D^2 + c^3 (B^3 - A^3).
/// This is an exact identity for the family, not an expansion.
double sym21_triangle(const Sym21Params& p);

/// Entropy in closed form (the size-weighted block entropies).
double sym21_entropy(const Sym21Params& p);

/// d^order S / dD^order at D = 0, from exact differentiation of the block
/// values. Requires p.D == 0 and interior blocks. order is 1 or 2.
double sym21_dS_dD(const Sym21Params& p, int order);

/// Constant-degree ansatz (D = 0) with explicit parameters.
StepGraphon tripodal_ansatz(double e, double A, double B, double c);

/// Small-pode width from the triangle deficit: c = delta * (A^3-B^3)^(-1/3).
/// Requires delta >= 0 and A^3 > B^3.
double c_from_delta(double delta, double A, double B);

// ---------------------------------------------------------------------------
// Entropy-gain coefficient near the independence curve
// ---------------------------------------------------------------------------

/// F(A,B) = [H(e+A+B) + H(e-A+B) - 2H(e) - 2B H'(e)] / (A^3 - B^3)^(2/3),
/// the coefficient of delta^2/2 in the ansatz entropy as the triangle deficit
/// vanishes. The denominator uses the real cube root squared. Throws on
/// A^3 == B^3 (singular) or H arguments outside [0,1].
double F_coefficient(double e, double A, double B);

/// F at the extreme feasible point A = 1/2, B = 1/2 - e, in the closed form
///   (-2H(e) - (1-2e) H'(e)) / (3e/4 - 3e^2/2 + e^3)^(2/3).
/// Requires 0 < e < 1/2.
double F_theta1(double e);

// ---------------------------------------------------------------------------
// Corner embedding
// ---------------------------------------------------------------------------

/// Plant a rescaled copy of g0 on [0,c)^2 and fill the rest of the square so
/// the result has edge density e and exactly constant degree:
///   rows   e - (c/(1-c)) (d0_i - e)   where d0 is the degree vector of g0,
///   corner e + (c/(1-c))^2 B          where B = edge_density(g0) - e.
/// A k-podal g0 yields a (k+1)-podal result. Throws std::domain_error
/// reporting the largest violation if any block leaves [0,1].
StepGraphon corner_embed(const StepGraphon& g0, double e, double c);

/// Entropy-gain coefficient of the embedding as c -> 0:
///   (2 S(g0) - 2 H(e) - 2 B H'(e)) / tau(e - g0)^(2/3),
/// with tau(e - g0) the triple sum of the kernel e - g0. Requires the kernel
/// triple sum to be positive (a genuine triangle deficit).
double corner_coefficient(const StepGraphon& g0, double e);

} // namespace strauss
