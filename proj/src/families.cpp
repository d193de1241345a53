#include "strauss/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "strauss/entropy.hpp"

namespace strauss {

namespace {

double cbrt_sq(double x) {
  const double r = std::cbrt(x);
  return r * r;
}

void require_block(double v, const char* name) {
  if (v < -detail::kBoundaryTol || v > 1.0 + detail::kBoundaryTol)
    throw std::domain_error(std::string("block ") + name + " = " +
                            std::to_string(v) + " outside [0,1]");
}

} // namespace

StepGraphon symmetric_bipodal(double e, double d) {
  if (!(e > 0.0 && e < 1.0))
    throw std::domain_error("symmetric_bipodal: e outside (0,1)");
  if (!(d >= 0.0 && d <= std::min(e, 1.0 - e) + detail::kBoundaryTol))
    throw std::domain_error("symmetric_bipodal: delta = " + std::to_string(d) +
                            " outside [0, min(e,1-e)]");
  return StepGraphon({0.5, 0.5}, {{e - d, e + d}, {e + d, e - d}});
}

double bipodal_entropy(double e, double d) {
  if (!(e > 0.0 && e < 1.0))
    throw std::domain_error("bipodal_entropy: e outside (0,1)");
  if (!(d >= 0.0 && d <= std::min(e, 1.0 - e) + detail::kBoundaryTol))
    throw std::domain_error("bipodal_entropy: delta out of range");
  return 0.5 * (detail::h_unchecked(std::min(1.0, e + d)) +
                detail::h_unchecked(std::max(0.0, e - d)));
}

Sym21Blocks sym21_blocks(const Sym21Params& p) {
  const double bd = (1.0 - p.c) * (p.B + p.D);
  return {p.e - p.A + bd,
          p.e + p.A + bd,
          p.e - p.c * p.B + 0.5 * (1.0 - 2.0 * p.c) * p.D,
          p.e + p.c * p.c / (1.0 - p.c) * p.B - p.c * p.D};
}

StepGraphon sym21_graphon(const Sym21Params& p) {
  if (!(p.c > 0.0 && p.c < 1.0))
    throw std::domain_error("sym21_graphon: c outside (0,1)");
  const Sym21Blocks b = sym21_blocks(p);
  require_block(b.g11, "g11");
  require_block(b.g12, "g12");
  require_block(b.g13, "g13");
  require_block(b.g33, "g33");
  const double half = 0.5 * p.c;
  return StepGraphon({half, half, 1.0 - p.c},
                     {{b.g11, b.g12, b.g13},
                      {b.g12, b.g11, b.g13},
                      {b.g13, b.g13, b.g33}});
}

double sym21_triangle(const Sym21Params& p) {
  const double c = p.c, cc = 1.0 - c;
  const double d2 = p.D * p.D;
  return p.e * p.e * p.e + 0.75 * p.e * c * cc * d2 +
         0.75 * c * c * cc * p.B * d2 +
         c * c * c * (p.B * p.B * p.B - p.A * p.A * p.A);
}

double sym21_entropy(const Sym21Params& p) {
  const Sym21Blocks b = sym21_blocks(p);
  const double c = p.c, cc = 1.0 - c;
  const double s = 0.5 * c * c *
                       (detail::h_block(b.g11) + detail::h_block(b.g12)) +
                   2.0 * c * cc * detail::h_block(b.g13) +
                   cc * cc * detail::h_block(b.g33);
  if (std::isnan(s))
    throw std::domain_error("sym21_entropy: block outside [0,1]");
  return s;
}

double sym21_dS_dD(const Sym21Params& p, int order) {
  if (p.D != 0.0)
    throw std::domain_error("sym21_dS_dD: derivative is taken at D = 0");
  const Sym21Blocks b = sym21_blocks(p);
  const double c = p.c, cc = 1.0 - c;
  // Block sensitivities to D: (1-c), (1-c), (1-2c)/2, -c.
  if (order == 1) {
    return 0.5 * c * c * cc * (h_entropy(b.g11, 1) + h_entropy(b.g12, 1)) +
           c * cc * (1.0 - 2.0 * c) * h_entropy(b.g13, 1) -
           c * cc * cc * h_entropy(b.g33, 1);
  }
  if (order == 2) {
    const double half = 0.5 * (1.0 - 2.0 * c);
    return 0.5 * c * c * cc * cc *
               (h_entropy(b.g11, 2) + h_entropy(b.g12, 2)) +
           2.0 * c * cc * half * half * h_entropy(b.g13, 2) +
           c * c * cc * cc * h_entropy(b.g33, 2);
  }
  throw std::invalid_argument("sym21_dS_dD: order must be 1 or 2");
}

StepGraphon tripodal_ansatz(double e, double A, double B, double c) {
  return sym21_graphon({e, A, B, c, 0.0});
}

double c_from_delta(double delta, double A, double B) {
  if (!(delta >= 0.0)) throw std::domain_error("c_from_delta: delta < 0");
  const double diff = A * A * A - B * B * B;
  if (!(diff > 0.0))
    throw std::domain_error("c_from_delta: A^3 must exceed B^3");
  return delta / std::cbrt(diff);
}

double F_coefficient(double e, double A, double B) {
  if (!(e > 0.0 && e < 1.0))
    throw std::domain_error("F_coefficient: e outside (0,1)");
  const double diff = A * A * A - B * B * B;
  if (diff == 0.0)
    throw std::domain_error("F_coefficient: A^3 == B^3 (singular)");
  const double hi = e + A + B, lo = e - A + B;
  if (hi < -detail::kBoundaryTol || hi > 1.0 + detail::kBoundaryTol ||
      lo < -detail::kBoundaryTol || lo > 1.0 + detail::kBoundaryTol)
    throw std::domain_error("F_coefficient: e +/- A + B outside [0,1]");
  const double num = detail::h_block(hi) + detail::h_block(lo) -
                     2.0 * detail::h_unchecked(e) - 2.0 * B * h_entropy(e, 1);
  return num / cbrt_sq(diff);
}

double F_theta1(double e) {
  if (!(e > 0.0 && e < 0.5))
    throw std::domain_error("F_theta1: e outside (0, 1/2)");
  const double num = -2.0 * detail::h_unchecked(e) -
                     (1.0 - 2.0 * e) * h_entropy(e, 1);
  const double den = 0.75 * e - 1.5 * e * e + e * e * e;
  return num / cbrt_sq(den);
}

StepGraphon corner_embed(const StepGraphon& g0, double e, double c) {
  if (!(c > 0.0 && c < 1.0))
    throw std::domain_error("corner_embed: c outside (0,1)");
  if (!(e > 0.0 && e < 1.0))
    throw std::domain_error("corner_embed: e outside (0,1)");
  const std::size_t k = g0.podes();
  const std::vector<double> d0 = degree_vector(g0);
  const double B = edge_density(g0) - e;
  const double row_scale = c / (1.0 - c);

  std::vector<double> sizes(k + 1);
  for (std::size_t i = 0; i < k; ++i) sizes[i] = c * g0.sizes()[i];
  sizes[k] = 1.0 - c;

  std::vector<std::vector<double>> v(k + 1, std::vector<double>(k + 1));
  double worst = 0.0;
  auto track = [&](double x) {
    worst = std::max({worst, -x, x - 1.0});
    return x;
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) v[i][j] = g0.value(i, j);
    v[i][k] = v[k][i] = track(e - row_scale * (d0[i] - e));
  }
  v[k][k] = track(e + row_scale * row_scale * B);
  if (worst > detail::kBoundaryTol)
    throw std::domain_error("corner_embed: block outside [0,1] by " +
                            std::to_string(worst));
  return StepGraphon(std::move(sizes), std::move(v));
}

double corner_coefficient(const StepGraphon& g0, double e) {
  if (!(e > 0.0 && e < 1.0))
    throw std::domain_error("corner_coefficient: e outside (0,1)");
  const std::size_t k = g0.podes();
  std::vector<std::vector<double>> deficit(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) deficit[i][j] = e - g0.value(i, j);
  const double tau = kernel_triple_sum(g0.sizes(), deficit);
  if (!(tau > 0.0))
    throw std::domain_error(
        "corner_coefficient: kernel triple sum of e - g0 must be positive");
  const double B = edge_density(g0) - e;
  const double num = 2.0 * graphon_entropy(g0) - 2.0 * detail::h_unchecked(e) -
                     2.0 * B * h_entropy(e, 1);
  return num / cbrt_sq(tau);
}

} // namespace strauss
