#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace strauss {

/// A k-podal step-function graphon: the unit interval is split into k podes
/// of positive width summing to 1, and the graphon is constant on each
/// pode-pair rectangle with a symmetric value matrix in [0,1].
///
/// Constructors validate: sizes positive and summing to 1 within 1e-12, the
/// matrix exactly symmetric, and every entry within 1e-12 of [0,1] (entries
/// that graze the boundary are clamped onto it; anything farther is rejected
/// with std::domain_error).
class StepGraphon {
 public:
  StepGraphon(std::vector<double> pode_sizes,
              std::vector<std::vector<double>> values);

  /// Constant graphon g == p (single pode).
  static StepGraphon constant(double p);

  std::size_t podes() const { return sizes_.size(); }
  const std::vector<double>& sizes() const { return sizes_; }
  const std::vector<std::vector<double>>& values() const { return values_; }
  double value(std::size_t i, std::size_t j) const { return values_[i][j]; }

  /// Simultaneously permute podes; all functionals are invariant under this.
  StepGraphon permuted(const std::vector<std::size_t>& perm) const;

  /// Split pode i into two pieces of relative width frac and 1-frac, copying
  /// its row/column of values; all functionals are invariant under this.
  StepGraphon with_split_pode(std::size_t i, double frac) const;

  std::string to_json() const;
  static StepGraphon from_json(const std::string& text);

 private:
  std::vector<double> sizes_;
  std::vector<std::vector<double>> values_;
};

/// Integral of g over the unit square.
double edge_density(const StepGraphon& g);

/// Integral of g(x,y) g(y,z) g(z,x) over the unit cube.
double triangle_density(const StepGraphon& g);

/// Integral of H(g) over the unit square.
double graphon_entropy(const StepGraphon& g);

/// Per-pode degrees d_i = sum_j c_j g_ij. The size-weighted mean equals the
/// edge density.
std::vector<double> degree_vector(const StepGraphon& g);

/// Triple sum c_i c_j c_k w_ij w_jk w_ki for an arbitrary symmetric step
/// kernel (values unrestricted); the triangle functional extended off [0,1].
double kernel_triple_sum(const std::vector<double>& sizes,
                         const std::vector<std::vector<double>>& values);

struct GridFunctionals {
  double edge;
  double triangle;
  double entropy;
};

/// Cross-validation oracle: evaluates all three functionals by midpoint
/// discretization of the unit square/cube on an n-by-n grid. Exact (1e-12)
/// when pode boundaries align with grid lines, O(1/n) otherwise.
/// Requires n >= 16.
GridFunctionals riemann_oracle(const StepGraphon& g, int n);

} // namespace strauss
