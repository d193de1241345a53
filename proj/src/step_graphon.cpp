#include "strauss/step_graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "strauss/entropy.hpp"
#include "strauss/parallel.hpp"

namespace strauss {

namespace {

// Compensated accumulator; keeps grid sums reproducible to ~1 ulp.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double clamp_unit(double v, const char* what) {
  if (v < -detail::kBoundaryTol || v > 1.0 + detail::kBoundaryTol)
    throw std::domain_error(std::string(what) + " value " + std::to_string(v) +
                            " outside [0,1]");
  return std::min(1.0, std::max(0.0, v));
}

} // namespace

StepGraphon::StepGraphon(std::vector<double> pode_sizes,
                         std::vector<std::vector<double>> values)
    : sizes_(std::move(pode_sizes)), values_(std::move(values)) {
  const std::size_t k = sizes_.size();
  if (k == 0) throw std::domain_error("StepGraphon: no podes");
  double total = 0.0;
  for (double s : sizes_) {
    if (!(s > 0.0)) throw std::domain_error("StepGraphon: pode size must be > 0");
    total += s;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::domain_error("StepGraphon: pode sizes sum to " +
                            std::to_string(total) + ", expected 1");
  if (values_.size() != k)
    throw std::domain_error("StepGraphon: value matrix is not k x k");
  for (std::size_t i = 0; i < k; ++i) {
    if (values_[i].size() != k)
      throw std::domain_error("StepGraphon: value matrix is not k x k");
    for (std::size_t j = 0; j < k; ++j) {
      if (values_[i][j] != values_[j][i])
        throw std::domain_error("StepGraphon: value matrix not symmetric at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  for (auto& row : values_)
    for (double& v : row) v = clamp_unit(v, "StepGraphon");
}

StepGraphon StepGraphon::constant(double p) {
  return StepGraphon({1.0}, {{p}});
}

StepGraphon StepGraphon::permuted(const std::vector<std::size_t>& perm) const {
  const std::size_t k = podes();
  if (perm.size() != k) throw std::invalid_argument("permuted: bad permutation");
  std::vector<double> s(k);
  std::vector<std::vector<double>> v(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    s[i] = sizes_[perm[i]];
    for (std::size_t j = 0; j < k; ++j) v[i][j] = values_[perm[i]][perm[j]];
  }
  return StepGraphon(std::move(s), std::move(v));
}

StepGraphon StepGraphon::with_split_pode(std::size_t i, double frac) const {
  const std::size_t k = podes();
  if (i >= k || !(frac > 0.0 && frac < 1.0))
    throw std::invalid_argument("with_split_pode: bad arguments");
  std::vector<double> s;
  s.reserve(k + 1);
  for (std::size_t a = 0; a < k; ++a) {
    if (a == i) {
      s.push_back(sizes_[a] * frac);
      s.push_back(sizes_[a] * (1.0 - frac));
    } else {
      s.push_back(sizes_[a]);
    }
  }
  auto src = [&](std::size_t a) { return a <= i ? a : a - 1; };
  std::vector<std::vector<double>> v(k + 1, std::vector<double>(k + 1));
  for (std::size_t a = 0; a <= k; ++a)
    for (std::size_t b = 0; b <= k; ++b) v[a][b] = values_[src(a)][src(b)];
  return StepGraphon(std::move(s), std::move(v));
}

std::string StepGraphon::to_json() const {
  nlohmann::ordered_json j;
  j["sizes"] = sizes_;
  j["values"] = values_;
  return j.dump();
}

StepGraphon StepGraphon::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::domain_error(std::string("StepGraphon: bad JSON: ") + e.what());
  }
  if (!j.contains("sizes") || !j.contains("values"))
    throw std::domain_error("StepGraphon: JSON must contain 'sizes' and 'values'");
  return StepGraphon(j["sizes"].get<std::vector<double>>(),
                     j["values"].get<std::vector<std::vector<double>>>());
}

double edge_density(const StepGraphon& g) {
  const auto& c = g.sizes();
  const auto& v = g.values();
  const std::size_t k = g.podes();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sum += c[i] * c[j] * v[i][j];
  return sum;
}

double kernel_triple_sum(const std::vector<double>& sizes,
                         const std::vector<std::vector<double>>& values) {
  const std::size_t k = sizes.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double cij = sizes[i] * sizes[j] * values[i][j];
      for (std::size_t l = 0; l < k; ++l)
        sum += cij * sizes[l] * values[j][l] * values[l][i];
    }
  return sum;
}

double triangle_density(const StepGraphon& g) {
  return kernel_triple_sum(g.sizes(), g.values());
}

double graphon_entropy(const StepGraphon& g) {
  const auto& c = g.sizes();
  const auto& v = g.values();
  const std::size_t k = g.podes();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      sum += c[i] * c[j] * detail::h_unchecked(v[i][j]);
  return sum;
}

std::vector<double> degree_vector(const StepGraphon& g) {
  const auto& c = g.sizes();
  const auto& v = g.values();
  const std::size_t k = g.podes();
  std::vector<double> d(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) d[i] += c[j] * v[i][j];
  return d;
}

GridFunctionals riemann_oracle(const StepGraphon& g, int n) {
  if (n < 16) throw std::invalid_argument("riemann_oracle: n must be >= 16");
  const std::size_t k = g.podes();
  const auto& v = g.values();

  // Pode index of each grid midpoint (a + 0.5)/n.
  std::vector<double> upper(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    acc += g.sizes()[i];
    upper[i] = acc;
  }
  upper[k - 1] = 1.0;
  std::vector<std::size_t> pode(n);
  for (int a = 0; a < n; ++a) {
    const double x = (a + 0.5) / n;
    std::size_t i = 0;
    while (i + 1 < k && x >= upper[i]) ++i;
    pode[a] = i;
  }

  // Edge and entropy: literal sums over all n^2 cells. Row partials are
  // computed independently so the result does not depend on thread count.
  std::vector<double> edge_row(n, 0.0), ent_row(n, 0.0);
  parallel_for(0, n, [&](int a) {
    Kahan e, s;
    const std::size_t pa = pode[a];
    for (int b = 0; b < n; ++b) {
      const double val = v[pa][pode[b]];
      e.add(val);
      s.add(detail::h_unchecked(val));
    }
    edge_row[a] = e.sum;
    ent_row[a] = s.sum;
  });
  Kahan e_tot, s_tot;
  for (int a = 0; a < n; ++a) {
    e_tot.add(edge_row[a]);
    s_tot.add(ent_row[a]);
  }

  // Triangle: the same midpoint sum. For modest n evaluate it literally;
  // beyond that, collapse identical grid rows first (the summand depends on
  // the midpoints only through their podes), which reproduces the literal
  // sum exactly at O(k^3) cost.
  double tri;
  if (n <= 512) {
    std::vector<double> tri_row(n, 0.0);
    parallel_for(0, n, [&](int a) {
      Kahan t;
      const std::size_t pa = pode[a];
      for (int b = 0; b < n; ++b) {
        const std::size_t pb = pode[b];
        double inner = 0.0;
        for (int c = 0; c < n; ++c)
          inner += v[pb][pode[c]] * v[pode[c]][pa];
        t.add(v[pa][pb] * inner);
      }
      tri_row[a] = t.sum;
    });
    Kahan t_tot;
    for (int a = 0; a < n; ++a) t_tot.add(tri_row[a]);
    tri = t_tot.sum / (double(n) * n * n);
  } else {
    std::vector<double> cnt(k, 0.0);
    for (int a = 0; a < n; ++a) cnt[pode[a]] += 1.0;
    std::vector<std::vector<double>> w(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t m = 0; m < k; ++m)
          w[i][j] += cnt[m] * v[i][m] * v[m][j];
    double t = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        t += cnt[i] * cnt[j] * v[i][j] * w[i][j];
    tri = t / (double(n) * n * n);
  }

  return {e_tot.sum / (double(n) * n), tri, s_tot.sum / (double(n) * n)};
}

} // namespace strauss
