#include "strauss/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "strauss/parallel.hpp"

namespace strauss::opt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool finite(double v) { return std::isfinite(v); }

// Cholesky factorization of a small symmetric matrix; returns false when the
// matrix is not positive definite.
bool cholesky(std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= m[i][k] * m[j][k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        m[i][i] = std::sqrt(s);
      } else {
        m[i][j] = s / m[j][j];
      }
    }
  }
  return true;
}

std::vector<double> cholesky_solve(const std::vector<std::vector<double>>& l,
                                   std::vector<double> b) {
  const std::size_t n = l.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l[i][k] * b[k];
    b[i] /= l[i][i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= l[k][i] * b[k];
    b[i] /= l[i][i];
  }
  return b;
}

} // namespace

std::vector<LocalMax> grid_scan(const Objective& f,
                                const std::vector<std::pair<double, double>>& box,
                                const std::vector<int>& resolution) {
  const std::size_t dims = box.size();
  if (dims == 0 || resolution.size() != dims)
    throw std::invalid_argument("grid_scan: box/resolution mismatch");
  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    if (resolution[d] < 8)
      throw std::invalid_argument("grid_scan: resolution must be >= 8");
    if (!(finite(box[d].first) && finite(box[d].second) &&
          box[d].first < box[d].second))
      throw std::invalid_argument("grid_scan: box must be finite and ordered");
    total *= static_cast<std::size_t>(resolution[d]);
  }

  auto coord = [&](std::size_t d, int idx) {
    return box[d].first +
           idx * (box[d].second - box[d].first) / (resolution[d] - 1);
  };
  std::vector<std::size_t> stride(dims, 1);
  for (std::size_t d = 1; d < dims; ++d)
    stride[d] = stride[d - 1] * static_cast<std::size_t>(resolution[d - 1]);

  std::vector<double> values(total, kNan);
  const std::size_t inner = total / static_cast<std::size_t>(resolution[dims - 1]);
  parallel_for(0, resolution[dims - 1], [&](int last) {
    std::vector<double> x(dims);
    std::vector<int> idx(dims, 0);
    idx[dims - 1] = last;
    for (std::size_t flat = 0; flat < inner; ++flat) {
      std::size_t rem = flat;
      for (std::size_t d = 0; d + 1 < dims; ++d) {
        idx[d] = static_cast<int>(rem % resolution[d]);
        rem /= resolution[d];
      }
      for (std::size_t d = 0; d < dims; ++d) x[d] = coord(d, idx[d]);
      std::size_t lin = 0;
      for (std::size_t d = 0; d < dims; ++d) lin += stride[d] * idx[d];
      values[lin] = f(x);
    }
  });

  bool any_valid = false;
  std::vector<LocalMax> out;
  std::vector<int> idx(dims), nb(dims);
  for (std::size_t lin = 0; lin < total; ++lin) {
    if (!finite(values[lin])) continue;
    any_valid = true;
    std::size_t rem = lin;
    for (std::size_t d = 0; d < dims; ++d) {
      idx[d] = static_cast<int>(rem % resolution[d]);
      rem /= resolution[d];
    }
    // Strictly greater than every valid Moore neighbor.
    bool is_max = true;
    std::vector<int> off(dims, -1);
    while (is_max) {
      bool all_zero = true, in_grid = true;
      for (std::size_t d = 0; d < dims; ++d) {
        if (off[d] != 0) all_zero = false;
        nb[d] = idx[d] + off[d];
        if (nb[d] < 0 || nb[d] >= resolution[d]) in_grid = false;
      }
      if (!all_zero && in_grid) {
        std::size_t nlin = 0;
        for (std::size_t d = 0; d < dims; ++d) nlin += stride[d] * nb[d];
        if (finite(values[nlin]) && values[nlin] >= values[lin]) is_max = false;
      }
      std::size_t d = 0;
      while (d < dims && ++off[d] > 1) off[d++] = -1;
      if (d == dims) break;
    }
    if (is_max) {
      LocalMax m;
      m.point.resize(dims);
      for (std::size_t d = 0; d < dims; ++d) m.point[d] = coord(d, idx[d]);
      m.value = values[lin];
      m.grad_norm = kNan;
      out.push_back(std::move(m));
    }
  }
  if (!any_valid)
    throw std::runtime_error("grid_scan: objective invalid on the entire grid");

  std::sort(out.begin(), out.end(), [](const LocalMax& a, const LocalMax& b) {
    if (std::abs(a.value - b.value) > 1e-12) return a.value > b.value;
    return a.point < b.point;
  });
  return out;
}

LocalMax newton_maximize(const Objective& f, std::vector<double> x0,
                         const NewtonOptions& opts) {
  const std::size_t n = x0.size();
  double fx = f(x0);
  if (!finite(fx))
    throw std::domain_error("newton_maximize: objective invalid at x0");

  LocalMax result;
  result.point = std::move(x0);
  result.value = fx;
  std::vector<double>& x = result.point;

  std::vector<double> g(n), fplus(n), fminus(n), h(n);
  std::vector<std::vector<double>> hess(n, std::vector<double>(n));
  int stagnant = 0;
  double window_value = fx;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    result.iterations = iter + 1;

    bool hess_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = opts.fd_step * std::max(1.0, std::abs(x[i]));
      std::vector<double> xp = x, xm = x;
      xp[i] += h[i];
      xm[i] -= h[i];
      fplus[i] = f(xp);
      fminus[i] = f(xm);
      if (finite(fplus[i]) && finite(fminus[i])) {
        g[i] = (fplus[i] - fminus[i]) / (2.0 * h[i]);
        hess[i][i] = (fplus[i] - 2.0 * fx + fminus[i]) / (h[i] * h[i]);
      } else if (finite(fplus[i])) { // feasibility wall below
        g[i] = (fplus[i] - fx) / h[i];
        hess_ok = false;
      } else if (finite(fminus[i])) {
        g[i] = (fx - fminus[i]) / h[i];
        hess_ok = false;
      } else {
        g[i] = 0.0;
        hess_ok = false;
      }
    }
    if (hess_ok) {
      for (std::size_t i = 0; i < n && hess_ok; ++i)
        for (std::size_t j = 0; j < i && hess_ok; ++j) {
          std::vector<double> xpp = x, xpm = x, xmp = x, xmm = x;
          xpp[i] += h[i]; xpp[j] += h[j];
          xpm[i] += h[i]; xpm[j] -= h[j];
          xmp[i] -= h[i]; xmp[j] += h[j];
          xmm[i] -= h[i]; xmm[j] -= h[j];
          const double fpp = f(xpp), fpm = f(xpm), fmp = f(xmp), fmm = f(xmm);
          if (finite(fpp) && finite(fpm) && finite(fmp) && finite(fmm))
            hess[i][j] = hess[j][i] =
                (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
          else
            hess_ok = false;
        }
    }

    result.grad_norm = 0.0;
    for (double gi : g) result.grad_norm = std::max(result.grad_norm, std::abs(gi));
    if (result.grad_norm <= opts.grad_tol) {
      result.converged = true;
      return result;
    }

    // Ascent Newton direction from -H when it is positive definite.
    std::vector<double> dir;
    if (hess_ok) {
      std::vector<std::vector<double>> m(n, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = -hess[i][j];
      if (cholesky(m)) dir = cholesky_solve(m, g);
    }

    auto line_search = [&](const std::vector<double>& d,
                           double t0) -> std::optional<double> {
      double t = t0;
      for (int back = 0; back < 80; ++back) {
        std::vector<double> xn(n);
        for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * d[i];
        const double fn = f(xn);
        if (finite(fn) && fn > fx) {
          x = xn;
          return fn;
        }
        t *= opts.damping;
      }
      return std::nullopt;
    };

    const std::vector<double> x_old = x;
    std::optional<double> fn;
    if (!dir.empty()) fn = line_search(dir, 1.0);
    if (!fn) fn = line_search(g, 1.0 / (1.0 + result.grad_norm));
    if (!fn) {
      // No improving step at working precision: stationary (possibly against
      // a feasibility wall).
      result.converged = true;
      return result;
    }

    double step_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      step_norm = std::max(step_norm, std::abs(x[i] - x_old[i]));
    const double improvement = *fn - fx;
    fx = *fn;
    result.value = fx;

    if (step_norm < opts.step_tol) {
      result.converged = true;
      return result;
    }
    if (improvement <= 4.0 * std::numeric_limits<double>::epsilon() *
                           (1.0 + std::abs(fx))) {
      if (++stagnant >= 2) {
        result.converged = true;
        return result;
      }
    } else {
      stagnant = 0;
    }
    // Creep guard: gradient-ascent fallbacks near degenerate maxima can
    // improve forever in sub-representable increments per ten iterations.
    if ((iter + 1) % 10 == 0) {
      if (fx - window_value <=
          1e-13 * (1.0 + std::abs(fx))) {
        result.converged = true;
        return result;
      }
      window_value = fx;
    }
  }
  return result; // max_iter exhausted, converged stays false
}

double solve_scalar_root(const std::function<double(double)>& f, double lo,
                         double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (!finite(flo) || !finite(fhi))
    throw std::invalid_argument("solve_scalar_root: f not finite at bracket");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("solve_scalar_root: no sign change on bracket");

  double width_prev = std::abs(hi - lo);
  int slow = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double x;
    const double denom = fhi - flo;
    if (denom != 0.0 && slow < 2) {
      x = hi - fhi * (hi - lo) / denom; // secant through the bracket
      const double a = std::min(lo, hi), b = std::max(lo, hi);
      if (!(x > a && x < b)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);
      slow = 0;
    }
    const double fx = f(x);
    if (!finite(fx))
      throw std::runtime_error("solve_scalar_root: f not finite inside bracket");
    if (std::abs(fx) <= tol) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double width = std::abs(hi - lo);
    if (width <= tol) return 0.5 * (lo + hi);
    if (width > 0.5 * width_prev) ++slow; else slow = 0;
    width_prev = width;
  }
  return 0.5 * (lo + hi);
}

SweepTable continuation_sweep(const ContinuationProblem& problem, double start,
                              double stop, double step,
                              std::vector<double> seed) {
  if (!(step > 0.0))
    throw std::invalid_argument("continuation_sweep: step must be > 0");
  const double dir = stop >= start ? 1.0 : -1.0;

  SweepTable table;
  table.kind = problem.kind;
  table.columns.push_back(problem.param_column);
  table.columns.insert(table.columns.end(), problem.columns.begin(),
                       problem.columns.end());

  auto predict = [&](double from, double to, std::vector<double> s) {
    if (problem.predict) return problem.predict(from, to, std::move(s));
    return s;
  };
  auto reseed = [&](const std::vector<double>& row) {
    return std::vector<double>(row.begin(), row.begin() + problem.seed_size);
  };

  // Walk from t_from (already solved, seed valid there) to t_to, splitting
  // the interval in halves when a direct solve fails.
  std::function<std::optional<std::vector<double>>(
      double, double, const std::vector<double>&, int)>
      advance = [&](double t_from, double t_to, const std::vector<double>& s,
                    int depth) -> std::optional<std::vector<double>> {
    auto row = problem.solve(t_to, predict(t_from, t_to, s));
    if (row) return row;
    if (depth >= 8) return std::nullopt;
    const double mid = 0.5 * (t_from + t_to);
    auto half = advance(t_from, mid, s, depth + 1);
    if (!half) return std::nullopt;
    return advance(mid, t_to, reseed(*half), depth + 1);
  };

  const int count = static_cast<int>(std::floor(
                        (stop - start) * dir / step + 1e-9)) + 1;
  double t_prev = start;
  int gaps_in_a_row = 0;
  bool first = true;
  for (int k = 0; k < count; ++k) {
    const double t = start + dir * step * k;
    std::optional<std::vector<double>> row;
    if (first) {
      row = problem.solve(t, seed);
      if (!row)
        throw std::domain_error(
            "continuation_sweep: seed does not solve the problem at start");
      first = false;
    } else {
      row = advance(t_prev, t, seed, 0);
    }
    std::vector<double> full;
    full.push_back(t);
    if (row) {
      full.insert(full.end(), row->begin(), row->end());
      seed = reseed(*row);
      t_prev = t;
      gaps_in_a_row = 0;
    } else {
      full.insert(full.end(), problem.columns.size(), kNan);
      ++gaps_in_a_row;
    }
    table.rows.push_back(std::move(full));
    if (gaps_in_a_row >= 3) {
      table.add_meta("truncated_at", format_double(t));
      break;
    }
  }
  return table;
}

} // namespace strauss::opt
