#include "scengen/math_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace scengen {

namespace {

// Lentz continued fraction for the incomplete beta, valid for
// x < (a+1)/(a+b+2); the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) covers the rest.
double beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16 * std::max(sum, 1e-300)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double debye1(double x) {
  if (x == 0.0) return 1.0;
  if (x < 0.0) return debye1(-x) - x / 2.0;
  // Composite Simpson on t/(e^t - 1); integrand is smooth with value 1 at 0.
  const auto f = [](double t) {
    if (t < 1e-8) return 1.0 - t / 2.0 + t * t / 12.0;
    return t / std::expm1(t);
  };
  const int n = 2048;  // even
  const double h = x / n;
  double acc = f(0.0) + f(x);
  for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / (3.0 * x);
}

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                             std::vector<double> x0, std::vector<double> step,
                             double ftol, int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) fv[i] = fn(simplex[i]);

  NelderMeadResult result;
  std::vector<std::size_t> order(n + 1);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fv[a] < fv[b] || (fv[a] == fv[b] && a < b);
    });
    const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

    const double spread = std::fabs(fv[worst] - fv[best]);
    const double scale = std::fabs(fv[best]) + std::fabs(fv[worst]) + 1e-30;
    if (spread <= ftol * scale) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
      return p;
    };

    std::vector<double> reflected = blend(-1.0);
    const double fr = fn(reflected);
    if (fr < fv[best]) {
      std::vector<double> expanded = blend(-2.0);
      const double fe = fn(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        fv[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      simplex[worst] = std::move(reflected);
      fv[worst] = fr;
    } else {
      std::vector<double> contracted = blend(fr < fv[worst] ? -0.5 : 0.5);
      const double fc = fn(contracted);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = std::move(contracted);
        fv[worst] = fc;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          fv[i] = fn(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  result.x = simplex[best];
  result.fmin = fv[best];
  result.iterations = iter;
  return result;
}

double brent_minimize(const std::function<double(double)>& fn, double a, double b,
                      double tol, int max_iter) {
  constexpr double golden = 0.3819660112501051;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = fn(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::fabs(x) + 1e-14;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool use_golden = true;
    if (std::fabs(e) > tol1) {
      // Parabolic interpolation through (v, w, x).
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_old = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
        use_golden = false;
      }
    }
    if (use_golden) {
      e = (x < m) ? b - x : a - x;
      d = golden * e;
    }
    const double u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = fn(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

double bisect_root(const std::function<double(double)>& fn, double lo, double hi,
                   double xtol, int max_iter) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool cholesky_lower(std::size_t n, const std::vector<double>& a, std::vector<double>& l) {
  l.assign(n * n, 0.0);
  double diag_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::fabs(a[i * n + i]));
  const double pivot_tol = 1e-14 * std::max(diag_scale, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) sum -= l[j * n + k] * l[j * n + k];
    if (sum < -pivot_tol) return false;
    if (sum <= pivot_tol) {
      // Rank-deficient direction: zero column keeps the factor valid.
      l[j * n + j] = 0.0;
      continue;
    }
    const double pivot = std::sqrt(sum);
    l[j * n + j] = pivot;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / pivot;
    }
  }
  return true;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

namespace {

// Merge sort counting the swaps needed to sort `xs`; used by Knight's tau.
std::uint64_t merge_count(std::vector<double>& xs, std::vector<double>& buf,
                          std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(xs, buf, lo, mid) + merge_count(xs, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (xs[j] < xs[i]) {
      swaps += mid - i;
      buf[k++] = xs[j++];
    } else {
      buf[k++] = xs[i++];
    }
  }
  while (i < mid) buf[k++] = xs[i++];
  while (j < hi) buf[k++] = xs[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            xs.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

std::uint64_t tie_pair_count(std::vector<double> sorted_vals) {
  std::uint64_t ties = 0;
  std::size_t i = 0;
  while (i < sorted_vals.size()) {
    std::size_t j = i;
    while (j < sorted_vals.size() && sorted_vals[j] == sorted_vals[i]) ++j;
    const std::uint64_t run = j - i;
    ties += run * (run - 1) / 2;
    i = j;
  }
  return ties;
}

}  // namespace

double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw std::invalid_argument("kendall_tau: need paired samples, n >= 2");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (xs[a] != xs[b]) return xs[a] < xs[b];
    return ys[a] < ys[b];
  });

  std::vector<double> x_sorted(n), y_by_x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_sorted[i] = xs[idx[i]];
    y_by_x[i] = ys[idx[i]];
  }

  // Joint ties (pairs tied in both x and y).
  std::uint64_t ties_xy = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && x_sorted[j] == x_sorted[i] && y_by_x[j] == y_by_x[i]) ++j;
      const std::uint64_t run = j - i;
      ties_xy += run * (run - 1) / 2;
      i = j;
    }
  }

  const std::uint64_t ties_x = tie_pair_count(x_sorted);
  std::vector<double> ys_copy = ys;
  std::sort(ys_copy.begin(), ys_copy.end());
  const std::uint64_t ties_y = tie_pair_count(ys_copy);

  std::vector<double> work = y_by_x, buf(n);
  const std::uint64_t discordant = merge_count(work, buf, 0, n);

  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  // Pairs tied in x are not counted as discordant by the merge (stable y order
  // within equal x); concordant = total - discordant - ties_x - ties_y + ties_xy.
  const double nc_minus_nd =
      static_cast<double>(total) - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
      static_cast<double>(ties_xy) - 2.0 * static_cast<double>(discordant);
  const double denom = std::sqrt(static_cast<double>(total - ties_x)) *
                       std::sqrt(static_cast<double>(total - ties_y));
  if (denom == 0.0) return 0.0;
  return nc_minus_nd / denom;
}

double empirical_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && xs[idx[j]] == xs[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = avg;
    i = j;
  }
  return ranks;
}

}  // namespace scengen
