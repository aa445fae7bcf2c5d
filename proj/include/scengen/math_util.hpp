#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace scengen {

inline constexpr double kPi = 3.14159265358979323846;

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Survival function of the asymptotic Kolmogorov distribution,
// Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

// First Debye function D1(x) = (1/x) * Integral[0,x] t/(e^t - 1) dt,
// extended to x < 0 via D1(-x) = D1(x) + x/2. D1(0) = 1.
double debye1(double x);

struct NelderMeadResult {
  std::vector<double> x;
  double fmin = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Downhill simplex minimization. `step` sets the initial simplex edge per
// coordinate; convergence on relative spread of function values.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                             std::vector<double> x0, std::vector<double> step,
                             double ftol = 1e-12, int max_iter = 2000);

// Brent minimization of a univariate function on [a, b].
double brent_minimize(const std::function<double(double)>& fn, double a, double b,
                      double tol = 1e-10, int max_iter = 200);

// Bisection root of a monotone function with f(lo) and f(hi) of opposite
// sign (or zero). Runs to interval width xtol.
double bisect_root(const std::function<double(double)>& fn, double lo, double hi,
                   double xtol, int max_iter = 200);

// Lower-triangular Cholesky factor of a symmetric PSD matrix (row-major,
// n x n), tolerant of zero pivots so rank-deficient covariances factor.
// Returns false when a pivot is negative beyond round-off.
bool cholesky_lower(std::size_t n, const std::vector<double>& a, std::vector<double>& l);

double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs);  // population (1/n) convention

// Kendall rank correlation (tau-b), Knight's O(n log n) algorithm.
double kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys);

// Linear-interpolation sample quantile on an ascending-sorted vector
// (the R type-7 convention).
double empirical_quantile(const std::vector<double>& sorted, double q);

// Ranks averaged over ties, 1-based.
std::vector<double> average_ranks(const std::vector<double>& xs);

}  // namespace scengen
