#include <doctest.h>

#include <cmath>
#include <vector>

#include "scengen/math_util.hpp"
#include "scengen/rng.hpp"
#include "support/quadrature.hpp"

using namespace scengen;

TEST_CASE("incomplete beta matches closed forms") {
  // I_x(1,1) = x
  CHECK(incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
  // I_x(2,2) = x^2 (3 - 2x)
  const double x = 0.42;
  CHECK(incomplete_beta(2.0, 2.0, x) == doctest::Approx(x * x * (3.0 - 2.0 * x)).epsilon(1e-12));
  CHECK(incomplete_beta(2.5, 1.5, 0.0) == 0.0);
  CHECK(incomplete_beta(2.5, 1.5, 1.0) == 1.0);
}

TEST_CASE("kolmogorov survival function") {
  CHECK(kolmogorov_sf(0.0) == 1.0);
  // Q(1) = 2 sum (-1)^{k-1} e^{-2k^2}; first terms dominate.
  const double q1 = 2.0 * (std::exp(-2.0) - std::exp(-8.0) + std::exp(-18.0));
  CHECK(kolmogorov_sf(1.0) == doctest::Approx(q1).epsilon(1e-10));
  CHECK(kolmogorov_sf(5.0) < 1e-20);
}

TEST_CASE("debye1 against quadrature and the negative-argument identity") {
  for (double x : {0.5, 2.0, 5.0, 20.0}) {
    const double ref =
        testsupport::integrate([](double t) { return t < 1e-12 ? 1.0 : t / std::expm1(t); }, 0.0,
                               x, 1e-12) /
        x;
    CHECK(debye1(x) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(debye1(-x) == doctest::Approx(debye1(x) + x / 2.0).epsilon(1e-12));
  }
  CHECK(debye1(0.0) == 1.0);
}

TEST_CASE("nelder-mead minimizes a shifted quadratic") {
  auto f = [](const std::vector<double>& x) {
    const double a = x[0] - 1.5, b = x[1] + 2.0;
    return a * a + 3.0 * b * b + 7.0;
  };
  const NelderMeadResult res = nelder_mead(f, {0.0, 0.0}, {0.5, 0.5});
  CHECK(res.x[0] == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(res.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
  CHECK(res.fmin == doctest::Approx(7.0).epsilon(1e-8));
}

TEST_CASE("brent finds a smooth minimum") {
  const double x = brent_minimize([](double t) { return std::cos(t); }, 2.0, 4.5);
  CHECK(x == doctest::Approx(3.14159265358979).epsilon(1e-7));
}

TEST_CASE("bisection root") {
  const double r = bisect_root([](double t) { return t * t - 2.0; }, 0.0, 2.0, 1e-13);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
}

TEST_CASE("cholesky handles PSD and rejects indefinite") {
  std::vector<double> l;
  SUBCASE("positive definite") {
    const std::vector<double> a = {4.0, 2.0, 2.0, 3.0};
    REQUIRE(cholesky_lower(2, a, l));
    // L L^T == A
    CHECK(l[0] * l[0] == doctest::Approx(4.0));
    CHECK(l[2] * l[0] == doctest::Approx(2.0));
    CHECK(l[2] * l[2] + l[3] * l[3] == doctest::Approx(3.0));
  }
  SUBCASE("rank deficient") {
    const std::vector<double> a = {1.0, 1.0, 1.0, 1.0};
    REQUIRE(cholesky_lower(2, a, l));
    CHECK(l[3] == 0.0);
  }
  SUBCASE("indefinite") {
    const std::vector<double> a = {1.0, 0.0, 0.0, -1.0};
    CHECK_FALSE(cholesky_lower(2, a, l));
  }
}

namespace {

// Quadratic brute-force tau-b, the oracle for Knight's algorithm.
double tau_brute(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double concordant = 0.0, discordant = 0.0, ties_x = 0.0, ties_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) { ties_x += 1.0; continue; }
      if (dy == 0.0) { ties_y += 1.0; continue; }
      (dx * dy > 0.0 ? concordant : discordant) += 1.0;
    }
  }
  const double total = static_cast<double>(n) * (n - 1) / 2.0;
  double tx = 0.0, ty = 0.0;  // all pairs tied in x (resp. y)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (xs[i] == xs[j]) tx += 1.0;
      if (ys[i] == ys[j]) ty += 1.0;
    }
  return (concordant - discordant) / std::sqrt((total - tx) * (total - ty));
}

}  // namespace

TEST_CASE("kendall tau matches a quadratic oracle, with and without ties") {
  RngStream rng(77);
  std::vector<double> xs, ys;
  for (int i = 0; i < 400; ++i) {
    // Coarse rounding forces ties in both coordinates.
    xs.push_back(std::floor(rng.next_u01() * 20.0));
    ys.push_back(std::floor(rng.next_u01() * 20.0) + 0.3 * xs.back());
  }
  CHECK(kendall_tau(xs, ys) == doctest::Approx(tau_brute(xs, ys)).epsilon(1e-12));

  std::vector<double> us, vs;
  for (int i = 0; i < 300; ++i) {
    us.push_back(rng.next_u01());
    vs.push_back(rng.next_u01());
  }
  CHECK(kendall_tau(us, vs) == doctest::Approx(tau_brute(us, vs)).epsilon(1e-12));
  CHECK(kendall_tau(us, us) == doctest::Approx(1.0));
}

TEST_CASE("empirical quantile interpolates") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(empirical_quantile(xs, 0.5) == doctest::Approx(3.0));
  CHECK(empirical_quantile(xs, 0.25) == doctest::Approx(2.0));
  CHECK(empirical_quantile(xs, 0.0) == 1.0);
  CHECK(empirical_quantile(xs, 1.0) == 5.0);
}

TEST_CASE("rng streams are deterministic and substreams decorrelated") {
  RngStream a(123), b(123);
  for (int i = 0; i < 5; ++i) CHECK(a.next_u64() == b.next_u64());
  RngStream s0 = RngStream::substream(9, 0);
  RngStream s1 = RngStream::substream(9, 1);
  CHECK(s0.next_u64() != s1.next_u64());
  RngStream c(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.next_u01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
