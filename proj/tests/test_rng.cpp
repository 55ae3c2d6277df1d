#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "bandit/rng.hpp"

using namespace bandit;

TEST_CASE("same (base_seed, stream_index) gives identical sequences") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("distinct stream indices give distinct sequences") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_u64() == b.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("next_double is uniform on [0,1)") {
  RngStream rng(1, 0);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sq += u * u;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.004));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("sample_beta moments") {
  const int n = 1000000;
  auto moments = [&](double a, double b, std::uint64_t stream) {
    RngStream rng(3, stream);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = sample_beta(a, b, rng);
      sum += x;
      sq += x * x;
    }
    double mean = sum / n;
    return std::pair{mean, sq / n - mean * mean};
  };

  SUBCASE("Beta(1,1) is uniform") {
    auto [mean, var] = moments(1, 1, 0);
    CHECK(std::abs(mean - 0.5) < 0.002);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.001);
  }
  SUBCASE("Beta(2,1) mean 2/3") {
    auto [mean, var] = moments(2, 1, 1);
    CHECK(std::abs(mean - 2.0 / 3.0) < 0.002);
  }
  SUBCASE("Beta(5,5) mean 1/2, variance 25/1100") {
    auto [mean, var] = moments(5, 5, 2);
    CHECK(std::abs(mean - 0.5) < 0.002);
    CHECK(std::abs(var - 25.0 / 1100.0) < 0.001);
  }
}

TEST_CASE("sample_beta rejects non-positive parameters") {
  RngStream rng(0, 0);
  CHECK_THROWS_AS(sample_beta(0.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_beta(1.0, -2.0, rng), std::invalid_argument);
}

TEST_CASE("sample_beta handles shape below one") {
  RngStream rng(9, 0);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_beta(0.5, 0.5, rng);
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

// Two-sample Kolmogorov-Smirnov distance.
static double ks_distance(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] <= y[j]) {
      ++i;
    } else {
      ++j;
    }
    double fx = static_cast<double>(i) / x.size();
    double fy = static_cast<double>(j) / y.size();
    d = std::max(d, std::abs(fx - fy));
  }
  return d;
}

TEST_CASE("sample_beta(a,b) and 1 - sample_beta(b,a) agree in distribution") {
  const std::size_t n = 100000;
  RngStream r1(11, 0), r2(11, 1);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = sample_beta(3, 7, r1);
    y[i] = 1.0 - sample_beta(7, 3, r2);
  }
  // KS critical value at significance 0.001 for two samples of size n.
  double crit = 1.9495 * std::sqrt(2.0 / static_cast<double>(n));
  CHECK(ks_distance(x, y) < crit);
}

TEST_CASE("sample_normal has standard moments") {
  RngStream rng(5, 0);
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = sample_normal(rng);
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.004);
  CHECK(std::abs(sq / n - 1.0) < 0.01);
}
