#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "ise/rng.hpp"

using namespace ise;

namespace {

double phi_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Bisection on the normal CDF.
double phi_inverse(double u) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("counter generator reproduces the SplitMix64 sequence") {
  CounterRng rng(0);
  CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next_u64() == 0x06C45D188009454FULL);
  CHECK(rng.counter() == 3);
  CHECK(mix64(0) == 0);
}

TEST_CASE("streams are deterministic and distinct") {
  CounterRng a = CounterRng::stream(42, 7);
  CounterRng b = CounterRng::stream(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t id = 0; id < 1000; ++id) firsts.insert(CounterRng::stream(42, id).next_u64());
  CHECK(firsts.size() == 1000);
  CHECK(CounterRng::stream(42, 0).key() != CounterRng::stream(43, 0).key());

  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 10000; ++r) seeds.insert(replicate_seed(20240611, r));
  CHECK(seeds.size() == 10000);
  CHECK(replicate_seed(20240611, 5) == replicate_seed(20240611, 5));
  CHECK(replicate_seed(20240611, 5) != replicate_seed(20240612, 5));
}

TEST_CASE("uniform draws lie strictly inside the unit interval") {
  CounterRng rng = CounterRng::stream(1, 1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK_FALSE(u <= 0.0);
    CHECK_FALSE(u >= 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sum2 / n - mean * mean - 1.0 / 12.0) < 1e-3);
  CHECK(CounterRng(0).uniform() > 0.0);
}

TEST_CASE("normal draws are the inverse CDF of the uniform stream") {
  CounterRng a = CounterRng::stream(9, 3);
  CounterRng b = CounterRng::stream(9, 3);
  for (int i = 0; i < 500; ++i) {
    const double z = a.normal();
    CHECK(z == doctest::Approx(phi_inverse(b.uniform())).epsilon(1e-9));
  }
  CounterRng c(5);
  CHECK(c.normal(3.0, 2.0) == doctest::Approx(3.0 + 2.0 * CounterRng(5).normal()).epsilon(1e-15));
}

TEST_CASE("normal draws pass a Kolmogorov-Smirnov test") {
  CounterRng rng = CounterRng::stream(2, 2);
  std::vector<double> z(50000);
  for (double& v : z) v = rng.normal();
  std::sort(z.begin(), z.end());
  double d = 0.0;
  const double n = static_cast<double>(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = phi_cdf(z[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  CHECK(d < 1.6276 / std::sqrt(n));
}

TEST_CASE("cauchy quartiles and bernoulli rate") {
  CounterRng rng = CounterRng::stream(3, 3);
  std::vector<double> x(40000);
  for (double& v : x) v = rng.cauchy();
  std::sort(x.begin(), x.end());
  CHECK(std::abs(x[20000]) < 0.03);
  CHECK(x[10000] == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(x[30000] == doctest::Approx(1.0).epsilon(0.05));

  int ones = 0;
  for (int i = 0; i < 40000; ++i) ones += rng.bernoulli(0.3) == 1.0;
  CHECK(std::abs(ones / 40000.0 - 0.3) < 4.0 * std::sqrt(0.21 / 40000.0));
  CHECK(rng.bernoulli(0.0) == 0.0);
  CHECK(rng.bernoulli(1.0) == 1.0);
}
