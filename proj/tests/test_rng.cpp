#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "cdlab/rng.hpp"

using namespace cdlab;

TEST_CASE("identical seeds replay identical streams") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 200; ++i) CHECK(a.raw() == b.raw());
  Rng c(12345), d(12345);
  for (int i = 0; i < 50; ++i) {
    CHECK(c.uniform01() == d.uniform01());
    CHECK(c.gaussian() == d.gaussian());
    CHECK(c.integer(17) == d.integer(17));
  }
}

TEST_CASE("raw output is the standard mt19937_64 sequence") {
  // fixed by the C++ standard: 10000th output from seed 5489 (the default)
  std::mt19937_64 ref(5489);
  Rng mine(5489);
  for (int i = 0; i < 9999; ++i) {
    ref();
    mine.raw();
  }
  CHECK(ref() == 9981545732273789042ULL);
  std::mt19937_64 ref2(5489);
  Rng mine2(5489);
  for (int i = 0; i < 100; ++i) CHECK(mine2.raw() == ref2());
}

TEST_CASE("split_seed derives distinct non-colliding streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 4096; ++s) seen.insert(split_seed(42, s));
  CHECK(seen.size() == 4096);
  CHECK(split_seed(42, 0) != split_seed(43, 0));
  CHECK(split_seed(42, 0) != 42);

  // derived streams diverge immediately
  Rng a(split_seed(7, 0)), b(split_seed(7, 1));
  bool all_equal = true;
  for (int i = 0; i < 8; ++i)
    if (a.raw() != b.raw()) all_equal = false;
  CHECK(!all_equal);
}

TEST_CASE("uniform01 stays in [0,1) with 53-bit resolution") {
  Rng rng(99);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);

  Rng r2(99);
  const double v = r2.uniform(-3.0, 5.0);
  CHECK(v >= -3.0);
  CHECK(v < 5.0);
}

TEST_CASE("gaussian moments match the standard normal") {
  Rng rng(2024);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);       // ~4.5 sigma of the sample mean
  CHECK(std::abs(var - 1.0) < 0.02);  // sample variance of a normal
}

TEST_CASE("integer is in range and roughly uniform") {
  Rng rng(7);
  const std::uint64_t n = 10;
  std::vector<int> counts(n, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t k = rng.integer(n);
    REQUIRE(k < n);
    ++counts[static_cast<std::size_t>(k)];
  }
  for (int c : counts) {
    CHECK(c > draws / static_cast<int>(n) - 600);
    CHECK(c < draws / static_cast<int>(n) + 600);
  }
  Rng one(8);
  for (int i = 0; i < 10; ++i) CHECK(one.integer(1) == 0);
}

TEST_CASE("shuffle produces valid permutations and hits both orders of a pair") {
  Rng rng(55);
  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  std::vector<int> sorted = v;
  rng.shuffle(v);
  CHECK(v != sorted); // 1/20! chance of failure
  std::vector<int> check = v;
  std::sort(check.begin(), check.end());
  CHECK(check == sorted);

  int swapped = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> p{0, 1};
    rng.shuffle(p);
    if (p[0] == 1) ++swapped;
  }
  CHECK(swapped > trials / 2 - 500);
  CHECK(swapped < trials / 2 + 500);
}

TEST_CASE("pinned values guard the transforms against accidental change") {
  // frozen from the current implementation; a change here breaks every
  // recorded seed in the repository
  Rng rng(1);
  CHECK(rng.raw() == 2469588189546311528ULL);
  Rng u(1);
  CHECK(u.uniform01() == doctest::Approx(0.13387664401253274).epsilon(1e-15));
  Rng g(1);
  CHECK(g.gaussian() == doctest::Approx(-0.039399956754155314).epsilon(1e-12));
  Rng k(1);
  CHECK(k.integer(100) == 28ULL);
  CHECK(split_seed(0, 0) == 16294208416658607535ULL);
}
