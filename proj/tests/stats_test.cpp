#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "archsmell/rng.hpp"
#include "archsmell/stats.hpp"

using namespace archsmell;

TEST_CASE("quartiles of a single sample degenerate to the value") {
  const std::vector<double> values = {5};
  const auto q = quartiles(values);
  CHECK(q.q1 == 5.0);
  CHECK(q.median == 5.0);
  CHECK(q.q3 == 5.0);
}

TEST_CASE("quartiles interpolate at rank (n-1)p") {
  const std::vector<double> values = {1, 2, 3, 4, 100};
  const auto q = quartiles(values);
  CHECK(q.q1 == 2.0);
  CHECK(q.median == 3.0);
  CHECK(q.q3 == 4.0);
}

TEST_CASE("quartiles of constant data") {
  const std::vector<double> values = {7, 7, 7, 7};
  const auto q = quartiles(values);
  CHECK(q.q1 == 7.0);
  CHECK(q.median == 7.0);
  CHECK(q.q3 == 7.0);
}

TEST_CASE("quartiles reject an empty sample") {
  CHECK_THROWS_AS(quartiles(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(high_threshold(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(low_threshold(std::vector<double>{}), ValidationError);
}

TEST_CASE("inner fences of the worked sample") {
  const std::vector<double> values = {1, 2, 3, 4, 100};
  CHECK(high_threshold(values) == 7.0);   // 4 + 1.5 * 2
  CHECK(low_threshold(values) == -1.0);   // 2 - 1.5 * 2
}

TEST_CASE("constant data collapses both fences onto the value") {
  const std::vector<double> values = {3, 3, 3, 3, 3, 3};
  CHECK(high_threshold(values) == 3.0);
  CHECK(low_threshold(values) == 3.0);
}

TEST_CASE("fence invariants hold on the result struct") {
  const std::vector<double> values = {9, 1, 4, 4, 6, 2, 8};
  const FenceResult f = inner_fences(values);
  CHECK(f.low_fence <= f.q1);
  CHECK(f.q1 <= f.median);
  CHECK(f.median <= f.q3);
  CHECK(f.q3 <= f.high_fence);
  CHECK(f.iqr == f.q3 - f.q1);
  CHECK(f.high_fence == f.q3 + 1.5 * f.iqr);
  CHECK(f.low_fence == f.q1 - 1.5 * f.iqr);
}

TEST_CASE("fences are permutation invariant") {
  Rng rng = make_rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    std::vector<double> values(n);
    for (auto& v : values) v = uniform01(rng) * 50 - 10;
    std::vector<double> shuffled = values;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(high_threshold(values) == high_threshold(shuffled));
    CHECK(low_threshold(values) == low_threshold(shuffled));
  }
}

TEST_CASE("fences are translation equivariant and scale equivariant") {
  Rng rng = make_rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 25);
    std::vector<double> values(n);
    for (auto& v : values) v = uniform01(rng) * 20;
    const double shift = uniform01(rng) * 10 - 5;
    const double scale = 0.1 + uniform01(rng) * 4;

    std::vector<double> shifted = values;
    for (auto& v : shifted) v += shift;
    std::vector<double> scaled = values;
    for (auto& v : scaled) v *= scale;

    const double tol = 1e-9;
    CHECK(high_threshold(shifted) ==
          Catch::Approx(high_threshold(values) + shift).margin(tol));
    CHECK(low_threshold(shifted) ==
          Catch::Approx(low_threshold(values) + shift).margin(tol));
    CHECK(high_threshold(scaled) ==
          Catch::Approx(high_threshold(values) * scale).margin(tol));
    CHECK(low_threshold(scaled) ==
          Catch::Approx(low_threshold(values) * scale).margin(tol));
  }
}
