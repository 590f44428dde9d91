// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <vector>

#include "tlpo/digest.hpp"
#include "tlpo/rng.hpp"

using namespace tlpo;

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("next_unit stays in [0,1)") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("next_below respects the bound and covers values") {
  Rng rng(11);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) ++counts[rng.next_below(5)];
  for (int c : counts) CHECK(c > 800);  // roughly uniform
}

TEST_CASE("mix produces distinct substreams") {
  CHECK(Rng::mix(1, 2) != Rng::mix(2, 1));
  CHECK(Rng::mix(1, 2) != Rng::mix(1, 3));
  CHECK(Rng::mix(1, 2, 3) != Rng::mix(1, 2, 4));
}

TEST_CASE("sample_index follows the weights") {
  Rng rng(5);
  const std::vector<double> w{0.7, 0.3};
  int zero = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (sample_index(rng, w) == 0) ++zero;
  const double freq = static_cast<double>(zero) / n;
  CHECK(freq > 0.68);
  CHECK(freq < 0.72);
}

TEST_CASE("fnv1a digest is stable and order-sensitive") {
  CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
  CHECK(to_hex64(0xABCULL) == "0000000000000abc");
}
