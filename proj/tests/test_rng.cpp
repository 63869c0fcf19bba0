#include <cmath>
#include <set>

#include "doctest.h"
#include "polymer/rng.hpp"

using namespace polymer;

TEST_CASE("philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct") {
  RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  bool diff_c = false, diff_d = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    diff_c |= x != c.next_u64();
    diff_d |= x != d.next_u64();
  }
  CHECK(diff_c);
  CHECK(diff_d);
}

TEST_CASE("uniform stays in the open unit interval with the right mean") {
  RngStream r(1, 0);
  double s = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::abs(s / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("normal has unit variance") {
  RngStream r(2, 0);
  double s = 0.0, s2 = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 3.0 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("stream ids and mixed seeds") {
  CHECK(stream_id_for(1, 5) == ((1ull << 40) | 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(mix_seed(s, 0x7265747279));
  CHECK(seen.size() == 1000);
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
}
