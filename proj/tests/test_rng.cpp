#include <gtest/gtest.h>

#include <set>

#include "speclaw/rng.hpp"

using namespace speclaw;

// Known-answer vectors for Philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(Philox, UsableAtCompileTime) {
  constexpr auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5u);
}

TEST(RngStream, Deterministic) {
  RngStream a = RngStream::for_replicate(42, 3, 7);
  RngStream b = RngStream::for_replicate(42, 3, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
  EXPECT_EQ(a.position(), 1000u);
}

TEST(RngStream, DistinctPathsDiverge) {
  std::set<std::uint64_t> first;
  for (std::uint64_t cell = 0; cell < 8; ++cell)
    for (std::uint64_t rep = 0; rep < 8; ++rep) first.insert(RngStream::for_replicate(1, cell, rep)());
  EXPECT_EQ(first.size(), 64u);
  EXPECT_NE(RngStream::for_replicate(1, 0, 0)(), RngStream::for_replicate(2, 0, 0)());
}

TEST(RngStream, CellSeedMixesBothInputs) {
  EXPECT_NE(cell_seed(0, 1), cell_seed(1, 0));
  EXPECT_NE(cell_seed(5, 5), cell_seed(5, 6));
  EXPECT_EQ(cell_seed(9, 4), cell_seed(9, 4));
}

TEST(RngStream, UniformInUnitIntervalWithSaneMoments) {
  RngStream r = RngStream::for_replicate(11, 0, 0);
  double s = 0.0, s2 = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  // Mean 1/2 with sd 1/sqrt(12 m); second moment 1/3.
  EXPECT_NEAR(s / m, 0.5, 5.0 / std::sqrt(12.0 * m));
  EXPECT_NEAR(s2 / m, 1.0 / 3.0, 0.003);
}

TEST(RngStream, BitBalance) {
  RngStream r = RngStream::for_replicate(3, 1, 4);
  std::array<int, 64> ones{};
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const std::uint64_t x = r();
    for (int b = 0; b < 64; ++b) ones[b] += (x >> b) & 1u;
  }
  // sd of each count is sqrt(m)/2 ~ 71.
  for (int b = 0; b < 64; ++b) EXPECT_NEAR(ones[b], m / 2, 450) << "bit " << b;
}
