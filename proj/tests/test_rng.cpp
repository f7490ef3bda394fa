#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "pottsmc/rng.hpp"

using namespace pottsmc;

// Known-answer vectors from the Random123 distribution (kat_vectors,
// philox4x32_10).
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RngStream, FirstWordsComeFromBlockZero) {
  RngStream r(0);
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r.next_u64(), std::uint64_t{out[0]} | (std::uint64_t{out[1]} << 32));
  EXPECT_EQ(r.next_u64(), std::uint64_t{out[2]} | (std::uint64_t{out[3]} << 32));
}

TEST(RngStream, SameSeedSameSequence) {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, SplitStreamsDiffer) {
  const RngStream root(42);
  RngStream a = root.split(1), b = root.split(2);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(a.next_u64());
    seen.insert(b.next_u64());
  }
  EXPECT_EQ(seen.size(), 2000u);
}

TEST(RngStream, UniformInUnitInterval) {
  RngStream r(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RngStream, UniformIntChiSquare) {
  RngStream r(11);
  const int k = 7;
  const int n = 70000;
  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) {
    const auto x = r.uniform_int(k);
    ASSERT_LT(x, static_cast<std::uint64_t>(k));
    ++counts[x];
  }
  double chi2 = 0.0;
  const double expect = static_cast<double>(n) / k;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // 6 degrees of freedom; 22.46 is the 0.999 quantile.
  EXPECT_LT(chi2, 22.46);
}

TEST(RngStream, UniformIntEdgeCases) {
  RngStream r(1);
  EXPECT_THROW(r.uniform_int(0), std::invalid_argument);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(r.uniform_int(1), 0u);
}

TEST(RngStream, BernoulliFrequency) {
  RngStream r(3);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3);
  EXPECT_NEAR(hits / static_cast<double>(n), 0.3, 4.0 * std::sqrt(0.21 / n));
}
