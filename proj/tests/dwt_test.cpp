// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dbcfr/dwt.hpp"
#include "test_support.hpp"

namespace dbcfr {
namespace {

double max_abs_diff(const Grid& a, const Grid& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double energy(const Grid& g) {
  double e = 0;
  for (double v : g.values()) e += v * v;
  return e;
}

TEST(HaarDwt, HandCaseTwoByTwo) {
  const auto sb = haar_dwt2(Grid(2, 2, std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(sb.ll(0, 0), 5.0);
  EXPECT_EQ(sb.hl(0, 0), -1.0);
  EXPECT_EQ(sb.lh(0, 0), -2.0);
  EXPECT_EQ(sb.hh(0, 0), 0.0);
}

TEST(HaarDwt, ConstantImageLivesInLL) {
  const auto sb = haar_dwt2(Grid(4, 4, 7.5));
  for (double v : sb.ll.values()) EXPECT_EQ(v, 15.0);
  for (const Grid* g : {&sb.lh, &sb.hl, &sb.hh})
    for (double v : g->values()) EXPECT_EQ(v, 0.0);
}

TEST(HaarDwt, HalvesDimensions) {
  const auto sb = haar_dwt2(Grid(100, 100, 1.0));
  for (const Grid* g : {&sb.ll, &sb.lh, &sb.hl, &sb.hh}) {
    EXPECT_EQ(g->width(), 50u);
    EXPECT_EQ(g->height(), 50u);
  }
  const auto rect = haar_dwt2(Grid(8, 6));
  EXPECT_EQ(rect.ll.width(), 4u);
  EXPECT_EQ(rect.ll.height(), 3u);
}

TEST(HaarDwt, OddDimensionThrows) {
  EXPECT_THROW(haar_dwt2(Grid(5, 4)), ShapeError);
  EXPECT_THROW(haar_dwt2(Grid(4, 3)), ShapeError);
}

TEST(HaarDwt, MatchesLiteralTwoPassFilterBank) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid x = testing::random_grid(rng, 16, 10, -100.0, 100.0);
    const auto sb = haar_dwt2(x);
    const auto ref = testing::two_pass_haar(x);
    EXPECT_LT(max_abs_diff(sb.ll, ref[0]), 1e-12);
    EXPECT_LT(max_abs_diff(sb.lh, ref[1]), 1e-12);
    EXPECT_LT(max_abs_diff(sb.hl, ref[2]), 1e-12);
    EXPECT_LT(max_abs_diff(sb.hh, ref[3]), 1e-12);
  }
}

TEST(HaarDwt, PerfectReconstructionAndEnergy) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid x = testing::random_grid(rng, 100, 100);
    const auto sb = haar_dwt2(x);
    EXPECT_LE(max_abs_diff(haar_idwt2(sb), x), 1e-9);
    const double sub = energy(sb.ll) + energy(sb.lh) + energy(sb.hl) + energy(sb.hh);
    EXPECT_LE(std::abs(sub - energy(x)) / energy(x), 1e-6);
  }
}

TEST(HaarDwt, Linearity) {
  std::mt19937_64 rng(2);
  const Grid x = testing::random_grid(rng, 20, 12), y = testing::random_grid(rng, 20, 12);
  const double a = 1.7, b = -0.3;
  Grid combo(20, 12);
  for (std::size_t i = 0; i < combo.size(); ++i) combo.values()[i] = a * x.values()[i] + b * y.values()[i];
  const auto sx = haar_dwt2(x), sy = haar_dwt2(y), sc = haar_dwt2(combo);
  auto check = [&](const Grid& gx, const Grid& gy, const Grid& gc) {
    for (std::size_t i = 0; i < gc.size(); ++i)
      EXPECT_NEAR(gc.values()[i], a * gx.values()[i] + b * gy.values()[i], 1e-9);
  };
  check(sx.ll, sy.ll, sc.ll);
  check(sx.lh, sy.lh, sc.lh);
  check(sx.hl, sy.hl, sc.hl);
  check(sx.hh, sy.hh, sc.hh);
}

TEST(HaarIdwt, ZeroSubbandsGiveZeroImage) {
  const SubbandSet sb{Grid(3, 2), Grid(3, 2), Grid(3, 2), Grid(3, 2), 6, 4};
  const Grid out = haar_idwt2(sb);
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(HaarIdwt, LLOnlyOfConstantIsTheConstant) {
  auto sb = haar_dwt2(Grid(6, 6, 33.0));
  sb.lh = sb.hl = sb.hh = Grid(3, 3, 0.0);
  const Grid out = haar_idwt2(sb);
  for (double v : out.values()) EXPECT_NEAR(v, 33.0, 1e-12);
}

TEST(HaarIdwt, MismatchedSubbandsThrow) {
  SubbandSet sb{Grid(3, 2), Grid(3, 2), Grid(2, 2), Grid(3, 2), 6, 4};
  EXPECT_THROW(haar_idwt2(sb), ShapeError);
}

TEST(SubbandImage, RescalesToByteRange) {
  const auto img = subband_to_image(Grid(2, 1, std::vector<double>{-3.0, 5.0}));
  EXPECT_EQ(img(0, 0), 0.0);
  EXPECT_EQ(img(0, 1), 255.0);
}

}  // namespace
}  // namespace dbcfr
