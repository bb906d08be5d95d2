// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dbcfr/matcher.hpp"
#include "test_support.hpp"

namespace dbcfr {
namespace {

FeatureVector filled(double v, std::size_t n = 100) { return FeatureVector{std::vector<double>(n, v)}; }

Gallery random_gallery(std::mt19937_64& rng, std::size_t n) {
  Gallery g;
  for (std::size_t i = 0; i < n; ++i) {
    g.add({"p" + std::to_string(i % 7), "img" + std::to_string(i), testing::random_features(rng)});
  }
  return g;
}

TEST(Euclidean, IdentityIsZero) {
  std::mt19937_64 rng(1);
  const auto a = testing::random_features(rng);
  EXPECT_EQ(euclidean(a, a), 0.0);
}

TEST(Euclidean, SingleAxis) {
  auto a = filled(0.3), b = filled(0.3);
  b.coeffs[42] += 0.1;
  EXPECT_NEAR(euclidean(a, b), 0.1, 1e-15);
}

TEST(Euclidean, ClosedForm) { EXPECT_NEAR(euclidean(filled(0.0), filled(0.1)), 1.0, 1e-12); }

TEST(Euclidean, SymmetricAndLengthChecked) {
  std::mt19937_64 rng(2);
  const auto a = testing::random_features(rng), b = testing::random_features(rng);
  EXPECT_EQ(euclidean(a, b), euclidean(b, a));
  EXPECT_THROW(euclidean(a, filled(0.0, 99)), ShapeError);
}

TEST(Gallery, RejectsDuplicatesAndMixedLengths) {
  Gallery g;
  g.add({"a", "1", filled(0.0)});
  EXPECT_THROW(g.add({"a", "1", filled(0.5)}), GalleryError);
  EXPECT_THROW(g.add({"a", "2", filled(0.5, 50)}), GalleryError);
}

TEST(Identify, ExactDuplicateAcceptedAtZero) {
  std::mt19937_64 rng(3);
  const auto g = random_gallery(rng, 10);
  const auto m = identify(g.entries()[4].features, g, 0.0);
  EXPECT_EQ(m.best_image, "img4");
  EXPECT_EQ(m.distance, 0.0);
  EXPECT_TRUE(m.accepted);
}

TEST(Identify, FarProbeRejected) {
  std::mt19937_64 rng(4);
  const auto g = random_gallery(rng, 10);
  const auto m = identify(filled(5.0), g, 0.0);
  EXPECT_FALSE(m.accepted);
  EXPECT_GT(m.distance, 0.0);
}

TEST(Identify, TiesGoToEarliestEntry) {
  Gallery g;
  g.add({"x", "1", filled(0.2)});
  g.add({"y", "2", filled(0.2)});
  EXPECT_EQ(identify(filled(0.0), g, 1.0).best_subject, "x");
}

TEST(Identify, EmptyGalleryThrows) { EXPECT_THROW(identify(filled(0.0), Gallery{}, 1.0), GalleryError); }

TEST(Identify, MatchesExhaustiveScan) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_gallery(rng, 5);
    const auto probe = testing::random_features(rng);
    const auto m = identify(probe, g, 0.5);
    const auto [idx, dist] = testing::brute_nearest(probe, g);
    EXPECT_EQ(m.index, idx);
    EXPECT_NEAR(m.distance, dist, 1e-12);
    EXPECT_EQ(m.distance, euclidean(probe, g.entries()[m.index].features));
    EXPECT_EQ(m.accepted, m.distance <= 0.5);
  }
}

TEST(Identify, AcceptanceMonotoneInThreshold) {
  std::mt19937_64 rng(6);
  const auto g = random_gallery(rng, 20);
  const auto probe = testing::random_features(rng);
  bool seen = false;
  for (double t = 0.0; t < 5.0; t += 0.01) {
    const bool acc = identify(probe, g, t).accepted;
    if (seen) {
      EXPECT_TRUE(acc);
    }
    seen = seen || acc;
  }
  EXPECT_TRUE(seen);
}

TEST(Identify, ScalingFeaturesKeepsArgmin) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto g = random_gallery(rng, 15);
    auto probe = testing::random_features(rng);
    Gallery scaled;
    for (auto e : g.entries()) {
      for (double& v : e.features.coeffs) v *= 3.0;
      scaled.add(e);
    }
    const auto base = identify(probe, g, 0.0);
    for (double& v : probe.coeffs) v *= 3.0;
    const auto m = identify(probe, scaled, 0.0);
    EXPECT_EQ(m.best_subject, base.best_subject);
    EXPECT_EQ(m.best_image, base.best_image);
  }
}

TEST(GalleryFile, Format) {
  Gallery g;
  g.add({"s1", "s1/00.pgm", FeatureVector{{0.5, 0.25, 1.0}}});
  std::ostringstream out;
  write_gallery(g, out);
  EXPECT_EQ(out.str(), "dbcfr-gallery v1\ns1,s1/00.pgm,0.5,0.25,1\n");
}

TEST(GalleryFile, RoundTripPreservesEntries) {
  std::mt19937_64 rng(8);
  const auto g = random_gallery(rng, 30);
  std::stringstream buf;
  write_gallery(g, buf);
  const auto back = read_gallery(buf);
  ASSERT_EQ(back.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(back.entries()[i].subject_id, g.entries()[i].subject_id);
    EXPECT_EQ(back.entries()[i].image_id, g.entries()[i].image_id);
    EXPECT_EQ(back.entries()[i].features, g.entries()[i].features);
  }
}

TEST(GalleryFile, RejectsBadInput) {
  std::istringstream no_header("s1,a,0.5\n");
  EXPECT_THROW(read_gallery(no_header), GalleryError);
  std::istringstream bad_number("dbcfr-gallery v1\ns1,a,0.5,x\n");
  EXPECT_THROW(read_gallery(bad_number), GalleryError);
  std::istringstream short_line("dbcfr-gallery v1\ns1\n");
  EXPECT_THROW(read_gallery(short_line), GalleryError);

  Gallery g;
  g.add({"a,b", "1", filled(0.0)});
  std::ostringstream out;
  EXPECT_THROW(write_gallery(g, out), GalleryError);
}

}  // namespace
}  // namespace dbcfr
