// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// Shared test helpers: temporary directories, random grids and independent
// brute-force evaluators used as oracles. The oracles deliberately avoid the
// library's own helpers.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "dbcfr/dbcfr.hpp"

namespace dbcfr::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "dbcfr") {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline Grid random_grid(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0,
                        double hi = 255.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Grid g(w, h);
  for (double& v : g.values()) v = dist(rng);
  return g;
}

inline Grid random_int_grid(std::mt19937_64& rng, std::size_t w, std::size_t h, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Grid g(w, h);
  for (double& v : g.values()) v = dist(rng);
  return g;
}

inline FeatureVector random_features(std::mt19937_64& rng, std::size_t n = 100) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  FeatureVector fv;
  for (std::size_t i = 0; i < n; ++i) fv.coeffs.push_back(dist(rng));
  return fv;
}

// ---------------------------------------------------------------------------
// Oracles

/// Otsu by exhaustive search: for each candidate t, partition the raw pixel
/// list and compute count-weighted between-class variance from scratch.
inline double brute_otsu(const GrayImage& img) {
  double best = -1.0;
  int best_t = -1;
  for (int t = 1; t < 256; ++t) {
    double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
    for (double v : img.values()) {
      const double b = std::floor(v);
      if (b < t) {
        n0 += 1;
        s0 += b;
      } else {
        n1 += 1;
        s1 += b;
      }
    }
    if (n0 == 0 || n1 == 0) continue;
    const double diff = s0 / n0 - s1 / n1;
    const double var = n0 * n1 * diff * diff;
    if (var > best) {
      best = var;
      best_t = t;
    }
  }
  return best_t;
}

/// Literal two-pass orthonormal Haar filter bank: rows then columns.
inline std::array<Grid, 4> two_pass_haar(const Grid& x) {
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t w = x.width(), h = x.height();
  Grid lo(w / 2, h), hi(w / 2, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t k = 0; k < w / 2; ++k) {
      lo(r, k) = s * (x(r, 2 * k) + x(r, 2 * k + 1));
      hi(r, k) = s * (x(r, 2 * k) - x(r, 2 * k + 1));
    }
  }
  Grid ll(w / 2, h / 2), lh(w / 2, h / 2), hl(w / 2, h / 2), hh(w / 2, h / 2);
  for (std::size_t k = 0; k < h / 2; ++k) {
    for (std::size_t c = 0; c < w / 2; ++c) {
      ll(k, c) = s * (lo(2 * k, c) + lo(2 * k + 1, c));
      lh(k, c) = s * (lo(2 * k, c) - lo(2 * k + 1, c));
      hl(k, c) = s * (hi(2 * k, c) + hi(2 * k + 1, c));
      hh(k, c) = s * (hi(2 * k, c) - hi(2 * k + 1, c));
    }
  }
  return {ll, lh, hl, hh};
}

/// Nine-bit code of a 5x5 block (v[row][col]) with d = 1, every derivative
/// spelled out. Direction index: 0 -> 0deg, 1 -> 45deg, 2 -> 90deg, 3 -> 135deg.
inline unsigned brute_code(const double v[5][5], int direction) {
  auto deriv = [&](int i, int j) {
    switch (direction) {
      case 0: return v[i][j] - v[i][j - 1];
      case 1: return v[i][j] - v[i - 1][j + 1];
      case 2: return v[i][j] - v[i - 1][j];
      default: return v[i][j] - v[i - 1][j - 1];
    }
  };
  const double d[9] = {deriv(2, 2), deriv(2, 1), deriv(1, 1), deriv(1, 2), deriv(1, 3),
                       deriv(2, 3), deriv(3, 3), deriv(3, 2), deriv(3, 1)};
  unsigned code = 0;
  for (int k = 0; k < 9; ++k) {
    if (d[k] > 0) code += 1u << (8 - k);
  }
  return code;
}

/// Feature vector of a 50x50 band computed cell by cell with brute_code.
inline std::vector<double> brute_features(const Grid& ll) {
  std::vector<double> out;
  for (int cr = 0; cr < 10; ++cr) {
    for (int cc = 0; cc < 10; ++cc) {
      double block[5][5];
      for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) block[r][c] = ll(5 * cr + r, 5 * cc + c);
      }
      double sum = 0;
      for (int dir = 0; dir < 4; ++dir) sum += brute_code(block, dir);
      out.push_back(sum / 4.0 / 511.0);
    }
  }
  return out;
}

/// Exhaustive nearest neighbour: every distance computed, then the first minimum.
inline std::pair<std::size_t, double> brute_nearest(const FeatureVector& probe, const Gallery& g) {
  std::vector<double> dists;
  for (const auto& e : g.entries()) {
    double s = 0;
    for (std::size_t i = 0; i < probe.size(); ++i) s += std::pow(probe.coeffs[i] - e.features.coeffs[i], 2);
    dists.push_back(std::sqrt(s));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < dists.size(); ++i) {
    if (dists[i] < dists[best]) best = i;
  }
  return {best, dists[best]};
}

}  // namespace dbcfr::testing
