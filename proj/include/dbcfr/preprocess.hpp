// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// Face-region preprocessing: grayscale conversion, row-scan cropping and
// resizing to the fixed working resolution.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dbcfr/error.hpp"
#include "dbcfr/grid.hpp"

namespace dbcfr {

inline constexpr std::size_t kWorkingSize = 100;

/// ITU-R BT.601 luma of three equally sized channels.
inline GrayImage to_gray(const Grid& r, const Grid& g, const Grid& b) {
  if (r.width() != g.width() || r.width() != b.width() || r.height() != g.height() ||
      r.height() != b.height()) {
    throw ShapeError("channel dimensions differ");
  }
  Grid out(r.width(), r.height());
  auto rv = r.values(), gv = g.values(), bv = b.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    ov[i] = std::clamp(0.299 * rv[i] + 0.587 * gv[i] + 0.114 * bv[i], 0.0, 255.0);
  }
  return GrayImage(std::move(out));
}

/// 1 where the pixel is at or above `threshold`, 0 elsewhere.
inline BinaryGrid binarize(const GrayImage& img, double threshold) {
  BinaryGrid out{img.width(), img.height(), std::vector<unsigned char>(img.values().size())};
  auto v = img.values();
  for (std::size_t i = 0; i < v.size(); ++i) out.bits[i] = v[i] >= threshold ? 1 : 0;
  return out;
}

/// Per-row extents found by the row scans, plus the retained vertical range.
/// Rows without foreground carry no left/right position.
struct CropBounds {
  std::vector<std::optional<std::size_t>> left;
  std::vector<std::optional<std::size_t>> right;
  std::size_t top = 0;
  std::size_t bottom = 0;
};

namespace detail {

inline std::optional<std::size_t> scan_forward(const BinaryGrid& m, std::size_t row,
                                               std::size_t begin, std::size_t end) {
  for (std::size_t c = begin; c < end; ++c) {
    if (m(row, c)) return c;
  }
  return std::nullopt;
}

inline std::optional<std::size_t> scan_backward(const BinaryGrid& m, std::size_t row,
                                                std::size_t begin, std::size_t end) {
  for (std::size_t c = end; c > begin; --c) {
    if (m(row, c - 1)) return c - 1;
  }
  return std::nullopt;
}

inline GrayImage sub_image(const GrayImage& img, std::size_t top, std::size_t bottom,
                           std::size_t left, std::size_t right) {
  const std::size_t w = right - left + 1;
  const std::size_t h = bottom - top + 1;
  Grid out(w, h);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) out(r, c) = img(top + r, left + c);
  }
  return GrayImage(std::move(out));
}

}  // namespace detail

/// Crops the foreground of `img` by binary row scans.
///
/// The mask is split into a left half [0, w/2) and a right half [w/2, w).
/// Each row's left half is scanned left to right and its right half right to
/// left, stopping at the first foreground pixel. When one half of a row is
/// empty the scan carries on through the other half, so the recorded extent
/// is always the row's true leftmost/rightmost foreground column. Rows with no
/// foreground at the top and bottom are dropped; the result is the bounding
/// box of the recorded positions.
inline std::pair<GrayImage, CropBounds> scan_crop(const GrayImage& img, double threshold) {
  const BinaryGrid mask = binarize(img, threshold);
  const std::size_t w = img.width();
  const std::size_t h = img.height();
  const std::size_t mid = w / 2;

  CropBounds bounds;
  bounds.left.resize(h);
  bounds.right.resize(h);
  std::optional<std::size_t> top, bottom;
  std::size_t min_left = w, max_right = 0;

  for (std::size_t r = 0; r < h; ++r) {
    auto left = detail::scan_forward(mask, r, 0, mid);
    if (!left) left = detail::scan_forward(mask, r, mid, w);
    auto right = detail::scan_backward(mask, r, mid, w);
    if (!right) right = detail::scan_backward(mask, r, 0, mid);
    if (!left) continue;
    bounds.left[r] = left;
    bounds.right[r] = right;
    if (!top) top = r;
    bottom = r;
    min_left = std::min(min_left, *left);
    max_right = std::max(max_right, *right);
  }
  if (!top) throw CropError("no foreground pixel at or above the crop threshold");

  bounds.top = *top;
  bounds.bottom = *bottom;
  return {detail::sub_image(img, bounds.top, bounds.bottom, min_left, max_right), std::move(bounds)};
}

/// Otsu's threshold over a 256-bin histogram of floor(intensity).
///
/// Candidate t splits pixels into bins [0, t) and [t, 255]; the returned t
/// maximizes between-class variance, smallest t winning ties.
inline double otsu_threshold(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (double v : img.values()) {
    hist[static_cast<std::size_t>(std::clamp(std::floor(v), 0.0, 255.0))] += 1.0;
  }
  const auto distinct = std::count_if(hist.begin(), hist.end(), [](double n) { return n > 0.0; });
  if (distinct < 2) throw ThresholdError("histogram has a single intensity level");

  const double total = static_cast<double>(img.values().size());
  double total_sum = 0.0;
  for (std::size_t i = 0; i < 256; ++i) total_sum += static_cast<double>(i) * hist[i];

  double best_var = -1.0;
  std::size_t best_t = 1;
  double w0 = 0.0, sum0 = 0.0;
  for (std::size_t t = 1; t < 256; ++t) {
    w0 += hist[t - 1];
    sum0 += static_cast<double>(t - 1) * hist[t - 1];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (total_sum - sum0) / w1;
    const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return static_cast<double>(best_t);
}

/// Bilinear resize with pixel-center alignment.
inline GrayImage resize(const GrayImage& img, std::size_t out_w, std::size_t out_h) {
  if (out_w == 0 || out_h == 0) throw ShapeError("resize target must be at least 1x1");
  const double sx = static_cast<double>(img.width()) / static_cast<double>(out_w);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(out_h);
  const double max_x = static_cast<double>(img.width() - 1);
  const double max_y = static_cast<double>(img.height() - 1);

  Grid out(out_w, out_h);
  for (std::size_t r = 0; r < out_h; ++r) {
    const double y = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < out_w; ++c) {
      const double x = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = img(y0, x0) + fx * (img(y0, x1) - img(y0, x0));
      const double bot = img(y1, x0) + fx * (img(y1, x1) - img(y1, x0));
      out(r, c) = top + fy * (bot - top);
    }
  }
  return GrayImage::clamped(std::move(out));
}

/// Otsu threshold, row-scan crop, then resize to `size` x `size`.
inline GrayImage preprocess(const GrayImage& img, std::size_t size = kWorkingSize) {
  const double t = otsu_threshold(img);
  return resize(scan_crop(img, t).first, size, size);
}

}  // namespace dbcfr
