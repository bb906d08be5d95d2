// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dbcfr/error.hpp"

namespace dbcfr {

/// Row-major grid of reals. Row index grows downward, column index rightward.
class Grid {
 public:
  Grid() = default;

  Grid(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(width * height, fill) {
    if (width == 0 || height == 0) {
      throw ShapeError("grid dimensions must be positive");
    }
  }

  Grid(std::size_t width, std::size_t height, std::vector<double> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width == 0 || height == 0) {
      throw ShapeError("grid dimensions must be positive");
    }
    if (data_.size() != width * height) {
      throw ShapeError("grid has " + std::to_string(data_.size()) +
                       " values, expected " + std::to_string(width * height));
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * width_, width_);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Grayscale image: a grid whose intensities all lie in [0, 255].
class GrayImage {
 public:
  GrayImage() = default;

  explicit GrayImage(Grid pixels) : pixels_(std::move(pixels)) {
    if (pixels_.empty()) {
      throw ShapeError("image must have at least one pixel");
    }
    for (double v : pixels_.values()) {
      if (!(v >= 0.0 && v <= 255.0)) {
        throw ShapeError("intensity " + std::to_string(v) + " outside [0, 255]");
      }
    }
  }

  GrayImage(std::size_t width, std::size_t height, double fill = 0.0)
      : GrayImage(Grid(width, height, fill)) {}

  GrayImage(std::size_t width, std::size_t height, std::vector<double> data)
      : GrayImage(Grid(width, height, std::move(data))) {}

  /// Builds an image from arbitrary reals, clamping each into [0, 255].
  static GrayImage clamped(Grid g) {
    for (double& v : g.values()) v = std::clamp(v, 0.0, 255.0);
    return GrayImage(std::move(g));
  }

  std::size_t width() const { return pixels_.width(); }
  std::size_t height() const { return pixels_.height(); }
  double operator()(std::size_t row, std::size_t col) const { return pixels_(row, col); }
  const Grid& grid() const { return pixels_; }
  std::span<const double> values() const { return pixels_.values(); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  Grid pixels_;
};

/// Binary mask, one byte (0 or 1) per pixel, row-major.
struct BinaryGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<unsigned char> bits;

  unsigned char operator()(std::size_t row, std::size_t col) const { return bits[row * width + col]; }
  friend bool operator==(const BinaryGrid&, const BinaryGrid&) = default;
};

}  // namespace dbcfr
