// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "dbcfr/error.hpp"
#include "dbcfr/grid.hpp"

namespace dbcfr {

/// One-level 2D Haar decomposition. LH holds vertical detail (low-pass along
/// rows, high-pass along columns), HL horizontal detail, HH diagonal.
struct SubbandSet {
  Grid ll, lh, hl, hh;
  std::size_t source_width = 0;
  std::size_t source_height = 0;
};

/// Orthonormal Haar analysis. Filtering rows with taps (1, 1)/sqrt2 and
/// (1, -1)/sqrt2 and then columns collapses, per 2x2 block [[a, b], [c, d]], to
///   LL = (a + b + c + d) / 2    HL = (a - b + c - d) / 2
///   LH = (a + b - c - d) / 2    HH = (a - b - c + d) / 2
/// which is evaluated directly so integer inputs give exact results.
inline SubbandSet haar_dwt2(const Grid& img) {
  const std::size_t w = img.width(), h = img.height();
  if (w % 2 != 0 || h % 2 != 0) {
    throw ShapeError("Haar DWT needs even dimensions, got " + std::to_string(w) + "x" +
                     std::to_string(h));
  }
  const std::size_t hw = w / 2, hh = h / 2;
  SubbandSet out{Grid(hw, hh), Grid(hw, hh), Grid(hw, hh), Grid(hw, hh), w, h};
  for (std::size_t r = 0; r < hh; ++r) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double a = img(2 * r, 2 * c), b = img(2 * r, 2 * c + 1);
      const double cc = img(2 * r + 1, 2 * c), d = img(2 * r + 1, 2 * c + 1);
      out.ll(r, c) = ((a + b) + (cc + d)) * 0.5;
      out.lh(r, c) = ((a + b) - (cc + d)) * 0.5;
      out.hl(r, c) = ((a - b) + (cc - d)) * 0.5;
      out.hh(r, c) = ((a - b) - (cc - d)) * 0.5;
    }
  }
  return out;
}

/// Exact inverse of haar_dwt2 up to round-off.
inline Grid haar_idwt2(const SubbandSet& sb) {
  const std::size_t hw = sb.ll.width(), hh = sb.ll.height();
  for (const Grid* g : {&sb.lh, &sb.hl, &sb.hh}) {
    if (g->width() != hw || g->height() != hh) throw ShapeError("subband dimensions differ");
  }
  if (sb.source_width != 2 * hw || sb.source_height != 2 * hh) {
    throw ShapeError("subbands do not match the recorded source size");
  }
  Grid out(2 * hw, 2 * hh);
  for (std::size_t r = 0; r < hh; ++r) {
    for (std::size_t c = 0; c < hw; ++c) {
      const double ll = sb.ll(r, c), lh = sb.lh(r, c), hl = sb.hl(r, c), hh_ = sb.hh(r, c);
      out(2 * r, 2 * c) = ((ll + lh) + (hl + hh_)) * 0.5;
      out(2 * r, 2 * c + 1) = ((ll + lh) - (hl + hh_)) * 0.5;
      out(2 * r + 1, 2 * c) = ((ll - lh) + (hl - hh_)) * 0.5;
      out(2 * r + 1, 2 * c + 1) = ((ll - lh) - (hl - hh_)) * 0.5;
    }
  }
  return out;
}

/// Affine rescale of a subband into [0, 255] for viewing. Constant bands map to 0.
inline GrayImage subband_to_image(const Grid& band) {
  double lo = band.values()[0], hi = lo;
  for (double v : band.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Grid out(band.width(), band.height());
  const double span = hi - lo;
  for (std::size_t i = 0; i < band.size(); ++i) {
    out.values()[i] = span > 0.0 ? (band.values()[i] - lo) * 255.0 / span : 0.0;
  }
  return GrayImage::clamped(std::move(out));
}

}  // namespace dbcfr
