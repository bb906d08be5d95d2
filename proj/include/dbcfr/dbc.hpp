// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// Directional binary codes over the LL subband.
//
// The LL band is tiled into square cells (5x5 by default). Inside each cell
// the 3x3 neighbourhood around the centre is visited in the fixed order
//
//   centre, W, NW, N, NE, E, SE, S, SW
//
// and at every visited point the first-order derivative along one direction
// (0, 45, 90 or 135 degrees) is thresholded at zero. The nine bits, first
// visited point most significant, form a code in [0, 511]. The cell's feature
// is the mean of its four directional codes divided by 511.

#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "dbcfr/error.hpp"
#include "dbcfr/grid.hpp"

namespace dbcfr {

inline constexpr std::size_t kCellSize = 5;
inline constexpr int kCodeBits = 9;
inline constexpr double kCodeScale = 511.0;

enum class Direction { deg0, deg45, deg90, deg135 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::deg0, Direction::deg45,
                                                         Direction::deg90, Direction::deg135};

inline constexpr int degrees(Direction d) {
  switch (d) {
    case Direction::deg0: return 0;
    case Direction::deg45: return 45;
    case Direction::deg90: return 90;
    case Direction::deg135: return 135;
  }
  return -1;
}

/// One square tile of the LL band.
struct Cell {
  Grid values;
  std::size_t row_index = 0;
  std::size_t col_index = 0;

  std::size_t size() const { return values.width(); }
};

struct DirectionalCode {
  Direction direction = Direction::deg0;
  std::array<std::uint8_t, kCodeBits> bits{};  // most significant first
  unsigned decimal = 0;
};

/// Per-cell averaged codes, scaled into [0, 1].
struct FeatureVector {
  std::vector<double> coeffs;
  double scale = kCodeScale;

  std::size_t size() const { return coeffs.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Non-overlapping `cell` x `cell` tiles in row-major order. The grid must be
/// square with a side that is a multiple of `cell`; by default 50x50 into 100
/// tiles.
inline std::vector<Cell> partition_cells(const Grid& ll, std::size_t cell = kCellSize,
                                         std::size_t expected_side = 50) {
  if (ll.width() != expected_side || ll.height() != expected_side) {
    throw ShapeError("LL band must be " + std::to_string(expected_side) + "x" +
                     std::to_string(expected_side) + ", got " + std::to_string(ll.width()) +
                     "x" + std::to_string(ll.height()));
  }
  if (cell == 0 || expected_side % cell != 0) {
    throw ShapeError("cell size " + std::to_string(cell) + " does not tile side " +
                     std::to_string(expected_side));
  }
  const std::size_t per_side = expected_side / cell;
  std::vector<Cell> cells;
  cells.reserve(per_side * per_side);
  for (std::size_t cr = 0; cr < per_side; ++cr) {
    for (std::size_t cc = 0; cc < per_side; ++cc) {
      Grid tile(cell, cell);
      for (std::size_t r = 0; r < cell; ++r) {
        for (std::size_t c = 0; c < cell; ++c) tile(r, c) = ll(cr * cell + r, cc * cell + c);
      }
      cells.push_back(Cell{std::move(tile), cr, cc});
    }
  }
  return cells;
}

/// Row/column offset of the neighbour a derivative along `dir` compares against.
inline constexpr std::pair<int, int> neighbour_offset(Direction dir, int d) {
  switch (dir) {
    case Direction::deg0: return {0, -d};
    case Direction::deg45: return {-d, d};
    case Direction::deg90: return {-d, 0};
    case Direction::deg135: return {-d, -d};
  }
  return {0, 0};
}

/// I(i, j) minus its neighbour at distance d along `dir` (row index grows downward).
inline double directional_derivative(const Cell& cell, Direction dir, int d, int i, int j) {
  const int n = static_cast<int>(cell.size());
  const auto [di, dj] = neighbour_offset(dir, d);
  const int ni = i + di, nj = j + dj;
  if (d < 1 || i < 0 || j < 0 || i >= n || j >= n || ni < 0 || nj < 0 || ni >= n || nj >= n) {
    throw BoundsError("derivative at (" + std::to_string(i) + "," + std::to_string(j) + ") along " +
                      std::to_string(degrees(dir)) + " deg with d=" + std::to_string(d) +
                      " leaves the cell");
  }
  const auto at = [&](int r, int c) {
    return cell.values(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  return at(i, j) - at(ni, nj);
}

inline constexpr std::uint8_t binarize_derivative(double v) { return v > 0.0 ? 1 : 0; }

/// Visiting order of the 3x3 neighbourhood, as (row, col) multiples of d.
inline constexpr std::array<std::pair<int, int>, kCodeBits> kCodeOrder = {{
    {0, 0}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}}};

/// Nine-bit code of `cell` along `dir`, centred on the middle of the cell.
inline DirectionalCode cell_code(const Cell& cell, Direction dir, int d = 1) {
  const int centre = static_cast<int>(cell.size()) / 2;
  DirectionalCode code;
  code.direction = dir;
  for (std::size_t k = 0; k < kCodeOrder.size(); ++k) {
    const int i = centre + kCodeOrder[k].first * d;
    const int j = centre + kCodeOrder[k].second * d;
    code.bits[k] = binarize_derivative(directional_derivative(cell, dir, d, i, j));
    code.decimal = (code.decimal << 1) | code.bits[k];
  }
  return code;
}

inline double cell_coefficient(const Cell& cell, int d = 1) {
  unsigned sum = 0;
  for (Direction dir : kDirections) sum += cell_code(cell, dir, d).decimal;
  return static_cast<double>(sum) / static_cast<double>(kDirections.size()) / kCodeScale;
}

/// Feature vector of an LL band of side `side`, one coefficient per cell.
inline FeatureVector extract_features(const Grid& ll, int d = 1, std::size_t cell = kCellSize,
                                      std::size_t side = 50) {
  FeatureVector fv;
  const auto cells = partition_cells(ll, cell, side);
  fv.coeffs.reserve(cells.size());
  for (const Cell& c : cells) fv.coeffs.push_back(cell_coefficient(c, d));
  return fv;
}

// Text form: shortest round-trip decimal per coefficient, comma separated.

inline std::string format_real(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

inline double parse_real(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw GalleryError("bad number '" + std::string(s) + "'");
  }
  return v;
}

inline std::string serialize(const FeatureVector& fv) {
  std::string out;
  for (std::size_t i = 0; i < fv.coeffs.size(); ++i) {
    if (i) out.push_back(',');
    out += format_real(fv.coeffs[i]);
  }
  return out;
}

inline FeatureVector parse_feature_vector(std::string_view line) {
  FeatureVector fv;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fv.coeffs.push_back(parse_real(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fv;
}

}  // namespace dbcfr
