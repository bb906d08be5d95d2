// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end recognition pipeline: preprocess -> one-level Haar DWT ->
// directional binary codes on the LL band -> gallery / probe features.

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dbcfr/dataset.hpp"
#include "dbcfr/dbc.hpp"
#include "dbcfr/dwt.hpp"
#include "dbcfr/error.hpp"
#include "dbcfr/eval.hpp"
#include "dbcfr/image_io.hpp"
#include "dbcfr/matcher.hpp"
#include "dbcfr/preprocess.hpp"

namespace dbcfr {

struct PipelineConfig {
  std::size_t image_size = kWorkingSize;
  std::size_t cell_size = kCellSize;
  int dbc_distance = 1;

  std::size_t band_size() const { return image_size / 2; }
  std::size_t feature_length() const {
    const std::size_t per_side = band_size() / cell_size;
    return per_side * per_side;
  }
};

/// Rejects configurations whose LL band cannot be tiled by the cell size or
/// whose cells cannot hold the 3x3 code neighbourhood.
inline void validate(const PipelineConfig& c) {
  if (c.image_size < 2 || c.image_size % 2 != 0) {
    throw ConfigError("image size must be even and at least 2, got " + std::to_string(c.image_size));
  }
  if (c.cell_size == 0 || c.band_size() % c.cell_size != 0) {
    throw ConfigError("image_size/2 = " + std::to_string(c.band_size()) +
                      " is not divisible by cell size " + std::to_string(c.cell_size));
  }
  // Codes reach 2d pixels from the cell centre in every direction.
  const std::size_t centre = c.cell_size / 2;
  const auto reach = static_cast<std::size_t>(2 * std::max(c.dbc_distance, 0));
  if (c.dbc_distance < 1 || reach > centre || centre + reach > c.cell_size - 1) {
    throw ConfigError("DBC distance " + std::to_string(c.dbc_distance) +
                      " does not keep every derivative inside a " + std::to_string(c.cell_size) +
                      "-pixel cell");
  }
}

/// Feature vector of an already decoded image.
inline FeatureVector image_features(const GrayImage& img, const PipelineConfig& c = {}) {
  const GrayImage face = preprocess(img, c.image_size);
  const SubbandSet bands = haar_dwt2(face.grid());
  return extract_features(bands.ll, c.dbc_distance, c.cell_size, c.band_size());
}

inline FeatureVector file_features(const std::filesystem::path& path, const PipelineConfig& c = {}) {
  return image_features(read_image(path), c);
}

struct SkippedImage {
  std::string path;
  std::string reason;
};

/// Extracts features for `refs` in order. Images that fail to load or
/// preprocess are recorded in `skipped` and left out.
inline std::vector<Probe> extract_refs(const DatasetManifest& m, const std::vector<ImageRef>& refs,
                                       const PipelineConfig& c, std::vector<SkippedImage>& skipped) {
  std::vector<Probe> out;
  out.reserve(refs.size());
  for (const auto& ref : refs) {
    try {
      out.push_back({ref.subject_id, ref.image_path, file_features(m.resolve(ref.image_path), c)});
    } catch (const Error& e) {
      skipped.push_back({m.resolve(ref.image_path).string(), e.what()});
    }
  }
  return out;
}

inline Gallery build_gallery(const DatasetManifest& m, const Split& split, const PipelineConfig& c,
                             std::vector<SkippedImage>& skipped) {
  Gallery g;
  for (auto& p : extract_refs(m, split.gallery, c, skipped)) {
    g.add({std::move(p.subject_id), std::move(p.image_id), std::move(p.features)});
  }
  return g;
}

inline ProbeSet build_probes(const DatasetManifest& m, const Split& split, const PipelineConfig& c,
                             std::vector<SkippedImage>& skipped) {
  return {extract_refs(m, split.genuine_probes, c, skipped),
          extract_refs(m, split.impostor_probes, c, skipped)};
}

}  // namespace dbcfr
