// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dbcfr/dbc.hpp"
#include "dbcfr/error.hpp"

namespace dbcfr {

inline constexpr std::string_view kGalleryHeader = "dbcfr-gallery v1";

struct GalleryEntry {
  std::string subject_id;
  std::string image_id;
  FeatureVector features;
};

/// Enrolled feature vectors. (subject, image) pairs are unique and every
/// vector has the same length.
class Gallery {
 public:
  Gallery() = default;

  void add(GalleryEntry e) {
    if (!entries_.empty() && e.features.size() != entries_.front().features.size()) {
      throw GalleryError("feature length " + std::to_string(e.features.size()) +
                         " differs from gallery length " +
                         std::to_string(entries_.front().features.size()));
    }
    if (!keys_.emplace(e.subject_id, e.image_id).second) {
      throw GalleryError("duplicate gallery entry " + e.subject_id + "/" + e.image_id);
    }
    entries_.push_back(std::move(e));
  }

  const std::vector<GalleryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<GalleryEntry> entries_;
  std::set<std::pair<std::string, std::string>> keys_;
};

struct MatchResult {
  std::string best_subject;
  std::string best_image;
  double distance = 0.0;
  bool accepted = false;
  std::size_t index = 0;  // position of the best entry in the gallery
};

inline double euclidean(const FeatureVector& a, const FeatureVector& b) {
  if (a.size() != b.size()) {
    throw ShapeError("feature lengths differ: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a.coeffs[i] - b.coeffs[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

/// Nearest gallery entry by Euclidean distance; the earliest entry wins ties.
/// Accepted when the distance is at most `threshold`.
inline MatchResult identify(const FeatureVector& probe, const Gallery& gallery, double threshold) {
  if (gallery.empty()) throw GalleryError("gallery is empty");
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const double dist = euclidean(probe, gallery.entries()[i].features);
    if (dist < best) {
      best = dist;
      best_idx = i;
    }
  }
  const auto& e = gallery.entries()[best_idx];
  return MatchResult{e.subject_id, e.image_id, best, best <= threshold, best_idx};
}

namespace detail {
inline void check_field(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(",\r\n") != std::string::npos) {
    throw GalleryError(std::string(what) + " '" + s + "' is empty or contains ',' or a newline");
  }
}
}  // namespace detail

inline void write_gallery(const Gallery& gallery, std::ostream& out) {
  out << kGalleryHeader << '\n';
  for (const auto& e : gallery.entries()) {
    detail::check_field(e.subject_id, "subject id");
    detail::check_field(e.image_id, "image id");
    out << e.subject_id << ',' << e.image_id << ',' << serialize(e.features) << '\n';
  }
}

inline void write_gallery(const Gallery& gallery, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write gallery " + path.string());
  write_gallery(gallery, out);
  if (!out) throw IoError("write failed for gallery " + path.string());
}

inline Gallery read_gallery(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kGalleryHeader) {
    throw GalleryError("missing '" + std::string(kGalleryHeader) + "' header");
  }
  Gallery g;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw GalleryError("line " + std::to_string(lineno) + ": expected subject,image,features");
    }
    try {
      g.add(GalleryEntry{line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1),
                         parse_feature_vector(std::string_view(line).substr(c2 + 1))});
    } catch (const GalleryError& e) {
      throw GalleryError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return g;
}

inline Gallery read_gallery(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open gallery " + path.string());
  return read_gallery(in);
}

}  // namespace dbcfr
