// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dbcfr/error.hpp"
#include "dbcfr/grid.hpp"
#include "dbcfr/image_io.hpp"

namespace dbcfr {

inline constexpr const char* kManifestFile = "manifest.json";

/// One person's images, paths relative to the manifest's source root.
struct SubjectRecord {
  std::string subject_id;
  std::vector<std::string> image_paths;
  bool enrolled = false;

  friend bool operator==(const SubjectRecord&, const SubjectRecord&) = default;
};

struct DatasetManifest {
  std::vector<SubjectRecord> subjects;
  std::filesystem::path source_root;

  std::size_t image_count() const {
    std::size_t n = 0;
    for (const auto& s : subjects) n += s.image_paths.size();
    return n;
  }
  std::filesystem::path resolve(const std::string& rel) const { return source_root / rel; }
};

struct ImageRef {
  std::string subject_id;
  std::string image_path;

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct Split {
  std::vector<ImageRef> gallery;
  std::vector<ImageRef> genuine_probes;
  std::vector<ImageRef> impostor_probes;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Checks id uniqueness, non-empty image lists, the enrolled-needs-two-images
/// rule and (optionally) that each referenced file exists.
inline void validate(const DatasetManifest& m, bool check_files = true) {
  if (m.subjects.empty()) throw ManifestError("no subjects");
  std::set<std::string> ids;
  for (const auto& s : m.subjects) {
    if (s.subject_id.empty()) throw ManifestError("empty subject id");
    if (!ids.insert(s.subject_id).second) throw ManifestError("duplicate subject id " + s.subject_id);
    if (s.image_paths.empty()) throw ManifestError("subject " + s.subject_id + " has no images");
    if (s.enrolled && s.image_paths.size() < 2) {
      throw ManifestError("enrolled subject " + s.subject_id + " needs at least 2 images");
    }
    if (!check_files) continue;
    for (const auto& p : s.image_paths) {
      if (!std::filesystem::is_regular_file(m.resolve(p))) {
        throw ManifestError("subject " + s.subject_id + ": missing image " + m.resolve(p).string());
      }
    }
  }
}

/// Subject-per-directory layout: each subdirectory of `root` is one subject,
/// holding .png/.pgm files taken in lexicographic order. Subjects come out
/// unenrolled; make_split decides enrollment.
inline DatasetManifest load_manifest(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw IoError("dataset root " + root.string() + " does not exist");
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw ManifestError("no subjects");

  DatasetManifest m;
  m.source_root = root;
  for (const auto& dir : dirs) {
    SubjectRecord rec;
    rec.subject_id = dir.filename().string();
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && is_supported_image(e.path())) {
        files.push_back(e.path().filename().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ManifestError("subject " + rec.subject_id + " has no images");
    for (const auto& f : files) rec.image_paths.push_back(rec.subject_id + "/" + f);
    m.subjects.push_back(std::move(rec));
  }
  validate(m);
  return m;
}

inline std::string manifest_to_json(const DatasetManifest& m) {
  nlohmann::ordered_json subjects = nlohmann::ordered_json::array();
  for (const auto& s : m.subjects) {
    nlohmann::ordered_json js;
    js["id"] = s.subject_id;
    js["images"] = s.image_paths;
    js["enrolled"] = s.enrolled;
    subjects.push_back(std::move(js));
  }
  nlohmann::ordered_json doc;
  doc["subjects"] = std::move(subjects);
  return doc.dump(2) + "\n";
}

/// Parses a manifest document; image paths are taken relative to `root`.
inline DatasetManifest manifest_from_json(const std::string& text, const std::filesystem::path& root,
                                          bool check_files = true) {
  DatasetManifest m;
  m.source_root = root;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& js : doc.at("subjects")) {
      SubjectRecord rec;
      rec.subject_id = js.at("id").get<std::string>();
      rec.image_paths = js.at("images").get<std::vector<std::string>>();
      rec.enrolled = js.value("enrolled", false);
      m.subjects.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  }
  validate(m, check_files);
  return m;
}

inline void write_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << manifest_to_json(m);
  if (!out) throw IoError("write failed for manifest " + path.string());
}

inline DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return manifest_from_json(text, path.parent_path());
}

/// A manifest.json file, a directory containing one, or a bare
/// subject-per-directory tree.
inline DatasetManifest load_dataset(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(path)) return read_manifest(path);
  if (fs::is_regular_file(path / kManifestFile)) return read_manifest(path / kManifestFile);
  return load_manifest(path);
}

/// The first `enrolled_count` subjects (manifest order) are enrolled: their
/// first `gallery_per_subject` images go to the gallery and the next one is
/// their genuine probe. Every other subject contributes its first image as an
/// impostor probe.
inline Split make_split(const DatasetManifest& m, std::size_t enrolled_count,
                        std::size_t gallery_per_subject) {
  if (enrolled_count == 0) throw SplitError("enrolled count must be positive");
  if (gallery_per_subject == 0) throw SplitError("gallery images per subject must be positive");
  if (enrolled_count > m.subjects.size()) {
    throw SplitError("enrolled count " + std::to_string(enrolled_count) + " exceeds " +
                     std::to_string(m.subjects.size()) + " subjects");
  }
  Split split;
  for (std::size_t i = 0; i < m.subjects.size(); ++i) {
    const auto& s = m.subjects[i];
    if (s.image_paths.empty()) throw SplitError("subject " + s.subject_id + " has no images");
    if (i < enrolled_count) {
      if (s.image_paths.size() < gallery_per_subject + 1) {
        throw SplitError("subject " + s.subject_id + " has " + std::to_string(s.image_paths.size()) +
                         " images, needs " + std::to_string(gallery_per_subject + 1));
      }
      for (std::size_t k = 0; k < gallery_per_subject; ++k) {
        split.gallery.push_back({s.subject_id, s.image_paths[k]});
      }
      split.genuine_probes.push_back({s.subject_id, s.image_paths[gallery_per_subject]});
    } else {
      split.impostor_probes.push_back({s.subject_id, s.image_paths.front()});
    }
  }
  std::set<std::string> seen;
  for (const auto* list : {&split.gallery, &split.genuine_probes, &split.impostor_probes}) {
    for (const auto& ref : *list) {
      if (!seen.insert(ref.image_path).second) {
        throw SplitError("image " + ref.image_path + " is used more than once");
      }
    }
  }
  return split;
}

/// Copy of `m` with the first `enrolled_count` subjects flagged enrolled.
inline DatasetManifest with_enrollment(DatasetManifest m, std::size_t enrolled_count) {
  for (std::size_t i = 0; i < m.subjects.size(); ++i) m.subjects[i].enrolled = i < enrolled_count;
  return m;
}

// ---------------------------------------------------------------------------
// Synthetic data

struct SynthParams {
  std::uint64_t seed = 1;
  std::size_t n_subjects = 10;
  std::size_t images_per_subject = 14;
  double noise_level = 0.0;  // in [0, 1]
  std::size_t enrolled_count = 0;  // 0 means every subject
  std::size_t width = 128;
  std::size_t height = 128;
};

namespace detail {

// Deterministic uniform and normal draws built directly on mt19937_64 so the
// output does not depend on the standard library's distribution algorithms.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t s0, std::uint64_t s1, std::uint64_t s2)
      : eng_(mix(s0, s1, s2)) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (std::uint64_t v : {a, b, c}) {
      h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h = (h ^ (h >> 31)) * 0xBF58476D1CE4E5B9ull;
    }
    return h;
  }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Blob {
  double x, y, sigma, amplitude;
};

struct Grating {
  double angle, period, phase, amplitude;
};

/// Face-local texture of one subject; coordinates relative to the face centre.
struct FaceModel {
  double rx, ry, base, tilt_x, tilt_y;
  std::vector<Blob> blobs;
  std::vector<Grating> gratings;

  double inside(double x, double y) const { return (x * x) / (rx * rx) + (y * y) / (ry * ry); }

  double intensity(double x, double y) const {
    double v = base + tilt_x * x + tilt_y * y;
    for (const auto& b : blobs) {
      const double dx = x - b.x, dy = y - b.y;
      v += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
    }
    for (const auto& g : gratings) {
      const double t = x * std::cos(g.angle) + y * std::sin(g.angle);
      v += g.amplitude * std::sin(2.0 * std::numbers::pi * t / g.period + g.phase);
    }
    return std::clamp(v, 100.0, 245.0);
  }
};

inline constexpr double kBackground = 20.0;

inline FaceModel make_face(std::uint64_t seed, std::size_t subject, std::size_t w, std::size_t h) {
  SynthRng rng(seed, subject, 0);
  FaceModel f;
  f.rx = static_cast<double>(w) * rng.uniform(0.30, 0.36);
  f.ry = static_cast<double>(h) * rng.uniform(0.38, 0.44);
  f.base = rng.uniform(150.0, 185.0);
  f.tilt_x = rng.uniform(-0.4, 0.4);
  f.tilt_y = rng.uniform(-0.4, 0.4);
  for (int i = 0; i < 10; ++i) {
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(rng.uniform());
    f.blobs.push_back({0.8 * f.rx * r * std::cos(a), 0.8 * f.ry * r * std::sin(a),
                       rng.uniform(3.0, 10.0), rng.uniform(-45.0, 45.0)});
  }
  for (int i = 0; i < 3; ++i) {
    f.gratings.push_back({rng.uniform(0.0, std::numbers::pi), rng.uniform(8.0, 20.0),
                          rng.uniform(0.0, 2.0 * std::numbers::pi), rng.uniform(8.0, 18.0)});
  }
  return f;
}

inline GrayImage render_face(const FaceModel& f, std::size_t w, std::size_t h, double dx, double dy,
                             double noise_sigma, SynthRng& rng) {
  Grid g(w, h);
  const double cx = static_cast<double>(w) / 2.0 + dx;
  const double cy = static_cast<double>(h) / 2.0 + dy;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double x = static_cast<double>(c) + 0.5 - cx;
      const double y = static_cast<double>(r) + 0.5 - cy;
      double v = f.inside(x, y) <= 1.0 ? f.intensity(x, y) : kBackground;
      if (noise_sigma > 0.0) v += noise_sigma * rng.normal();
      g(r, c) = std::round(std::clamp(v, 0.0, 255.0));
    }
  }
  return GrayImage(std::move(g));
}

inline std::string zero_pad(std::size_t v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace detail

inline constexpr double kSynthMaxNoiseSigma = 40.0;
inline constexpr double kSynthMaxShift = 12.0;

/// Renders one synthetic image in memory (image index 0-based).
inline GrayImage synth_image(const SynthParams& p, std::size_t subject, std::size_t image) {
  const auto face = detail::make_face(p.seed, subject, p.width, p.height);
  detail::SynthRng rng(p.seed, subject, image + 1);
  const double shift = kSynthMaxShift * p.noise_level;
  const double dx = std::round(rng.uniform(-shift, shift));
  const double dy = std::round(rng.uniform(-shift, shift));
  return detail::render_face(face, p.width, p.height, dx, dy, kSynthMaxNoiseSigma * p.noise_level, rng);
}

/// Writes a deterministic dataset under `out`: one directory per subject
/// (`s001`, ...), PGM images `00.pgm`, ... and a manifest.json. Each subject
/// is a bright elliptical face textured with seeded blobs and oriented
/// gratings on a dark background; its images differ by integer shifts and
/// additive Gaussian noise, both proportional to `noise_level`.
inline DatasetManifest synth_dataset(const SynthParams& p, const std::filesystem::path& out) {
  namespace fs = std::filesystem;
  if (p.n_subjects == 0 || p.images_per_subject == 0) {
    throw ManifestError("synthetic dataset needs at least one subject and one image");
  }
  if (!(p.noise_level >= 0.0 && p.noise_level <= 1.0)) {
    throw ManifestError("noise level must lie in [0, 1]");
  }
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());

  const std::size_t enrolled = p.enrolled_count == 0 ? p.n_subjects : p.enrolled_count;
  DatasetManifest m;
  m.source_root = out;
  for (std::size_t s = 0; s < p.n_subjects; ++s) {
    SubjectRecord rec;
    rec.subject_id = "s" + detail::zero_pad(s + 1, 3);
    rec.enrolled = s < enrolled && p.images_per_subject >= 2;
    fs::create_directories(out / rec.subject_id, ec);
    if (ec) throw IoError("cannot create " + (out / rec.subject_id).string());
    for (std::size_t k = 0; k < p.images_per_subject; ++k) {
      const std::string rel = rec.subject_id + "/" + detail::zero_pad(k, 2) + ".pgm";
      write_pgm(synth_image(p, s, k), out / rel);
      rec.image_paths.push_back(rel);
    }
    m.subjects.push_back(std::move(rec));
  }
  write_manifest(m, out / kManifestFile);
  return m;
}

}  // namespace dbcfr
