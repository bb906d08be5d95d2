// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// 8-bit PGM (P5) and PNG reading/writing. Intensities stay real-valued in
// memory and are rounded to 8 bits only when written.

#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "dbcfr/error.hpp"
#include "dbcfr/grid.hpp"
#include "dbcfr/preprocess.hpp"

namespace dbcfr {

namespace detail {

inline std::vector<std::uint8_t> quantize(const GrayImage& img) {
  std::vector<std::uint8_t> out;
  out.reserve(img.values().size());
  for (double v : img.values()) {
    out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))));
  }
  return out;
}

inline std::string lower_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
inline std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

}  // namespace detail

inline GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  if (detail::pgm_token(in) != "P5") throw IoError(path.string() + ": not a binary PGM (P5)");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(detail::pgm_token(in));
    h = std::stoul(detail::pgm_token(in));
    maxval = std::stoul(detail::pgm_token(in));
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PGM header");
  }
  if (w == 0 || h == 0 || maxval == 0 || maxval > 255) {
    throw IoError(path.string() + ": unsupported PGM dimensions or maxval");
  }
  std::vector<char> raw(w * h);
  if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
    throw IoError(path.string() + ": truncated PGM data");
  }
  std::vector<double> px(raw.size());
  const double scale = 255.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    px[i] = std::min(255.0, static_cast<double>(static_cast<unsigned char>(raw[i])) * scale);
  }
  return GrayImage(w, h, std::move(px));
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto bytes = detail::quantize(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

/// Reads a PNG; colour images go through to_gray.
inline GrayImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError(path.string() + ": " + image.message);
  }
  const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError(path.string() + ": " + msg);
  }
  const std::size_t w = image.width, h = image.height;
  if (!colour) {
    return GrayImage(w, h, std::vector<double>(buf.begin(), buf.end()));
  }
  Grid r(w, h), g(w, h), b(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    r.values()[i] = buf[3 * i];
    g.values()[i] = buf[3 * i + 1];
    b.values()[i] = buf[3 * i + 2];
  }
  return to_gray(r, g, b);
}

inline void write_png(const GrayImage& img, const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  const auto bytes = detail::quantize(img);
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError(path.string() + ": " + image.message);
  }
}

inline bool is_supported_image(const std::filesystem::path& path) {
  const auto ext = detail::lower_extension(path);
  return ext == ".pgm" || ext == ".png";
}

/// Dispatches on file extension (.pgm or .png).
inline GrayImage read_image(const std::filesystem::path& path) {
  const auto ext = detail::lower_extension(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  throw IoError(path.string() + ": unsupported image format (expected .png or .pgm)");
}

inline void write_image(const GrayImage& img, const std::filesystem::path& path) {
  const auto ext = detail::lower_extension(path);
  if (ext == ".pgm") return write_pgm(img, path);
  if (ext == ".png") return write_png(img, path);
  throw IoError(path.string() + ": unsupported image format (expected .png or .pgm)");
}

}  // namespace dbcfr
