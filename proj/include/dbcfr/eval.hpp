// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// Identification experiment: genuine and impostor passes over a gallery,
// threshold sweep of FRR / FAR / RR and the equal-error crossing.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dbcfr/dbc.hpp"
#include "dbcfr/error.hpp"
#include "dbcfr/matcher.hpp"

namespace dbcfr {

struct Probe {
  std::string subject_id;
  std::string image_id;
  FeatureVector features;
};

/// Extracted probes: genuine ones belong to enrolled subjects, impostors to
/// subjects with no gallery entry.
struct ProbeSet {
  std::vector<Probe> genuine;
  std::vector<Probe> impostor;
};

struct GenuineCounts {
  std::size_t matches = 0;
  std::size_t mismatches = 0;
  std::size_t rejections = 0;

  std::size_t total() const { return matches + mismatches + rejections; }
  double frr() const { return static_cast<double>(rejections) / static_cast<double>(total()); }
  double rr_percent() const { return 100.0 * static_cast<double>(matches) / static_cast<double>(total()); }
  double mismatch_rate() const { return static_cast<double>(mismatches) / static_cast<double>(total()); }

  friend bool operator==(const GenuineCounts&, const GenuineCounts&) = default;
};

/// Best match of one probe, independent of any threshold.
struct ProbeOutcome {
  std::string probe_subject;
  std::string best_subject;
  double distance = 0.0;
};

namespace detail {

inline std::vector<ProbeOutcome> best_matches(const std::vector<Probe>& probes, const Gallery& g) {
  std::vector<ProbeOutcome> out;
  out.reserve(probes.size());
  for (const auto& p : probes) {
    const auto m = identify(p.features, g, 0.0);
    out.push_back({p.subject_id, m.best_subject, m.distance});
  }
  return out;
}

inline GenuineCounts tally_genuine(const std::vector<ProbeOutcome>& outcomes, double threshold) {
  GenuineCounts c;
  for (const auto& o : outcomes) {
    if (o.distance > threshold) {
      ++c.rejections;
    } else if (o.best_subject == o.probe_subject) {
      ++c.matches;
    } else {
      ++c.mismatches;
    }
  }
  return c;
}

inline double tally_far(const std::vector<ProbeOutcome>& outcomes, double threshold) {
  std::size_t accepted = 0;
  for (const auto& o : outcomes) accepted += o.distance <= threshold ? 1 : 0;
  return static_cast<double>(accepted) / static_cast<double>(outcomes.size());
}

}  // namespace detail

/// Three-way accounting of the genuine probes: rejected when the nearest
/// distance exceeds the threshold, otherwise matched or mismatched by identity.
inline GenuineCounts run_genuine_pass(const ProbeSet& probes, const Gallery& gallery, double threshold) {
  if (probes.genuine.empty()) throw EvalError("no genuine probes");
  return detail::tally_genuine(detail::best_matches(probes.genuine, gallery), threshold);
}

/// Fraction of impostor probes whose nearest distance is within the threshold.
inline double run_impostor_pass(const ProbeSet& probes, const Gallery& gallery, double threshold) {
  if (probes.impostor.empty()) throw EvalError("no impostor probes");
  return detail::tally_far(detail::best_matches(probes.impostor, gallery), threshold);
}

struct SweepRow {
  double threshold = 0.0;
  double frr = 0.0;
  double far = 0.0;
  double rr_percent = 0.0;
  GenuineCounts genuine;
};

struct EqualErrorPoint {
  double eer = 0.0;
  double threshold = 0.0;
};

struct EvalReport {
  std::vector<SweepRow> rows;
  std::optional<EqualErrorPoint> eer;  // empty when the curves never cross
  std::size_t genuine_probes = 0;
  std::size_t impostor_probes = 0;
  std::size_t gallery_size = 0;
  double max_distance = 0.0;  // largest nearest-neighbour distance over all probes
};

/// Locates the first sample where FRR - FAR changes sign (or touches zero)
/// and interpolates both curves linearly between the bracketing thresholds.
inline std::optional<EqualErrorPoint> equal_error_point(const std::vector<double>& thresholds,
                                                        const std::vector<double>& frr,
                                                        const std::vector<double>& far) {
  if (thresholds.size() != frr.size() || thresholds.size() != far.size()) {
    throw ShapeError("threshold, FRR and FAR sequences differ in length");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double d0 = frr[i] - far[i];
    if (d0 == 0.0) return EqualErrorPoint{frr[i], thresholds[i]};
    if (i + 1 == thresholds.size()) break;
    const double d1 = frr[i + 1] - far[i + 1];
    if ((d0 > 0.0) != (d1 > 0.0) && d1 != 0.0) {
      const double s = d0 / (d0 - d1);
      return EqualErrorPoint{frr[i] + s * (frr[i + 1] - frr[i]),
                             thresholds[i] + s * (thresholds[i + 1] - thresholds[i])};
    }
  }
  return std::nullopt;
}

/// One row per threshold plus the equal-error point. Thresholds must be
/// strictly increasing.
inline EvalReport sweep(const ProbeSet& probes, const Gallery& gallery,
                        const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw EvalError("empty threshold list");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) throw EvalError("thresholds must be strictly increasing");
  }
  if (probes.genuine.empty()) throw EvalError("no genuine probes");
  if (probes.impostor.empty()) throw EvalError("no impostor probes");

  const auto genuine = detail::best_matches(probes.genuine, gallery);
  const auto impostor = detail::best_matches(probes.impostor, gallery);

  EvalReport report;
  report.genuine_probes = genuine.size();
  report.impostor_probes = impostor.size();
  report.gallery_size = gallery.size();
  for (const auto* set : {&genuine, &impostor}) {
    for (const auto& o : *set) report.max_distance = std::max(report.max_distance, o.distance);
  }

  std::vector<double> frr, far;
  for (double t : thresholds) {
    SweepRow row;
    row.threshold = t;
    row.genuine = detail::tally_genuine(genuine, t);
    row.frr = row.genuine.frr();
    row.rr_percent = row.genuine.rr_percent();
    row.far = detail::tally_far(impostor, t);
    frr.push_back(row.frr);
    far.push_back(row.far);
    report.rows.push_back(row);
  }
  report.eer = equal_error_point(thresholds, frr, far);
  return report;
}

/// start, start + step, ... up to and including `stop` (with a small slack
/// for round-off in the count).
inline std::vector<double> threshold_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start) || start < 0.0) {
    throw EvalError("threshold grid needs 0 <= start <= stop and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// CSV: `threshold,frr,far,rr_percent` rows followed by an `# eer=` comment.
inline void write_report_csv(const EvalReport& r, std::ostream& out) {
  out << "threshold,frr,far,rr_percent\n";
  for (const auto& row : r.rows) {
    out << format_number(row.threshold) << ',' << format_number(row.frr) << ','
        << format_number(row.far) << ',' << format_number(row.rr_percent) << '\n';
  }
  if (r.eer) {
    out << "# eer=" << format_number(r.eer->eer) << " at threshold=" << format_number(r.eer->threshold)
        << '\n';
  } else {
    out << "# warning: FRR and FAR do not cross within the threshold grid\n";
    out << "# eer=nan at threshold=nan\n";
  }
}

inline void write_report_csv(const EvalReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report " + path.string());
  write_report_csv(r, out);
  if (!out) throw IoError("write failed for report " + path.string());
}

/// Two-column `threshold value` files for gnuplot: `<prefix>_frr.dat` and `<prefix>_far.dat`.
inline void write_plot_data(const EvalReport& r, const std::filesystem::path& prefix) {
  const auto write = [&](const std::string& suffix, auto field) {
    const std::filesystem::path p = prefix.string() + suffix;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write plot data " + p.string());
    out << "# threshold " << suffix.substr(1, 3) << '\n';
    for (const auto& row : r.rows) out << format_number(row.threshold) << ' ' << format_number(field(row)) << '\n';
  };
  write("_frr.dat", [](const SweepRow& row) { return row.frr; });
  write("_far.dat", [](const SweepRow& row) { return row.far; });
}

}  // namespace dbcfr
