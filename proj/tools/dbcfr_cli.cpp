// Copyright 2026 The dbcfr Authors
// SPDX-License-Identifier: Apache-2.0

// dbcfr: synthesize datasets, enroll galleries, identify probes and run the
// FRR/FAR/RR threshold sweep.
//
// Exit codes: 0 success (identify: accepted), 1 identify rejected, 2 error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dbcfr/dbcfr.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

struct Options {
  // synth
  std::uint64_t seed = 1;
  std::size_t subjects = 10;
  std::size_t images = 14;
  double noise = 0.1;
  // split
  std::size_t enrolled = 0;  // 0: derived from the manifest
  std::size_t gallery_per_subject = 13;
  // pipeline
  dbcfr::PipelineConfig pipeline;
  double threshold = 0.6;
  double grid_start = 0.0;
  double grid_stop = 1.2;
  double grid_step = 0.05;
  bool strict = false;
  // paths
  std::string data;
  std::string gallery;
  std::string probe;
  std::string out;
  std::string plot_data;
  std::string dump_subbands;
};

void add_pipeline_options(CLI::App* sub, Options& o) {
  sub->add_option("--image-size", o.pipeline.image_size, "Working resolution (square)")
      ->capture_default_str();
  sub->add_option("--cell-size", o.pipeline.cell_size, "DBC cell side in LL pixels")
      ->capture_default_str();
  sub->add_option("--dbc-distance", o.pipeline.dbc_distance, "Derivative distance d")
      ->capture_default_str();
}

void add_split_options(CLI::App* sub, Options& o) {
  sub->add_option("--data", o.data, "manifest.json, a directory holding one, or subject-per-directory tree")
      ->required();
  sub->add_option("--enrolled", o.enrolled,
                  "Number of enrolled subjects (default: subjects flagged enrolled, else all)");
  sub->add_option("--gallery-per-subject", o.gallery_per_subject, "Gallery images per enrolled subject")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_flag("--strict", o.strict, "Fail if any image cannot be processed");
}

std::size_t enrolled_count(const dbcfr::DatasetManifest& m, std::size_t requested) {
  if (requested != 0) return requested;
  std::size_t n = 0;
  while (n < m.subjects.size() && m.subjects[n].enrolled) ++n;
  return n == 0 ? m.subjects.size() : n;
}

bool report_skipped(const std::vector<dbcfr::SkippedImage>& skipped, bool strict) {
  for (const auto& s : skipped) std::cerr << "skipped " << s.path << ": " << s.reason << '\n';
  if (strict && !skipped.empty()) {
    std::cerr << "error: " << skipped.size() << " image(s) failed under --strict\n";
    return false;
  }
  return true;
}

int cmd_synth(const Options& o) {
  dbcfr::SynthParams p;
  p.seed = o.seed;
  p.n_subjects = o.subjects;
  p.images_per_subject = o.images;
  p.noise_level = o.noise;
  p.enrolled_count = o.enrolled;
  const auto m = dbcfr::synth_dataset(p, o.out);
  std::cout << "wrote " << m.image_count() << " images for " << m.subjects.size() << " subjects to "
            << o.out << '\n';
  return kExitOk;
}

int cmd_enroll(const Options& o) {
  const auto m = dbcfr::load_dataset(o.data);
  const auto split = dbcfr::make_split(m, enrolled_count(m, o.enrolled), o.gallery_per_subject);
  std::vector<dbcfr::SkippedImage> skipped;
  const auto gallery = dbcfr::build_gallery(m, split, o.pipeline, skipped);
  if (!report_skipped(skipped, o.strict)) return kExitError;
  if (gallery.empty()) {
    std::cerr << "error: no gallery images could be processed\n";
    return kExitError;
  }
  dbcfr::write_gallery(gallery, fs::path(o.out));
  std::cout << "gallery: " << gallery.size() << " records written to " << o.out << '\n';
  return kExitOk;
}

void dump_subbands(const dbcfr::GrayImage& img, const Options& o) {
  const auto bands = dbcfr::haar_dwt2(dbcfr::preprocess(img, o.pipeline.image_size).grid());
  fs::create_directories(o.dump_subbands);
  const fs::path dir = o.dump_subbands;
  dbcfr::write_pgm(dbcfr::subband_to_image(bands.ll), dir / "ll.pgm");
  dbcfr::write_pgm(dbcfr::subband_to_image(bands.lh), dir / "lh.pgm");
  dbcfr::write_pgm(dbcfr::subband_to_image(bands.hl), dir / "hl.pgm");
  dbcfr::write_pgm(dbcfr::subband_to_image(bands.hh), dir / "hh.pgm");
}

int cmd_identify(const Options& o) {
  const auto gallery = dbcfr::read_gallery(fs::path(o.gallery));
  const auto img = dbcfr::read_image(o.probe);
  if (!o.dump_subbands.empty()) dump_subbands(img, o);
  const auto m = dbcfr::identify(dbcfr::image_features(img, o.pipeline), gallery, o.threshold);
  std::cout << "subject=" << m.best_subject << " image=" << m.best_image
            << " distance=" << dbcfr::format_number(m.distance)
            << " decision=" << (m.accepted ? "accept" : "reject") << '\n';
  return m.accepted ? kExitOk : kExitReject;
}

int cmd_evaluate(const Options& o) {
  const auto grid = dbcfr::threshold_grid(o.grid_start, o.grid_stop, o.grid_step);
  const auto m = dbcfr::load_dataset(o.data);
  const std::size_t enrolled = enrolled_count(m, o.enrolled);
  if (enrolled >= m.subjects.size()) {
    throw dbcfr::EvalError("all " + std::to_string(m.subjects.size()) +
                           " subjects are enrolled, leaving no impostor probes; pass --enrolled "
                           "with a smaller count");
  }
  const auto split = dbcfr::make_split(m, enrolled, o.gallery_per_subject);
  std::vector<dbcfr::SkippedImage> skipped;
  const auto gallery = dbcfr::build_gallery(m, split, o.pipeline, skipped);
  const auto probes = dbcfr::build_probes(m, split, o.pipeline, skipped);
  if (!report_skipped(skipped, o.strict)) return kExitError;
  if (gallery.empty()) throw dbcfr::EvalError("no gallery images could be processed");

  const auto report = dbcfr::sweep(probes, gallery, grid);
  dbcfr::write_report_csv(report, fs::path(o.out));
  if (!o.plot_data.empty()) dbcfr::write_plot_data(report, o.plot_data);

  std::cout << "gallery=" << report.gallery_size << " genuine=" << report.genuine_probes
            << " impostor=" << report.impostor_probes << " rows=" << report.rows.size() << '\n';
  if (report.eer) {
    std::cout << "eer=" << dbcfr::format_number(report.eer->eer)
              << " at threshold=" << dbcfr::format_number(report.eer->threshold) << '\n';
  } else {
    std::cout << "eer undefined: FRR and FAR do not cross within the grid\n";
  }
  return kExitOk;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads flat `key=value` lines. Blank lines and lines starting with '#' are ignored.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dbcfr::IoError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw dbcfr::ConfigError("config line without '=': " + line);
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

// Splices config entries in front of the command-line flags of the chosen
// subcommand; with take-last semantics the explicit flags win.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  // --config is also declared on each subcommand so CLI11 accepts it.
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      break;
    }
  }
  if (config_path.empty() || args.size() < 2) return args;

  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[1]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config(config_path)) {
    const auto* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1") injected.push_back("--" + key);
    } else {
      injected.push_back("--" + key + "=" + value);
    }
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"DBC face identification on the LL band of a Haar DWT"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", "dbcfr 0.1.0");

  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic dataset");
  synth->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  synth->add_option("--subjects", o.subjects, "Number of subjects")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--images", o.images, "Images per subject")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--noise", o.noise, "Perturbation level in [0, 1]")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--enrolled", o.enrolled, "Subjects flagged enrolled in the manifest (default all)");
  synth->add_option("--out", o.out, "Output directory")->required();

  auto* enroll = app.add_subcommand("enroll", "Extract gallery features and write a gallery file");
  add_split_options(enroll, o);
  add_pipeline_options(enroll, o);
  enroll->add_option("--out", o.out, "Gallery file to write")->required();

  auto* ident = app.add_subcommand("identify", "Match one probe image against a gallery");
  ident->add_option("--gallery", o.gallery, "Gallery file")->required();
  ident->add_option("--probe", o.probe, "Probe image (.png or .pgm)")->required();
  ident->add_option("--threshold", o.threshold, "Acceptance threshold on Euclidean distance")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  ident->add_option("--dump-subbands", o.dump_subbands, "Directory to write the probe's DWT subbands as PGM");
  add_pipeline_options(ident, o);

  auto* evaluate = app.add_subcommand("evaluate", "Threshold sweep of FRR, FAR and RR with EER");
  add_split_options(evaluate, o);
  add_pipeline_options(evaluate, o);
  evaluate->add_option("--grid-start", o.grid_start, "First threshold")->capture_default_str();
  evaluate->add_option("--grid-stop", o.grid_stop, "Last threshold")->capture_default_str();
  evaluate->add_option("--grid-step", o.grid_step, "Threshold step")->capture_default_str();
  evaluate->add_option("--out", o.out, "Report CSV to write (default report.csv)");
  evaluate->add_option("--plot-data", o.plot_data, "Prefix for <prefix>_frr.dat and <prefix>_far.dat");

  std::string config_path;
  for (auto* sub : {synth, enroll, ident, evaluate}) {
    sub->add_option("--config", config_path, "Flat key=value file; command-line flags override it");
  }

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = apply_config(app, std::move(args));
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  } catch (const dbcfr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*enroll || *ident || *evaluate) dbcfr::validate(o.pipeline);
    if (*synth) return cmd_synth(o);
    if (*enroll) return cmd_enroll(o);
    if (*ident) return cmd_identify(o);
    if (*evaluate) {
      if (o.out.empty()) o.out = "report.csv";
      return cmd_evaluate(o);
    }
  } catch (const dbcfr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
