#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghostsim/baseline.hpp"
#include "ghostsim/config.hpp"
#include "ghostsim/errors.hpp"
#include "ghostsim/ghost.hpp"
#include "ghostsim/noise.hpp"
#include "ghostsim/pgm.hpp"

namespace ghostsim {

namespace scenario_detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// 1D exports: CSV of (coordinate, value) in full round-trip precision.
inline void write_csv(const std::filesystem::path& path, const GridGeometry& grid,
                      const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "coordinate,value\n";
  for (int i = 0; i < grid.n; ++i)
    out << fmt17(grid.coord(i)) << "," << fmt17(values[std::size_t(i)]) << "\n";
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

// 2D exports: 16-bit PGM, linear map recorded in a sidecar JSON.
inline void write_pgm16_with_sidecar(const std::filesystem::path& path,
                                     const GridGeometry& grid,
                                     const std::vector<double>& values) {
  double lo = 0, hi = 0;
  const PgmImage img =
      quantize_scalar_map(values, grid.n, grid.dims == 2 ? grid.n : 1, lo, hi);
  write_pgm(path, img);
  nlohmann::ordered_json side;
  side["schema"] = 1;
  side["file"] = path.filename().string();
  side["min"] = lo;
  side["max"] = hi;
  side["maxval"] = 65535;
  side["extent"] = grid.extent;
  side["samples"] = grid.n;
  side["dims"] = grid.dims;
  std::ofstream out(path.string() + ".json", std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + ".json' for writing");
  out << side.dump(2) << "\n";
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace scenario_detail

struct RunSummary {
  std::vector<std::string> files;
  std::map<std::string, std::map<std::string, double>> rms_matrix;
  std::map<std::string, ImageMetrics> metrics;
  std::map<std::string, std::vector<std::string>> warnings;
};

// Build the shared scene and execute the requested engines; all file writes
// happen here, sequentially, so outputs do not depend on the worker count.
inline RunSummary run_scenario(const ScenarioConfig& sc, bool quiet = true) {
  namespace fs = std::filesystem;
  using scenario_detail::fmt17;
  const GridGeometry grid = make_grid(sc.dims, sc.samples, sc.extent);
  const OpticalLayout layout =
      sc.focal_length ? make_layout(sc.wavelength, sc.z1, sc.z2, *sc.focal_length)
                      : make_layout(sc.wavelength, sc.z1, sc.z2);
  PhaseMap phi = synthesize_phase(sc.aberration, grid);
  if (sc.parity_filter != ParityFilter::none) {
    ParityParts parts = decompose_parity(phi);
    phi = sc.parity_filter == ParityFilter::even ? std::move(parts.even) : std::move(parts.odd);
  }
  const ObjectMask object = sc.object_pgm.empty()
                                ? standard_object(sc.object_name, grid, sc.object_offset)
                                : load_mask_pgm(sc.object_pgm, grid);
  require_mask_bound(object);

  std::error_code ec;
  fs::create_directories(sc.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + sc.out_dir + "'");

  RunSummary summary;
  std::map<std::string, CoincidenceImage> images;
  for (EngineKind kind : sc.engines) {
    CoincidenceImage image{grid, {}, false, Provenance::fast_path, {}};
    switch (kind) {
      case EngineKind::ghost_fast:
        image = ghost_fast(layout, object, phi);
        break;
      case EngineKind::ghost_oracle: {
        if (grid.dims != 1)
          throw GuardError("ghost-oracle is 1D-only");
        if (grid.n > sc.oracle_max_n)
          throw GuardError("ghost-oracle cost guard: grid samples exceed max_n");
        OracleOptions opts;
        opts.max_n = sc.oracle_max_n;
        opts.source_chirp = sc.oracle_source_chirp;
        opts.threads = sc.threads;
        image = ghost_oracle(layout, object, phi, sc.pump, opts).image;
        break;
      }
      case EngineKind::classical:
        image = classical_ghost(layout, object, phi, sc.n_steer > 0 ? sc.n_steer : grid.n);
        break;
      case EngineKind::baseline:
        image = incoherent_image(layout, object, sc.pump, phi);
        break;
    }
    const std::string name = engine_name(kind);
    if (!quiet) std::printf("engine %-12s done\n", name.c_str());
    images.emplace(name, std::move(image));
  }

  for (const auto& [name, image] : images) {
    fs::path file = fs::path(sc.out_dir) / (name + (grid.dims == 1 ? ".csv" : ".pgm"));
    if (grid.dims == 1)
      scenario_detail::write_csv(file, grid, image.rate);
    else
      scenario_detail::write_pgm16_with_sidecar(file, grid, image.rate);
    summary.files.push_back(file.string());
    summary.metrics[name] = image_metrics(image, image);
    summary.warnings[name] = image.warnings;
    for (const auto& [other_name, other] : images)
      summary.rms_matrix[name][other_name] = image_metrics(image, other).rms_error;
  }

  nlohmann::ordered_json metrics;
  metrics["schema"] = 1;
  metrics["seed"] = sc.seed;
  nlohmann::ordered_json engines = nlohmann::ordered_json::object();
  for (const auto& [name, image] : images) {
    nlohmann::ordered_json rec;
    rec["file"] = (name + (grid.dims == 1 ? ".csv" : ".pgm"));
    rec["peak_location"] = summary.metrics[name].peak_location;
    rec["kernel_fwhm"] = summary.metrics[name].kernel_fwhm;
    rec["warnings"] = summary.warnings[name];
    engines[name] = rec;
  }
  metrics["engines"] = engines;
  nlohmann::ordered_json matrix = nlohmann::ordered_json::object();
  for (const auto& [name, row] : summary.rms_matrix) {
    nlohmann::ordered_json jrow = nlohmann::ordered_json::object();
    for (const auto& [other, v] : row) jrow[other] = v;
    matrix[name] = jrow;
  }
  metrics["rms_error_matrix"] = matrix;
  scenario_detail::write_text(fs::path(sc.out_dir) / "metrics.json", metrics.dump(2) + "\n");
  summary.files.push_back((fs::path(sc.out_dir) / "metrics.json").string());

  std::string text;
  text += "scenario summary\n";
  text += "  grid: dims=" + std::to_string(grid.dims) + " n=" + std::to_string(grid.n) +
          " extent=" + fmt17(grid.extent) + "\n";
  text += "  layout: wavelength=" + fmt17(layout.wavelength) + " z1=" + fmt17(layout.z1) +
          " z2=" + fmt17(layout.z2) + " f=" + fmt17(layout.f) + "\n";
  for (const auto& [name, image] : images) {
    const ImageMetrics& m = summary.metrics.at(name);
    text += "  " + name + ": peak_x=" + fmt17(m.peak_location[0]) +
            " fwhm=" + fmt17(m.kernel_fwhm) + "\n";
    for (const std::string& w : image.warnings) text += "    warning: " + w + "\n";
  }
  text += "  rms_error matrix (peak-normalized):\n";
  for (const auto& [name, row] : summary.rms_matrix)
    for (const auto& [other, v] : row)
      if (name < other) text += "    " + name + " vs " + other + ": " + fmt17(v) + "\n";
  scenario_detail::write_text(fs::path(sc.out_dir) / "summary.txt", text);
  summary.files.push_back((fs::path(sc.out_dir) / "summary.txt").string());
  return summary;
}

struct DecomposeSummary {
  std::string even_file;
  std::string odd_file;
  double reconstruction_error = 0;
};

// Parity-split the configured aberration and export both parts as 16-bit
// PGMs with sidecars, plus the reconstruction residual.
inline DecomposeSummary decompose_scenario(const ScenarioConfig& sc) {
  namespace fs = std::filesystem;
  const GridGeometry grid = make_grid(sc.dims, sc.samples, sc.extent);
  const PhaseMap phi = synthesize_phase(sc.aberration, grid);
  const ParityParts parts = decompose_parity(phi);

  double err = 0;
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    err = std::max(err,
                   std::abs(parts.even.values[i] + parts.odd.values[i] - phi.values[i]));

  std::error_code ec;
  fs::create_directories(sc.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + sc.out_dir + "'");
  DecomposeSummary out;
  out.even_file = (fs::path(sc.out_dir) / "even.pgm").string();
  out.odd_file = (fs::path(sc.out_dir) / "odd.pgm").string();
  out.reconstruction_error = err;
  scenario_detail::write_pgm16_with_sidecar(out.even_file, grid, parts.even.values);
  scenario_detail::write_pgm16_with_sidecar(out.odd_file, grid, parts.odd.values);

  nlohmann::ordered_json rec;
  rec["schema"] = 1;
  rec["even"] = fs::path(out.even_file).filename().string();
  rec["odd"] = fs::path(out.odd_file).filename().string();
  rec["reconstruction_error"] = err;
  scenario_detail::write_text(fs::path(sc.out_dir) / "decompose.json", rec.dump(2) + "\n");
  return out;
}

// Dark-current cancellation experiment; JSON rungs carry the replicate-mean
// estimates described in the config.
inline std::string noise_scenario(const NoiseRunConfig& nc) {
  namespace fs = std::filesystem;
  const CancellationReport report = cancellation_report(nc.cancellation);
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["seed"] = nc.cancellation.seed;
  doc["replicates"] = nc.cancellation.replicates;
  nlohmann::ordered_json rungs = nlohmann::ordered_json::array();
  for (const CancellationRung& r : report.rungs) {
    nlohmann::ordered_json jr;
    jr["n"] = r.n;
    jr["g2_with_dark"] = r.g2_with_dark;
    jr["g2_without"] = r.g2_without;
    jr["delta"] = r.delta;
    jr["stderr"] = r.std_err;
    rungs.push_back(jr);
  }
  doc["rungs"] = rungs;
  doc["delta_ratios"] = report.delta_ratios;

  std::error_code ec;
  fs::create_directories(nc.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + nc.out_dir + "'");
  const std::string path = (fs::path(nc.out_dir) / "noise_report.json").string();
  scenario_detail::write_text(path, doc.dump(2) + "\n");
  return path;
}

}  // namespace ghostsim
