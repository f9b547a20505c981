#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ocreval/synth/render.hpp"

namespace ocreval::synth {

struct ManifestEntry {
  std::string image_path;  // relative to the output directory
  std::string text;
  std::string spec_digest;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ManifestFailure {
  std::size_t spec_index = 0;
  std::string spec_digest;
  std::string error;

  friend bool operator==(const ManifestFailure&, const ManifestFailure&) = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::vector<ManifestFailure> failures;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct DatasetOptions {
  RenderOptions render;
  unsigned jobs = 0;  // 0 = hardware concurrency
};

/// Renders every spec to `<out_dir>/line_<index>.png` and writes
/// `manifest.tsv` (image_path TAB text TAB spec_digest) and `failures.tsv`
/// (index TAB digest TAB error). Specs that fail to render are skipped and
/// reported. Output is identical for any number of jobs. Throws IoError.
Manifest generate_dataset(const std::vector<SynthSpec>& specs, const GlyphSource& glyphs,
                          const std::filesystem::path& out_dir, const DatasetOptions& options = {});

/// Backslash-escapes tab, newline, carriage return and backslash.
std::string escape_tsv(const std::string& field);

}  // namespace ocreval::synth
