#include "ocreval/synth/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <optional>
#include <mutex>
#include <thread>

#include "ocreval/synth/png_io.hpp"

namespace ocreval::synth {

namespace fs = std::filesystem;

namespace {

std::string image_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "line_%06zu.png", index);
  return buf;
}

struct Outcome {
  std::optional<ManifestEntry> entry;
  std::optional<ManifestFailure> failure;
};

}  // namespace

std::string escape_tsv(const std::string& field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

Manifest generate_dataset(const std::vector<SynthSpec>& specs, const GlyphSource& glyphs,
                          const fs::path& out_dir, const DatasetOptions& options) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<Outcome> outcomes(specs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> io_failed{false};
  std::string io_message;
  std::mutex io_mutex;

  auto worker = [&] {
    for (std::size_t k = next++; k < specs.size(); k = next++) {
      const SynthSpec& spec = specs[k];
      const std::string digest = spec_digest(spec);
      try {
        const GrayImage image = render_line(spec, glyphs, options.render);
        const std::string name = image_name(k);
        write_png(image, out_dir / name);
        outcomes[k].entry = ManifestEntry{name, spec.text, digest};
      } catch (const IoError& e) {
        std::lock_guard lock(io_mutex);
        if (!io_failed.exchange(true)) io_message = e.what();
      } catch (const Error& e) {
        outcomes[k].failure = ManifestFailure{k, digest, e.what()};
      }
    }
  };

  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(specs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  if (io_failed) throw IoError(io_message);

  Manifest manifest;
  for (auto& o : outcomes) {
    if (o.entry) manifest.entries.push_back(std::move(*o.entry));
    if (o.failure) manifest.failures.push_back(std::move(*o.failure));
  }

  std::ofstream tsv(out_dir / "manifest.tsv", std::ios::binary);
  std::ofstream failed(out_dir / "failures.tsv", std::ios::binary);
  if (!tsv || !failed) throw IoError("cannot write manifest files in " + out_dir.string());
  for (const auto& e : manifest.entries) {
    tsv << escape_tsv(e.image_path) << '\t' << escape_tsv(e.text) << '\t' << e.spec_digest << '\n';
  }
  for (const auto& f : manifest.failures) {
    failed << f.spec_index << '\t' << f.spec_digest << '\t' << escape_tsv(f.error) << '\n';
  }
  if (!tsv || !failed) throw IoError("write failed in " + out_dir.string());
  return manifest;
}

}  // namespace ocreval::synth
