#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocreval/core/model.hpp"

namespace ocreval::ingest {

/// A file parsed but its page(s) broke an invariant.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// JSON page object <-> PageAnnotation. `source` only feeds error messages.
PageAnnotation page_from_json(const nlohmann::json& j,
                              const std::string& source = "<json>");
nlohmann::json page_to_json(const PageAnnotation& page);

/// One page from a `.json` page file or a `.txt` plain-text prediction
/// (one TextLine per physical line, order_index = 0-based line number).
/// A missing page_id defaults to the file stem. Not validated.
PageAnnotation read_page_file(const std::filesystem::path& path);

/// Loads a page file or a directory of `.json`/`.txt` page files (sorted by
/// file name) and validates every page for `kind`.
/// Throws ParseError or ValidationError.
Corpus load_corpus(const std::filesystem::path& path, PageKind kind);

void save_page(const PageAnnotation& page, const std::filesystem::path& file);

/// Writes `<page_id>.json` per page into `dir` (created if needed).
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace ocreval::ingest
