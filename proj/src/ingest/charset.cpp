#include "ocreval/ingest/charset.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ocreval/core/errors.hpp"
#include "ocreval/ingest/unicode.hpp"

namespace ocreval::ingest {

Charset::Charset(std::string name, std::u32string_view members)
    : name_(std::move(name)), members_(members.begin(), members.end()) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Charset::contains(char32_t c) const {
  return std::binary_search(members_.begin(), members_.end(), c);
}

Charset builtin_charset(std::string_view name) {
  if (name == "english95" || name == "english95_space") {
    std::u32string printable;
    for (char32_t c = 0x20; c <= 0x7E; ++c) printable.push_back(c);
    return Charset(std::string(name), printable);
  }
  throw UnknownCharset("unknown charset '" + std::string(name) +
                       "' (known: english95, english95_space)");
}

Charset load_charset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open charset file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("members") || !j["members"].is_string()) {
    throw ParseError(path.string() +
                     ": charset file needs a string field 'members'");
  }
  std::string name = j.value("name", path.stem().string());
  return Charset(std::move(name), to_u32(j["members"].get<std::string>()));
}

std::optional<Charset> resolve_charset(std::string_view selector) {
  if (selector.empty() || selector == "none") return std::nullopt;
  if (selector == "english95" || selector == "english95_space") {
    return builtin_charset(selector);
  }
  const std::filesystem::path path{std::string(selector)};
  if (std::filesystem::exists(path)) return load_charset(path);
  throw UnknownCharset("'" + std::string(selector) +
                       "' is neither a built-in charset nor a file");
}

}  // namespace ocreval::ingest
