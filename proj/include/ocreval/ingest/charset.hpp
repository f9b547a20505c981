#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocreval::ingest {

/// A closed set of recognizable code points. Members are kept sorted and
/// unique; whether space belongs to the set is decided by the members alone.
class Charset {
 public:
  Charset() = default;
  Charset(std::string name, std::u32string_view members);

  const std::string& name() const { return name_; }
  const std::vector<char32_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(char32_t c) const;

  friend bool operator==(const Charset&, const Charset&) = default;

 private:
  std::string name_;
  std::vector<char32_t> members_;
};

/// Built-in sets: "english95" and its alias "english95_space", both the 95
/// printable ASCII characters U+0020..U+007E. Throws UnknownCharset.
Charset builtin_charset(std::string_view name);

/// Reads `{"name": str, "members": str}` where members is a UTF-8 string of
/// every member character.
Charset load_charset(const std::filesystem::path& path);

/// CLI-style selector: "none" -> no filtering, a built-in name, or a path
/// to a charset JSON file.
std::optional<Charset> resolve_charset(std::string_view selector);

}  // namespace ocreval::ingest
