#include "ocreval/ingest/page_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ocreval::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string line_col(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void schema_error(const std::string& source,
                               const std::string& where,
                               const std::string& what) {
  throw ParseError(source + ": " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& source,
                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    schema_error(source, where, std::string("missing required field '") + key + "'");
  }
  return *it;
}

std::string as_string(const json& v, const std::string& source,
                      const std::string& where) {
  if (!v.is_string()) schema_error(source, where, "expected a string");
  return v.get<std::string>();
}

long long as_integer(const json& v, const std::string& source,
                     const std::string& where) {
  if (!v.is_number_integer()) schema_error(source, where, "expected an integer");
  return v.get<long long>();
}

Polygon as_polygon(const json& v, const std::string& source,
                   const std::string& where) {
  if (!v.is_array()) schema_error(source, where, "expected an array of [x, y]");
  Polygon poly;
  poly.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& pt = v[i];
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() ||
        !pt[1].is_number()) {
      schema_error(source, at, "expected [x, y] with numeric coordinates");
    }
    poly.push_back({pt[0].get<double>(), pt[1].get<double>()});
  }
  return poly;
}

int as_dimension(const json& v, const std::string& source,
                 const std::string& where) {
  const long long n = as_integer(v, source, where);
  if (n <= 0 || n > 1'000'000) schema_error(source, where, "expected a positive integer");
  return static_cast<int>(n);
}

PageAnnotation read_text_page(const fs::path& path) {
  PageAnnotation page;
  page.page_id = path.stem().string();
  std::istringstream in(read_file(path));
  std::string raw;
  std::uint32_t index = 0;
  while (std::getline(in, raw)) {
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    TextLine line;
    line.id = std::to_string(index);
    line.order_index = index;
    line.text = raw;
    page.lines.push_back(std::move(line));
    ++index;
  }
  return page;
}

}  // namespace

ValidationError::ValidationError(const std::string& what,
                                 std::vector<Violation> violations)
    : Error(what), violations_(std::move(violations)) {}

PageAnnotation page_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) schema_error(source, "$", "expected a JSON object");
  PageAnnotation page;
  if (auto it = j.find("page_id"); it != j.end()) {
    page.page_id = as_string(*it, source, "page_id");
  }
  if (auto it = j.find("image_ref"); it != j.end() && !it->is_null()) {
    page.image_ref = as_string(*it, source, "image_ref");
  }
  if (auto it = j.find("width"); it != j.end() && !it->is_null()) {
    page.width = as_dimension(*it, source, "width");
  }
  if (auto it = j.find("height"); it != j.end() && !it->is_null()) {
    page.height = as_dimension(*it, source, "height");
  }
  const json& lines = require(j, "lines", source, "$");
  if (!lines.is_array()) schema_error(source, "lines", "expected an array");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = "lines[" + std::to_string(i) + "]";
    const json& lj = lines[i];
    if (!lj.is_object()) schema_error(source, where, "expected an object");
    TextLine line;
    line.id = as_string(require(lj, "id", source, where), source, where + ".id");
    const long long order =
        as_integer(require(lj, "order_index", source, where), source,
                   where + ".order_index");
    if (order < 0 || order > static_cast<long long>(UINT32_MAX)) {
      schema_error(source, where + ".order_index", "expected a non-negative integer");
    }
    line.order_index = static_cast<std::uint32_t>(order);
    line.text =
        as_string(require(lj, "text", source, where), source, where + ".text");
    if (auto it = lj.find("polygon"); it != lj.end() && !it->is_null()) {
      line.polygon = as_polygon(*it, source, where + ".polygon");
    }
    page.lines.push_back(std::move(line));
  }
  return page;
}

json page_to_json(const PageAnnotation& page) {
  json j;
  j["page_id"] = page.page_id;
  if (page.image_ref) j["image_ref"] = *page.image_ref;
  if (page.width) j["width"] = *page.width;
  if (page.height) j["height"] = *page.height;
  json lines = json::array();
  for (const TextLine& line : page.lines) {
    json lj;
    lj["id"] = line.id;
    lj["order_index"] = line.order_index;
    lj["text"] = line.text;
    if (line.polygon) {
      json poly = json::array();
      for (const Point2& p : *line.polygon) poly.push_back({p.x, p.y});
      lj["polygon"] = std::move(poly);
    }
    lines.push_back(std::move(lj));
  }
  j["lines"] = std::move(lines);
  return j;
}

PageAnnotation read_page_file(const fs::path& path) {
  if (path.extension() == ".txt") return read_text_page(path);
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ":" + line_col(text, e.byte) +
                     ": malformed JSON: " + e.what());
  }
  PageAnnotation page = page_from_json(j, path.string());
  if (page.page_id.empty()) page.page_id = path.stem().string();
  return page;
}

Corpus load_corpus(const fs::path& path, PageKind kind) {
  if (!fs::exists(path)) throw IoError("no such file or directory: " + path.string());
  Corpus corpus;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    corpus.name = path.filename().empty() ? path.parent_path().filename().string()
                                          : path.filename().string();
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension();
      if (ext == ".json" || ext == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    corpus.name = path.stem().string();
    files.push_back(path);
  }

  for (const auto& file : files) corpus.pages.push_back(read_page_file(file));

  auto violations = validate_corpus(corpus, kind);
  if (!violations.empty()) {
    std::string msg = path.string() + ": " + std::to_string(violations.size()) +
                      " validation error(s)";
    for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
      msg += "\n  " + describe(violations[i]);
    }
    throw ValidationError(msg, std::move(violations));
  }
  return corpus;
}

void save_page(const PageAnnotation& page, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  out << page_to_json(page).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + file.string());
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& page : corpus.pages) save_page(page, dir / (page.page_id + ".json"));
}

}  // namespace ocreval::ingest
