#include <doctest.h>

#include "ocreval/core/digest.hpp"
#include "ocreval/core/model.hpp"
#include "pages.hpp"

using namespace ocreval;

namespace {

std::size_t count_kind(const std::vector<Violation>& vs, ViolationKind kind) {
  return static_cast<std::size_t>(std::count_if(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; }));
}

}  // namespace

TEST_CASE("validate_page flags a shared order_index once") {
  auto page = fixture::stacked_page("p", {"one", "two", "three"});
  page.lines[2].order_index = 3;
  page.lines[1].order_index = 3;
  const auto vs = validate_page(page, PageKind::ground_truth);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].kind == ViolationKind::duplicate_order_index);
  CHECK(std::string(to_string(vs[0].kind)) == "DuplicateOrderIndex");
}

TEST_CASE("valid pages have no violations") {
  CHECK(validate_page(fixture::stacked_page("p", {"a", "b"}), PageKind::ground_truth).empty());
  CHECK(validate_page(fixture::text_page("p", {"a", "b"}), PageKind::prediction).empty());
}

TEST_CASE("ground truth needs geometry, predictions do not") {
  const auto page = fixture::text_page("p", {"a"});
  const auto vs = validate_page(page, PageKind::ground_truth);
  CHECK(count_kind(vs, ViolationKind::missing_polygon) == 1);
  CHECK(count_kind(vs, ViolationKind::missing_dimensions) == 1);
}

TEST_CASE("duplicate ids and broken polygons") {
  auto page = fixture::stacked_page("p", {"a", "b", "c", "d", "e"});
  page.lines[1].id = page.lines[0].id;
  page.lines[2].polygon = Polygon{{0, 0}, {1, 1}};
  page.lines[3].polygon = Polygon{{0, 0}, {10, 10}, {10, 0}, {0, 4}};  // crossing edges
  page.lines[4].polygon = fixture::box(10, 10, 5000, 20);
  const auto vs = validate_page(page, PageKind::ground_truth);
  CHECK(count_kind(vs, ViolationKind::duplicate_id) == 1);
  CHECK(count_kind(vs, ViolationKind::degenerate_polygon) == 1);
  CHECK(count_kind(vs, ViolationKind::self_intersecting_polygon) == 1);
  CHECK(count_kind(vs, ViolationKind::out_of_bounds_vertex) >= 1);
}

TEST_CASE("non-finite coordinates and bad dimensions") {
  auto page = fixture::stacked_page("p", {"a"});
  page.lines[0].polygon->at(1).x = std::numeric_limits<double>::quiet_NaN();
  page.width = 0;
  const auto vs = validate_page(page, PageKind::ground_truth);
  CHECK(count_kind(vs, ViolationKind::non_finite_coordinate) == 1);
  CHECK(count_kind(vs, ViolationKind::non_positive_dimensions) == 1);
}

TEST_CASE("validate_corpus reports duplicate page ids") {
  Corpus c{"c", {fixture::text_page("x", {"a"}), fixture::text_page("x", {"b"})}};
  const auto vs = validate_corpus(c, PageKind::prediction);
  CHECK(count_kind(vs, ViolationKind::duplicate_id) == 1);
}

TEST_CASE("line_centroid is the vertex mean") {
  TextLine square{"s", "", Polygon{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, 0};
  CHECK(line_centroid(square).x == doctest::Approx(1.0));
  CHECK(line_centroid(square).y == doctest::Approx(1.0));
  // (0 + 3 + 0) / 3 and (0 + 0 + 3) / 3
  TextLine triangle{"t", "", Polygon{{0, 0}, {3, 0}, {0, 3}}, 0};
  CHECK(line_centroid(triangle).x == doctest::Approx(1.0));
  CHECK(line_centroid(triangle).y == doctest::Approx(1.0));
  TextLine two{"d", "", Polygon{{0, 0}, {1, 1}}, 0};
  CHECK_THROWS_AS(line_centroid(two), MissingGeometry);
  TextLine none{"n", "", std::nullopt, 0};
  CHECK_THROWS_AS(line_centroid(none), MissingGeometry);
}

TEST_CASE("lines_in_reading_order sorts by order_index") {
  auto page = fixture::text_page("p", {"a", "b", "c"});
  page.lines[0].order_index = 2;
  page.lines[2].order_index = 0;
  const auto lines = lines_in_reading_order(page);
  CHECK(lines[0].text == "c");
  CHECK(lines[1].text == "b");
  CHECK(lines[2].text == "a");
}

TEST_CASE("sha256_hex known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
