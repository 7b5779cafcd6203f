#include "ppbench/text_util.hpp"

#include <doctest.h>

using namespace ppbench;

TEST_CASE("dotted id grammar accepts 2 to 4 fields") {
    CHECK(is_dotted_id("3.2"));
    CHECK(is_dotted_id("3.2.1"));
    CHECK(is_dotted_id("3.2.1.4"));
    CHECK_FALSE(is_dotted_id("3"));
    CHECK_FALSE(is_dotted_id("1.2.3.4.5"));
    CHECK_FALSE(is_dotted_id("3.2."));
    CHECK_FALSE(is_dotted_id(".3.2"));
    CHECK_FALSE(is_dotted_id("3..2"));
    CHECK_FALSE(is_dotted_id("a.2"));
}

TEST_CASE("scan is maximal munch on token boundaries") {
    const auto hits = scan_dotted_ids("see 3.2.1 and 3.2.11, not a3.2.1 or 9.9.9.9.9");
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].id == "3.2.1");
    CHECK(hits[1].id == "3.2.11");

    // "3.2.1" must not be found inside "3.2.11" or "1.3.2.1"
    CHECK(scan_dotted_ids("1.3.2.1").at(0).id == "1.3.2.1");
    CHECK(scan_dotted_ids("x 3.2.1.").at(0).id == "3.2.1");
    CHECK(scan_dotted_ids("range 3.2.1-3.2.4").size() == 2);
    CHECK(scan_dotted_ids("version v1.2.3 shipped").empty());
    CHECK(scan_dotted_ids("(2.1.2)").at(0).id == "2.1.2");
}

TEST_CASE("five-field runs are rejected whole") {
    CHECK(scan_dotted_ids("1.2.3.4.5").empty());
    CHECK(scan_dotted_ids("lots 1.2.3.4.5 here").empty());
}

TEST_CASE("contains_token respects boundaries") {
    CHECK(contains_token("see 3.2.1 now", "3.2.1"));
    CHECK_FALSE(contains_token("see 3.2.11 now", "3.2.1"));
    CHECK_FALSE(contains_token("see 1.3.2.1 now", "3.2.1"));
    CHECK(contains_token("(3.2.1)", "3.2.1"));
}

TEST_CASE("url spans cover scheme through path") {
    const std::string text = "docs at http://example.org/a/b.html and ftp://files.example.net.";
    const auto spans = scan_url_spans(text);
    REQUIRE(spans.size() == 2);
    CHECK(text.substr(spans[0].first, spans[0].second - spans[0].first) ==
          "http://example.org/a/b.html");
    CHECK(text.substr(spans[1].first, spans[1].second - spans[1].first) ==
          "ftp://files.example.net");
    CHECK(scan_url_spans("no links here").empty());
}

TEST_CASE("whitespace helpers") {
    CHECK(normalize_ws("  a\t b\n\nc  ") == "a b c");
    CHECK(normalize_ws("   \n ") == "");
    CHECK(collapse_spaces("a  b\t\tc  \nd  e") == "a b c\nd e");
    const auto lines = split_lines("a\nb\n");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "a");
    CHECK(lines[1] == "b");
    CHECK(split_lines("").empty());
}

TEST_CASE("fnv1a64 is stable") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 12638187200555641996ULL);
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xdeadbeefULL) == "00000000deadbeef");
}
