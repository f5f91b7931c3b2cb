#include <doctest.h>

#include "tabnum/textutil.hpp"

using namespace tabnum;

TEST_CASE("replace_phrases replaces whole phrases only") {
    auto r = replace_phrases("Revenue grew while Revenue Growth slowed",
                             {{"Revenue", "burger"}, {"Revenue Growth", "kite"}});
    CHECK(r.text == "burger grew while kite slowed");
    CHECK(r.count == 2);
}

TEST_CASE("replace_phrases is longest-first") {
    auto r = replace_phrases("Operating Cash Flow", {{"Cash", "a"}, {"Operating Cash Flow", "b"}});
    CHECK(r.text == "b");
}

TEST_CASE("replace_phrases respects word boundaries") {
    auto r = replace_phrases("cashew cash", {{"cash", "x"}});
    CHECK(r.text == "cashew x");
    CHECK(r.count == 1);
}

TEST_CASE("replace_phrases never re-matches inserted text") {
    auto r = replace_phrases("a b", {{"a", "b"}, {"b", "c"}});
    CHECK(r.text == "b c");
}

TEST_CASE("replace_phrases case modes") {
    auto ci = replace_phrases("operating cash flow", {{"Operating Cash Flow", "x"}}, true);
    CHECK(ci.text == "x");
    auto cs = replace_phrases("operating cash flow", {{"Operating Cash Flow", "x"}}, false);
    CHECK(cs.text == "operating cash flow");
}

TEST_CASE("replace_phrases counts repeated occurrences") {
    auto r = replace_phrases("Common Stock plus Common Stock", {{"Common Stock", "ivy"}});
    CHECK(r.text == "ivy plus ivy");
    CHECK(r.count == 2);
}

TEST_CASE("join") {
    CHECK(join({"a", "b", "c"}, ", ") == "a, b, c");
    CHECK(join({}, ", ").empty());
}
