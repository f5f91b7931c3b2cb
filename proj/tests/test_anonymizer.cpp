#include <doctest.h>

#include <algorithm>
#include <set>

#include "tabnum/anonymizer.hpp"
#include "tabnum/example.hpp"
#include "test_support.hpp"

using namespace tabnum;
using namespace tabnum::test;

namespace {

TokenPool small_pool() {
    TokenPool p;
    p.pool_id = "train";
    p.tokens = {"burger", "kite", "walnut", "lantern", "glacier", "mosaic", "turbine",
                "falcon", "harbor", "meadow", "pretzel", "obelisk"};
    p.validate();
    return p;
}

ReasoningExample sample_example() {
    ReasoningExample ex;
    ex.id = "e1";
    ex.table = cash_flow_table();
    ex.context.pre_text = {"The following table reports ACME figures across Q1, Q2, Q3, FY."};
    ex.question =
        "What is the combined amount of Other Financing Activities in Q3 and Operating Cash "
        "Flow in FY?";
    ex.template_question = ex.question;
    ex.program = parse_program("add(-3000000.0, 1697000000.0)");
    ex.sketch = "Other Financing Activities + Operating Cash Flow";
    ex.answer = execute(ex.program);
    return ex;
}

}  // namespace

TEST_CASE("pool validation rejects reserved and duplicate tokens") {
    TokenPool p;
    p.pool_id = "x";
    p.tokens = {"ok", "ok"};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.tokens = {"[SEP]"};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.tokens = {"const_5"};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.tokens = {"ab#c"};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.tokens = {"add"};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.tokens = {""};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("build_map is a deterministic bijection") {
    TokenPool pool = small_pool();
    std::set<std::string> headers{"revenue", "cost", "margin"};
    HeaderMap a = build_map(headers, pool, 7);
    HeaderMap b = build_map(headers, pool, 7);
    CHECK(a.forward == b.forward);
    CHECK(a.forward.size() == 3);
    std::set<std::string> tokens;
    for (const auto& [h, t] : a.forward) {
        CHECK(a.inverse.at(t) == h);
        tokens.insert(t);
    }
    CHECK(tokens.size() == 3);  // injective
    // different seed gives (almost surely) a different assignment
    HeaderMap c = build_map(headers, pool, 8);
    CHECK(c.forward != a.forward);
}

TEST_CASE("build_map edge cases") {
    TokenPool pool = small_pool();
    CHECK(build_map({}, pool, 1).forward.empty());
    std::set<std::string> too_many;
    for (int i = 0; i < 20; ++i) too_many.insert("h" + std::to_string(i));
    CHECK_THROWS_AS(build_map(too_many, pool, 1), PoolExhausted);

    // single header maps to one of the pool tokens
    HeaderMap m = build_map({"revenue"}, pool, 3);
    bool in_pool = std::find(pool.tokens.begin(), pool.tokens.end(),
                             m.forward.at("revenue")) != pool.tokens.end();
    CHECK(in_pool);
}

TEST_CASE("anonymize rewrites all fields and round-trips byte-for-byte") {
    ReasoningExample ex = sample_example();
    TokenPool pool = small_pool();
    HeaderMap m = build_map(anonymizable_headers(ex), pool, 42);

    ReasoningExample anon = anonymize(m, ex);
    CHECK(anon.header_map.has_value());
    CHECK(anon.table.row_headers != ex.table.row_headers);
    CHECK(anon.question != ex.question);
    CHECK(anon.sketch != ex.sketch);
    // program and answer untouched
    CHECK(serialize(anon.program) == serialize(ex.program));
    CHECK(anon.answer == ex.answer);
    // numeric-literal programs still execute to the same answer
    CHECK(execute(anon.program, &anon.table) == ex.answer);

    ReasoningExample back = deanonymize(anon);
    CHECK(back.question == ex.question);
    CHECK(back.template_question == ex.template_question);
    CHECK(back.sketch == ex.sketch);
    CHECK(back.table.row_headers == ex.table.row_headers);
    CHECK(back.table.col_headers == ex.table.col_headers);
    CHECK(back.context.pre_text == ex.context.pre_text);
    CHECK_FALSE(back.header_map.has_value());
}

TEST_CASE("repeated header occurrences map to one token") {
    ReasoningExample ex = sample_example();
    ex.question = "Compare Operating Cash Flow in Q1 with Operating Cash Flow in Q2.";
    ex.template_question = ex.question;
    TokenPool pool = small_pool();
    HeaderMap m = build_map(anonymizable_headers(ex), pool, 5);
    ReasoningExample anon = anonymize(m, ex);
    const std::string tok = m.forward.at("Operating Cash Flow");
    size_t count = 0;
    for (size_t pos = anon.question.find(tok); pos != std::string::npos;
         pos = anon.question.find(tok, pos + 1))
        ++count;
    CHECK(count == 2);
    CHECK(anon.question.find("Operating Cash Flow") == std::string::npos);
}

TEST_CASE("jargon keys flow through the same map") {
    ReasoningExample ex = sample_example();
    ex.jargon_key = "operation_2";
    ex.question = "What is ACME's Q3 operation_2?";
    ex.template_question = ex.question;
    TokenPool pool = small_pool();
    HeaderMap m = build_map(anonymizable_headers(ex), pool, 11);
    CHECK(m.forward.count("operation_2") == 1);
    ReasoningExample anon = anonymize(m, ex);
    CHECK(*anon.jargon_key == m.forward.at("operation_2"));
    CHECK(anon.question.find(m.forward.at("operation_2")) != std::string::npos);
    ReasoningExample back = deanonymize(anon);
    CHECK(*back.jargon_key == "operation_2");
}

TEST_CASE("context replacement is optional") {
    ReasoningExample ex = sample_example();
    ex.context.pre_text = {"Operating Cash Flow rose."};
    TokenPool pool = small_pool();
    HeaderMap m = build_map(anonymizable_headers(ex), pool, 2);
    AnonymizeOptions keep;
    keep.include_context = false;
    ReasoningExample anon = anonymize(m, ex, keep);
    CHECK(anon.context.pre_text[0] == "Operating Cash Flow rose.");
    ReasoningExample anon2 = anonymize(m, ex);
    CHECK(anon2.context.pre_text[0] != "Operating Cash Flow rose.");
}
