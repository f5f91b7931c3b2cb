#include <doctest.h>

#include <algorithm>

#include "tabnum/eval.hpp"
#include "tabnum/json_io.hpp"
#include "test_support.hpp"

using namespace tabnum;
using namespace tabnum::test;

namespace {

std::vector<ReasoningExample> small_dataset() {
    std::vector<ReasoningExample> out;

    ReasoningExample a;
    a.id = "a";
    a.table = cash_flow_table();
    a.question = "combined amount?";
    a.program = parse_program("add(-3000000.0, 1697000000.0)");
    a.sketch = "Other Financing Activities + Operating Cash Flow";
    a.answer = execute(a.program);
    out.push_back(a);

    ReasoningExample b;
    b.id = "b";
    b.table = cash_flow_table();
    b.question = "percent change?";
    b.program =
        parse_program("subtract(85900000.0, 82100000.0), divide(#0, 82100000), multiply(#1, 100)");
    b.sketch = "(Operating Cash Flow - Operating Cash Flow) / Operating Cash Flow \xc3\x97 100";
    b.answer = execute(b.program);
    out.push_back(b);

    ReasoningExample c;
    c.id = "c";
    c.table = equity_table();
    c.question = "roe?";
    c.program = parse_program("divide(97600000, 1167700000)");
    c.sketch = "Net Income / Total Stockholders Equity";
    c.answer = execute(c.program);
    out.push_back(c);

    return out;
}

std::vector<PredictionRecord> gold_predictions(const std::vector<ReasoningExample>& ds) {
    std::vector<PredictionRecord> preds;
    for (const auto& ex : ds) preds.push_back({ex.id, "assistant\n" + serialize(ex.program)});
    return preds;
}

}  // namespace

TEST_CASE("extract_program follows the three post-processing rules") {
    CHECK(extract_program("assistant\nadd(1, 2)\nextra") == "add(1, 2)");
    CHECK(extract_program("add(1, 2)") == "add(1, 2)");
    CHECK(extract_program("assistant: \n\n  divide(#0, const_100)") == "divide(#0, const_100)");
    CHECK(extract_program("System text ASSISTANT  add(3, 4)") == "add(3, 4)");
    // only the last marker counts
    CHECK(extract_program("assistant\nwrong(1, 1)\nassistant\nadd(5, 5)") == "add(5, 5)");
    CHECK_THROWS_AS((void)extract_program("assistant\n \n\t\n"), EmptyExtraction);
    CHECK_THROWS_AS((void)extract_program(""), EmptyExtraction);
}

TEST_CASE("gold self-scoring yields perfect accuracies") {
    auto ds = small_dataset();
    ScoreReport rep = score(ds, gold_predictions(ds));
    CHECK(rep.n == 3);
    CHECK(rep.program_accuracy == 1.0);
    CHECK(rep.execution_accuracy == 1.0);
    CHECK(rep.per_example.size() == 3);
    CHECK(std::is_sorted(rep.per_example.begin(), rep.per_example.end(),
                         [](const auto& x, const auto& y) { return x.id < y.id; }));
}

TEST_CASE("malformed prediction scores zero on both metrics with an error") {
    auto ds = small_dataset();
    auto preds = gold_predictions(ds);
    preds[1].raw_output = "assistant\ndivide(subtraction)…";
    ScoreReport rep = score(ds, preds);
    CHECK(rep.program_accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(rep.execution_accuracy == doctest::Approx(2.0 / 3.0));
    const auto& s = rep.per_example[1];
    CHECK(s.id == "b");
    CHECK_FALSE(s.parse_ok);
    CHECK_FALSE(s.prog_match);
    CHECK_FALSE(s.exec_match);
    CHECK_FALSE(s.error.empty());
}

TEST_CASE("commutative operand swap: prog 0, exec 1") {
    auto ds = small_dataset();
    auto preds = gold_predictions(ds);
    preds[0].raw_output = "assistant\nadd(1697000000.0, -3000000.0)";
    ScoreReport rep = score(ds, preds);
    CHECK(rep.per_example[0].prog_match == false);
    CHECK(rep.per_example[0].exec_match == true);
}

TEST_CASE("missing predictions score wrong on both metrics") {
    auto ds = small_dataset();
    auto preds = gold_predictions(ds);
    preds.pop_back();
    ScoreReport rep = score(ds, preds);
    CHECK(rep.program_accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(rep.per_example[2].error == "missing prediction");
}

TEST_CASE("duplicate and unknown prediction ids are data errors") {
    auto ds = small_dataset();
    auto preds = gold_predictions(ds);
    preds.push_back(preds[0]);
    CHECK_THROWS_AS((void)score(ds, preds), DuplicatePrediction);
    preds = gold_predictions(ds);
    preds.push_back({"nope", "add(1, 1)"});
    CHECK_THROWS_AS((void)score(ds, preds), UnknownExampleId);
}

TEST_CASE("corrupting k of n predictions drops program accuracy by exactly k/n") {
    auto ds = small_dataset();
    // replicate to n = 12 distinct ids
    std::vector<ReasoningExample> big;
    for (int i = 0; i < 4; ++i)
        for (auto ex : ds) {
            ex.id += "-" + std::to_string(i);
            big.push_back(ex);
        }
    auto preds = gold_predictions(big);
    for (size_t k = 0; k < 3; ++k) preds[k].raw_output = "assistant\nadd(1, 1)";
    ScoreReport rep = score(big, preds);
    CHECK(rep.program_accuracy == doctest::Approx(1.0 - 3.0 / 12.0));
}

TEST_CASE("chat export format") {
    auto ds = small_dataset();
    ChatRecord rec = export_chat_record(ds[0], false, true);
    CHECK(rec.system ==
          "You are an assistant that returns only the math program solving the user request. "
          "Respond with the program text only.");
    auto count_sep = [](const std::string& s) {
        size_t n = 0;
        for (size_t p = s.find("[SEP]"); p != std::string::npos; p = s.find("[SEP]", p + 1)) ++n;
        return n;
    };
    CHECK(count_sep(rec.user) == 1);
    CHECK(rec.assistant == serialize(ds[0].program));
    CHECK(rec.user.find(ds[0].question) == 0);
    CHECK(rec.user.find(linearize_table(ds[0].table)) != std::string::npos);

    ChatRecord sk = export_chat_record(ds[0], true, false);
    CHECK(count_sep(sk.user) == 2);
    CHECK_FALSE(sk.assistant.has_value());
    // sketch is the final segment
    CHECK(sk.user.rfind(ds[0].sketch) == sk.user.size() - ds[0].sketch.size());

    // byte stability
    ChatRecord again = export_chat_record(ds[0], true, false);
    CHECK(again.user == sk.user);
}

TEST_CASE("table-op predictions are scored against the example table") {
    auto ds = small_dataset();
    auto preds = gold_predictions(ds);
    // Net Income row of the cash-flow table sums to 90500000; not the gold
    // answer, but it must execute rather than error
    preds[0].raw_output = "assistant\ntable_sum(Net Income, none)";
    ScoreReport rep = score(ds, preds);
    CHECK(rep.per_example[0].parse_ok);
    CHECK_FALSE(rep.per_example[0].exec_match);
    CHECK(rep.per_example[0].error.empty());
}
