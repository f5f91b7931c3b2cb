#include "tabnum/eval.hpp"

#include <algorithm>
#include <map>

#include "tabnum/textutil.hpp"

namespace tabnum {

const char* const kChatSystemMessage =
    "You are an assistant that returns only the math program solving the user request. "
    "Respond with the program text only.";

namespace {

bool is_leading_punct(char c) {
    switch (c) {
        case ':':
        case ';':
        case ',':
        case '.':
        case '!':
        case '?':
        case '-':
        case '*':
        case '>':
        case '<':
        case '=':
        case '|':
        case '"':
        case '\'':
        case '`':
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string extract_program(const std::string& raw) {
    // text after the last case-insensitive "assistant"
    size_t start = 0;
    const std::string needle = "assistant";
    for (size_t i = 0; i + needle.size() <= raw.size(); ++i) {
        if (iequals(std::string_view(raw).substr(i, needle.size()), needle))
            start = i + needle.size();
    }
    std::string_view rest = std::string_view(raw).substr(start);

    size_t b = 0;
    while (b < rest.size() &&
           (is_leading_punct(rest[b]) || std::isspace(static_cast<unsigned char>(rest[b]))))
        ++b;
    rest = rest.substr(b);

    size_t pos = 0;
    while (pos < rest.size()) {
        size_t nl = rest.find('\n', pos);
        std::string_view line = rest.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        // trim the line
        size_t lb = 0, le = line.size();
        while (lb < le && std::isspace(static_cast<unsigned char>(line[lb]))) ++lb;
        while (le > lb && std::isspace(static_cast<unsigned char>(line[le - 1]))) --le;
        if (le > lb) return std::string(line.substr(lb, le - lb));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    throw EmptyExtraction("no non-empty line in model output");
}

ScoreReport score(const std::vector<ReasoningExample>& dataset,
                  const std::vector<PredictionRecord>& preds, const MatchConfig& match_cfg) {
    std::map<std::string, const ReasoningExample*> by_id;
    for (const auto& ex : dataset) by_id[ex.id] = &ex;

    std::map<std::string, const PredictionRecord*> pred_by_id;
    for (const auto& p : preds) {
        if (!by_id.count(p.example_id))
            throw UnknownExampleId("prediction for unknown example id: " + p.example_id);
        if (!pred_by_id.emplace(p.example_id, &p).second)
            throw DuplicatePrediction("duplicate prediction for example id: " + p.example_id);
    }

    ScoreReport report;
    report.n = dataset.size();
    size_t prog_hits = 0, exec_hits = 0;

    for (const auto& [id, ex] : by_id) {
        PerExampleScore s;
        s.id = id;
        auto it = pred_by_id.find(id);
        if (it == pred_by_id.end()) {
            s.error = "missing prediction";
            report.per_example.push_back(std::move(s));
            continue;
        }

        std::string gold_program = serialize(ex->program);
        std::string gold_answer = render_exec_value(ex->answer);

        try {
            s.extracted_program = extract_program(it->second->raw_output);
        } catch (const EmptyExtraction& e) {
            s.error = e.what();
            report.per_example.push_back(std::move(s));
            continue;
        }

        s.prog_match = s.extracted_program == gold_program;

        try {
            Program p = parse_program(s.extracted_program);
            s.parse_ok = true;
            ExecValue v = execute(p, &ex->table);
            s.exec_match = answers_match(gold_answer, render_exec_value(v), match_cfg);
        } catch (const ParseError& e) {
            s.error = std::string("parse error: ") + e.what();
        } catch (const ExecError& e) {
            s.error = std::string("execution error: ") + e.what();
        }

        prog_hits += s.prog_match ? 1 : 0;
        exec_hits += s.exec_match ? 1 : 0;
        report.per_example.push_back(std::move(s));
    }

    if (report.n) {
        report.program_accuracy = double(prog_hits) / double(report.n);
        report.execution_accuracy = double(exec_hits) / double(report.n);
    }
    return report;
}

ChatRecord export_chat_record(const ReasoningExample& ex, bool with_sketch, bool include_gold) {
    ChatRecord rec;
    rec.system = kChatSystemMessage;

    std::string context;
    if (!ex.context.pre_text.empty()) context += join(ex.context.pre_text, " ") + "\n";
    context += linearize_table(ex.table);
    if (!ex.context.post_text.empty()) context += "\n" + join(ex.context.post_text, " ");

    rec.user = ex.question + " [SEP] " + context;
    if (with_sketch) rec.user += " [SEP] " + ex.sketch;
    if (include_gold) rec.assistant = serialize(ex.program);
    return rec;
}

std::vector<ChatRecord> export_chat(const std::vector<ReasoningExample>& dataset,
                                    bool with_sketch, bool include_gold) {
    std::vector<ChatRecord> out;
    out.reserve(dataset.size());
    for (const auto& ex : dataset) out.push_back(export_chat_record(ex, with_sketch, include_gold));
    return out;
}

}  // namespace tabnum
