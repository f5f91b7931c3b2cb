#include "tabnum/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace tabnum {

namespace {

std::string dump_sorted(const json& j) {
    // nlohmann::json objects are std::map-backed: keys already sort, so a
    // plain dump is byte-stable
    return j.dump();
}

json answer_to_json(const ExecValue& v) {
    json j;
    if (v.is_boolean) {
        j["kind"] = "boolean";
        j["value"] = v.truth;
    } else {
        j["kind"] = "number";
        j["value"] = v.number;
    }
    j["text"] = render_exec_value(v);
    return j;
}

ExecValue answer_from_json(const json& j) {
    ExecValue v;
    if (j.at("kind").get<std::string>() == "boolean") {
        v.is_boolean = true;
        v.truth = j.at("value").get<bool>();
    } else {
        v.is_boolean = false;
        v.number = j.at("value").get<double>();
    }
    return v;
}

json header_map_to_json(const HeaderMap& m) {
    json j;
    j["pool_id"] = m.pool_id;
    j["seed"] = m.seed;
    json fwd = json::object();
    for (const auto& [k, v] : m.forward) fwd[k] = v;
    j["forward"] = fwd;
    return j;
}

HeaderMap header_map_from_json(const json& j) {
    HeaderMap m;
    m.pool_id = j.at("pool_id").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    for (const auto& [k, v] : j.at("forward").items()) {
        std::string tok = v.get<std::string>();
        m.forward[k] = tok;
        m.inverse[tok] = k;
    }
    return m;
}

}  // namespace

json table_to_json(const Table& t, const Context& ctx) {
    json j;
    j["source_id"] = t.source_id;
    j["row_headers"] = t.row_headers;
    j["col_headers"] = t.col_headers;
    json rows = json::array();
    for (const auto& row : t.cells) {
        json r = json::array();
        for (const auto& cell : row) r.push_back(cell.raw_text);
        rows.push_back(std::move(r));
    }
    j["cells"] = rows;
    if (!ctx.pre_text.empty()) j["pre_text"] = ctx.pre_text;
    if (!ctx.post_text.empty()) j["post_text"] = ctx.post_text;
    return j;
}

std::pair<Table, Context> table_from_json(const json& j) {
    Table t;
    t.source_id = j.at("source_id").get<std::string>();
    t.row_headers = j.at("row_headers").get<std::vector<std::string>>();
    t.col_headers = j.at("col_headers").get<std::vector<std::string>>();
    for (const auto& row : j.at("cells")) {
        std::vector<Cell> cells;
        for (const auto& raw : row) cells.push_back(parse_cell(raw.get<std::string>()));
        t.cells.push_back(std::move(cells));
    }
    t.validate();
    Context ctx;
    if (j.contains("pre_text")) ctx.pre_text = j["pre_text"].get<std::vector<std::string>>();
    if (j.contains("post_text")) ctx.post_text = j["post_text"].get<std::vector<std::string>>();
    return {std::move(t), std::move(ctx)};
}

std::vector<std::pair<Table, Context>> load_tables(const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<std::pair<Table, Context>> out;

    auto load_file = [&](const std::string& file) {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open table file: " + file);
        json j = json::parse(in);
        if (j.is_array())
            for (const auto& item : j) out.push_back(table_from_json(item));
        else
            out.push_back(table_from_json(j));
    };

    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.path().extension() == ".json") files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) load_file(f);
    } else {
        load_file(path);
    }
    return out;
}

json example_to_json(const ReasoningExample& ex) {
    json j;
    j["id"] = ex.id;
    j["table"] = table_to_json(ex.table, ex.context);
    j["question"] = ex.question;
    j["template_question"] = ex.template_question;
    j["program"] = serialize(ex.program);
    j["sketch"] = ex.sketch;
    j["answer"] = answer_to_json(ex.answer);
    if (ex.header_map) j["header_map"] = header_map_to_json(*ex.header_map);
    if (ex.jargon_key) j["jargon_key"] = *ex.jargon_key;
    j["gen_seed"] = ex.gen_seed;
    j["pattern"] = ex.pattern;
    if (ex.paraphrase_rejected) j["paraphrase_rejected"] = true;
    if (ex.lexicon_domain) j["lexicon_domain"] = *ex.lexicon_domain;
    return j;
}

ReasoningExample example_from_json(const json& j) {
    ReasoningExample ex;
    ex.id = j.at("id").get<std::string>();
    auto [t, ctx] = table_from_json(j.at("table"));
    ex.table = std::move(t);
    ex.context = std::move(ctx);
    ex.question = j.at("question").get<std::string>();
    ex.template_question = j.value("template_question", ex.question);
    ex.program = parse_program(j.at("program").get<std::string>());
    ex.sketch = j.value("sketch", std::string());
    ex.answer = answer_from_json(j.at("answer"));
    if (j.contains("header_map")) ex.header_map = header_map_from_json(j["header_map"]);
    if (j.contains("jargon_key")) ex.jargon_key = j["jargon_key"].get<std::string>();
    ex.gen_seed = j.value("gen_seed", uint64_t(0));
    ex.pattern = j.value("pattern", std::string());
    ex.paraphrase_rejected = j.value("paraphrase_rejected", false);
    if (j.contains("lexicon_domain")) ex.lexicon_domain = j["lexicon_domain"].get<std::string>();
    return ex;
}

std::string example_to_jsonl_line(const ReasoningExample& ex) {
    return dump_sorted(example_to_json(ex));
}

std::vector<ReasoningExample> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    std::vector<ReasoningExample> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed JSON");
        out.push_back(example_from_json(j));
    }
    return out;
}

void write_corpus_jsonl(const std::string& path, const std::vector<ReasoningExample>& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const auto& ex : corpus) out << example_to_jsonl_line(ex) << '\n';
}

std::vector<PredictionRecord> load_predictions_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open predictions file: " + path);
    std::vector<PredictionRecord> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed JSON");
        PredictionRecord p;
        p.example_id = j.at("example_id").get<std::string>();
        p.raw_output = j.at("raw_output").get<std::string>();
        out.push_back(std::move(p));
    }
    return out;
}

json report_to_json(const ScoreReport& report) {
    json j;
    j["n"] = report.n;
    j["program_accuracy"] = report.program_accuracy;
    j["execution_accuracy"] = report.execution_accuracy;
    j["config_digest"] = report.config_digest;
    json per = json::array();
    for (const auto& s : report.per_example) {
        json e;
        e["id"] = s.id;
        e["extracted_program"] = s.extracted_program;
        e["parse_ok"] = s.parse_ok;
        e["prog_match"] = s.prog_match;
        e["exec_match"] = s.exec_match;
        if (!s.error.empty()) e["error"] = s.error;
        per.push_back(std::move(e));
    }
    j["per_example"] = per;
    return j;
}

json chat_record_to_json(const ChatRecord& rec) {
    json j;
    j["system"] = rec.system;
    j["user"] = rec.user;
    if (rec.assistant) j["assistant"] = *rec.assistant;
    return j;
}

}  // namespace tabnum
