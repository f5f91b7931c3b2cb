#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tabnum/anonymizer.hpp"
#include "tabnum/datagen.hpp"
#include "tabnum/domain_shift.hpp"
#include "tabnum/eval.hpp"
#include "tabnum/json_io.hpp"

using namespace tabnum;

namespace {

// stable digest over the resolved parameters of a run
std::string config_digest(const json& params) {
    uint64_t h = fnv1a64(params.dump());
    char buf[24];
    snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

void print_digest(const json& params) {
    std::cerr << "config_digest: " << config_digest(params) << "\n";
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return json::parse(in);
}

// --config file supplies defaults; explicit flags win
template <typename T>
void fill_from_config(const json& cfg, const char* key, T& value, bool flag_given) {
    if (!flag_given && cfg.contains(key)) value = cfg.at(key).get<T>();
}

int run_generate(const std::string& config_path, const std::string& tables_path, size_t count,
                 uint64_t seed, int len_min, int len_max, double jargon_fraction,
                 const std::string& jargon_book_path, const std::string& out_path,
                 unsigned threads, const std::string& paraphrase_endpoint,
                 const std::string& credential_env, bool paraphrase_offline,
                 const std::map<std::string, bool>& given) {
    json cfg = load_config_file(config_path);
    std::string tables = tables_path, jargon_book_file = jargon_book_path, out = out_path;
    fill_from_config(cfg, "tables", tables, given.at("tables"));
    fill_from_config(cfg, "count", count, given.at("count"));
    fill_from_config(cfg, "seed", seed, given.at("seed"));
    fill_from_config(cfg, "len_min", len_min, given.at("len-min"));
    fill_from_config(cfg, "len_max", len_max, given.at("len-max"));
    fill_from_config(cfg, "jargon_fraction", jargon_fraction, given.at("jargon-fraction"));
    fill_from_config(cfg, "jargon_book", jargon_book_file, given.at("jargon-book"));
    fill_from_config(cfg, "out", out, given.at("out"));

    if (tables.empty() || out.empty())
        throw CLI::RequiredError("--tables and --out (via flag or --config)");

    json params = {{"subcommand", "generate"},
                   {"tables", tables},
                   {"count", count},
                   {"seed", seed},
                   {"len_min", len_min},
                   {"len_max", len_max},
                   {"jargon_fraction", jargon_fraction},
                   {"jargon_book", jargon_book_file},
                   {"paraphrase_endpoint", paraphrase_endpoint},
                   {"paraphrase_offline", paraphrase_offline},
                   {"credential_env", credential_env},
                   {"out", out}};
    print_digest(params);

    GenConfig gen;
    gen.seed = seed;
    gen.count = count;
    gen.len_min = len_min;
    gen.len_max = len_max;
    gen.jargon_fraction = jargon_fraction;

    auto table_set = load_tables(tables);
    std::vector<JargonEntry> book;
    if (!jargon_book_file.empty()) book = load_jargon_book(jargon_book_file);

    GenStats stats;
    auto corpus = generate_corpus(table_set, gen, book, &stats, threads);

    std::unique_ptr<ParaphraseClient> client;
    if (!paraphrase_endpoint.empty())
        client = make_http_paraphrase_client(paraphrase_endpoint, credential_env);
    else if (paraphrase_offline)
        client = make_offline_paraphrase_client();
    if (client)
        for (auto& ex : corpus) ex = paraphrase(ex, *client);

    write_corpus_jsonl(out, corpus);
    std::cerr << "attempts: " << stats.attempts << "  emitted: " << stats.emitted
              << "  discarded_sampling: " << stats.discarded_sampling
              << "  discarded_execution: " << stats.discarded_execution << "\n";
    return 0;
}

int run_anonymize(const std::string& in, const std::string& out, const std::string& pool_path,
                  const std::string& pool_id, uint64_t seed, const std::string& disjoint_with,
                  bool no_context) {
    json params = {{"subcommand", "anonymize"}, {"in", in},
                   {"out", out},              {"pool", pool_path},
                   {"pool_id", pool_id},      {"seed", seed},
                   {"disjoint_with", disjoint_with}, {"include_context", !no_context}};
    print_digest(params);

    TokenPool pool = load_pool_file(pool_path, pool_id);
    if (!disjoint_with.empty()) {
        TokenPool other = load_pool_file(disjoint_with, "other");
        std::set<std::string> mine(pool.tokens.begin(), pool.tokens.end());
        for (const auto& t : other.tokens)
            if (mine.count(t))
                throw std::runtime_error("pools are not disjoint: shared token '" + t + "'");
    }

    AnonymizeOptions opt;
    opt.include_context = !no_context;

    auto corpus = load_corpus_jsonl(in);
    for (auto& ex : corpus) {
        uint64_t ex_seed = mix_seed(seed, fnv1a64(ex.id));
        HeaderMap m = build_map(anonymizable_headers(ex), pool, ex_seed);
        ex = anonymize(m, ex, opt);
    }
    write_corpus_jsonl(out, corpus);
    return 0;
}

int run_shift(const std::string& in, const std::string& out, const std::string& lexicon_path,
              std::string domain) {
    if (domain.empty()) {
        std::filesystem::path p(lexicon_path);
        domain = p.stem().string();
    }
    json params = {{"subcommand", "shift"},
                   {"in", in},
                   {"out", out},
                   {"lexicon", lexicon_path},
                   {"domain", domain}};
    print_digest(params);

    Lexicon lex = load_lexicon_file(lexicon_path, domain);
    auto corpus = load_corpus_jsonl(in);
    ShiftStats total;
    for (auto& ex : corpus) {
        ShiftStats st;
        ex = shift(ex, lex, &st);
        total.replaced_headers += st.replaced_headers;
        total.passed_through_headers += st.passed_through_headers;
        total.replaced_phrases += st.replaced_phrases;
    }
    write_corpus_jsonl(out, corpus);
    std::cerr << "replaced_headers: " << total.replaced_headers
              << "  passed_through_headers: " << total.passed_through_headers
              << "  replaced_phrases: " << total.replaced_phrases << "\n";
    return 0;
}

int run_execute(std::string program_text, const std::string& table_path) {
    if (program_text.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        program_text = ss.str();
    }
    json params = {{"subcommand", "execute"}, {"program", program_text}, {"table", table_path}};
    print_digest(params);

    std::optional<Table> table;
    if (!table_path.empty()) {
        auto tables = load_tables(table_path);
        if (tables.empty()) throw std::runtime_error("no table in: " + table_path);
        table = tables.front().first;
    }
    Program p = parse_program(program_text);
    ExecValue v = execute(p, table ? &*table : nullptr);
    std::cout << render_exec_value(v) << "\n";
    return 0;
}

int run_evaluate(const std::string& data, const std::string& preds, const std::string& out) {
    json params = {{"subcommand", "evaluate"}, {"data", data}, {"preds", preds}, {"out", out}};
    std::string digest = config_digest(params);
    std::cerr << "config_digest: " << digest << "\n";

    auto corpus = load_corpus_jsonl(data);
    auto predictions = load_predictions_jsonl(preds);
    ScoreReport report = score(corpus, predictions);
    report.config_digest = digest;

    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write report: " + out);
        f << report_to_json(report).dump(2) << "\n";
    }
    printf("n                  %zu\n", report.n);
    printf("program_accuracy   %.4f\n", report.program_accuracy);
    printf("execution_accuracy %.4f\n", report.execution_accuracy);
    return 0;
}

int run_export(const std::string& in, const std::string& out, const std::string& format,
               bool with_sketch, bool no_gold) {
    if (format != "chat") throw std::runtime_error("unknown export format: " + format);
    json params = {{"subcommand", "export"}, {"in", in},          {"out", out},
                   {"format", format},       {"with_sketch", with_sketch}, {"gold", !no_gold}};
    print_digest(params);

    auto corpus = load_corpus_jsonl(in);
    auto records = export_chat(corpus, with_sketch, !no_gold);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write export: " + out);
    for (const auto& rec : records) f << chat_record_to_json(rec).dump() << "\n";
    return 0;
}

int run_stats(const std::string& in) {
    json params = {{"subcommand", "stats"}, {"in", in}};
    print_digest(params);

    auto corpus = load_corpus_jsonl(in);
    std::map<std::string, size_t> patterns;
    size_t jargon = 0, anonymized = 0, shifted = 0, boolean_answers = 0;
    for (const auto& ex : corpus) {
        ++patterns[ex.pattern];
        if (ex.jargon_key) ++jargon;
        if (ex.header_map) ++anonymized;
        if (ex.lexicon_domain) ++shifted;
        if (ex.answer.is_boolean) ++boolean_answers;
    }
    printf("examples          %zu\n", corpus.size());
    printf("jargon            %zu\n", jargon);
    printf("anonymized        %zu\n", anonymized);
    printf("domain_shifted    %zu\n", shifted);
    printf("boolean_answers   %zu\n", boolean_answers);
    for (const auto& [p, n] : patterns) printf("pattern %-12s %zu\n", p.c_str(), n);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Table numerical-reasoning data toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Synthesize a reasoning corpus from tables");
    std::string g_config, g_tables, g_jargon_book, g_out, g_endpoint;
    std::string g_credential_env = "TABNUM_PARAPHRASE_TOKEN";
    size_t g_count = 0;
    uint64_t g_seed = 0;
    int g_len_min = 1, g_len_max = 4;
    double g_jargon_fraction = 0.0;
    unsigned g_threads = std::max(1u, std::thread::hardware_concurrency());
    bool g_offline_paraphrase = false;
    gen->add_option("--config", g_config, "JSON config file with generate parameters");
    gen->add_option("--tables", g_tables, "Table JSON file or directory");
    gen->add_option("--count", g_count, "Number of examples to emit");
    gen->add_option("--seed", g_seed, "Master seed");
    gen->add_option("--len-min", g_len_min, "Minimum program length");
    gen->add_option("--len-max", g_len_max, "Maximum program length");
    gen->add_option("--jargon-fraction", g_jargon_fraction, "Fraction of jargon questions");
    gen->add_option("--jargon-book", g_jargon_book, "Jargon book JSON file");
    gen->add_option("--out", g_out, "Output corpus JSONL");
    gen->add_option("--threads", g_threads, "Parallelism degree (output-invariant)");
    gen->add_option("--paraphrase-endpoint", g_endpoint,
                    "HTTP paraphrase endpoint; bearer credential is read from the "
                    "environment variable named by --paraphrase-credential-env");
    gen->add_option("--paraphrase-credential-env", g_credential_env,
                    "Environment variable holding the endpoint credential");
    gen->add_flag("--paraphrase-offline", g_offline_paraphrase,
                  "Use the deterministic built-in paraphraser");

    // anonymize
    auto* anon = app.add_subcommand("anonymize", "Replace headers with pool tokens");
    std::string a_in, a_out, a_pool, a_pool_id = "default", a_disjoint;
    uint64_t a_seed = 0;
    bool a_no_context = false;
    anon->add_option("--in", a_in, "Input corpus JSONL")->required();
    anon->add_option("--out", a_out, "Output corpus JSONL")->required();
    anon->add_option("--pool", a_pool, "Token pool file")->required();
    anon->add_option("--pool-id", a_pool_id, "Pool identifier recorded in the map");
    anon->add_option("--seed", a_seed, "Master seed (per-example seeds derive from it)");
    anon->add_option("--disjoint-with", a_disjoint, "Second pool that must share no tokens");
    anon->add_flag("--no-context", a_no_context, "Leave pre/post text untouched");

    // shift
    auto* sh = app.add_subcommand("shift", "Apply a domain lexicon to a corpus");
    std::string s_in, s_out, s_lexicon, s_domain;
    sh->add_option("--in", s_in, "Input corpus JSONL")->required();
    sh->add_option("--out", s_out, "Output corpus JSONL")->required();
    sh->add_option("--lexicon", s_lexicon, "TSV lexicon file")->required();
    sh->add_option("--domain", s_domain, "Domain name (default: lexicon file stem)");

    // execute
    auto* ex = app.add_subcommand("execute", "Run a program, optionally against a table");
    std::string e_program, e_table;
    ex->add_option("program", e_program, "Program text (stdin when omitted)");
    ex->add_option("--table", e_table, "Table JSON file");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score predictions against a corpus");
    std::string v_data, v_preds, v_out;
    ev->add_option("--data", v_data, "Gold corpus JSONL")->required();
    ev->add_option("--preds", v_preds, "Predictions JSONL {example_id, raw_output}")->required();
    ev->add_option("--out", v_out, "Report JSON output path");

    // export
    auto* xp = app.add_subcommand("export", "Export chat-format training/inference records");
    std::string x_in, x_out, x_format = "chat";
    bool x_with_sketch = false, x_no_gold = false;
    xp->add_option("--in", x_in, "Input corpus JSONL")->required();
    xp->add_option("--out", x_out, "Output JSONL")->required();
    xp->add_option("--format", x_format, "Export format (chat)");
    xp->add_flag("--with-sketch", x_with_sketch, "Append the sketch to the user turn");
    xp->add_flag("--no-gold", x_no_gold, "Omit the assistant turn (inference export)");

    // stats
    auto* st = app.add_subcommand("stats", "Summarize a corpus");
    std::string t_in;
    st->add_option("--in", t_in, "Input corpus JSONL")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) {
            std::map<std::string, bool> given = {
                {"tables", gen->count("--tables") > 0},
                {"count", gen->count("--count") > 0},
                {"seed", gen->count("--seed") > 0},
                {"len-min", gen->count("--len-min") > 0},
                {"len-max", gen->count("--len-max") > 0},
                {"jargon-fraction", gen->count("--jargon-fraction") > 0},
                {"jargon-book", gen->count("--jargon-book") > 0},
                {"out", gen->count("--out") > 0},
            };
            return run_generate(g_config, g_tables, g_count, g_seed, g_len_min, g_len_max,
                                g_jargon_fraction, g_jargon_book, g_out, g_threads, g_endpoint,
                                g_credential_env, g_offline_paraphrase, given);
        }
        if (anon->parsed())
            return run_anonymize(a_in, a_out, a_pool, a_pool_id, a_seed, a_disjoint,
                                 a_no_context);
        if (sh->parsed()) return run_shift(s_in, s_out, s_lexicon, s_domain);
        if (ex->parsed()) return run_execute(e_program, e_table);
        if (ev->parsed()) return run_evaluate(v_data, v_preds, v_out);
        if (xp->parsed()) return run_export(x_in, x_out, x_format, x_with_sketch, x_no_gold);
        if (st->parsed()) return run_stats(t_in);
    } catch (const CLI::RequiredError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
