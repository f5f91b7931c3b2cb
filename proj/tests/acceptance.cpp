// Acceptance suite: one PASS/FAIL line per criterion, exit nonzero when any
// criterion fails. argv[1] = repository root (for data files and goldens).

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "tabnum/anonymizer.hpp"
#include "tabnum/answer_match.hpp"
#include "tabnum/datagen.hpp"
#include "tabnum/domain_shift.hpp"
#include "tabnum/eval.hpp"
#include "tabnum/json_io.hpp"
#include "tabnum/textutil.hpp"

using namespace tabnum;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    printf("criterion %2d %-34s %s%s%s\n", criterion, name.c_str(), ok ? "PASS" : "FAIL",
           detail.empty() ? "" : "  -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool contains_word(const std::string& text, const std::string& word) {
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    for (size_t pos = text.find(word); pos != std::string::npos; pos = text.find(word, pos + 1)) {
        bool left_ok = pos == 0 || !word_char(text[pos - 1]);
        size_t end = pos + word.size();
        bool right_ok = end == text.size() || !word_char(text[end]);
        if (left_ok && right_ok) return true;
    }
    return false;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

void criterion_1_worked_examples() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    struct Case {
        const char* program;
        const char* printed_answer;
    };
    const Case cases[] = {
        {"add(-3000000.0, 1697000000.0)", "1694000000.0"},
        {"subtract(85900000.0, 82100000.0), divide(#0, 82100000), multiply(#1, 100)", "4.63"},
        {"subtract(671000, 257600), multiply(const_100, #0)", "41340000.0"},
        {"add(46900000, 46900000)", "93800000.0"},
        {"divide(97600000, 1167700000)", "0.0835"},
    };
    for (const Case& c : cases) {
        try {
            ExecValue v = execute(parse_program(c.program));
            std::string rendered = render_exec_value(v);
            if (!answers_match(c.printed_answer, rendered)) {
                ok = false;
                detail = std::string(c.program) + " rendered " + rendered + " vs " +
                         c.printed_answer;
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string(c.program) + ": " + e.what();
        }
    }
    if (seconds_since(t0) >= 1.0) {
        ok = false;
        detail = "runtime exceeded 1 s";
    }
    report(1, "worked-example golden suite", ok, detail);
}

std::vector<ReasoningExample> g_corpus10k;

void criterion_2_generation(const std::string& root) {
    bool ok = true;
    std::string detail;
    try {
        auto tables = load_tables(root + "/data/tables/sample_tables.json");
        if (tables.size() < 20) throw std::runtime_error("need >= 20 tables");
        GenConfig cfg;
        cfg.seed = 20260823;
        cfg.count = 10000;
        auto book = load_jargon_book(root + "/data/jargon/jargon_book.json");

        auto t0 = std::chrono::steady_clock::now();
        GenStats stats;
        g_corpus10k = generate_corpus(tables, cfg, book, &stats, 1);
        double secs = seconds_since(t0);

        size_t consistent = 0;
        for (const auto& ex : g_corpus10k)
            if (execute(ex.program, &ex.table) == ex.answer) ++consistent;

        char buf[160];
        snprintf(buf, sizeof(buf),
                 "%zu/%zu exact, %.1fs, attempts=%zu sampling-discards=%zu "
                 "execution-discards=%zu",
                 consistent, g_corpus10k.size(), secs, stats.attempts,
                 stats.discarded_sampling, stats.discarded_execution);
        detail = buf;
        ok = g_corpus10k.size() == 10000 && consistent == 10000 && secs < 60.0 &&
             stats.attempts == stats.emitted + stats.discarded_sampling +
                                   stats.discarded_execution;
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(2, "correctness by construction", ok, detail);
}

void criterion_3_determinism(const std::string& root) {
    bool ok = true;
    std::string detail;
    try {
        auto tables = load_tables(root + "/data/tables/sample_tables.json");
        auto book = load_jargon_book(root + "/data/jargon/jargon_book.json");
        GenConfig cfg;
        cfg.seed = 7;
        cfg.count = 1500;
        cfg.jargon_fraction = 0.25;

        auto dump = [&](unsigned threads) {
            auto corpus = generate_corpus(tables, cfg, book, nullptr, threads);
            std::string bytes;
            for (const auto& ex : corpus) bytes += example_to_jsonl_line(ex) + "\n";
            return bytes;
        };
        std::string a = dump(1), b = dump(1), c = dump(4), d = dump(16);
        uint64_t ha = fnv1a64(a);
        ok = a == b && a == c && a == d;
        char buf[64];
        snprintf(buf, sizeof(buf), "jsonl hash %016llx", (unsigned long long)ha);
        detail = ok ? buf : "outputs differ across runs or thread counts";
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(3, "byte-identical regeneration", ok, detail);
}

void criterion_4_anonymization(const std::string& root) {
    bool ok = true;
    std::string detail;
    try {
        auto tables = load_tables(root + "/data/tables/sample_tables.json");
        auto book = load_jargon_book(root + "/data/jargon/jargon_book.json");
        GenConfig cfg;
        cfg.seed = 404;
        cfg.count = 1000;
        cfg.jargon_fraction = 0.3;
        auto corpus = generate_corpus(tables, cfg, book, nullptr, 4);

        TokenPool train = load_pool_file(root + "/data/pools/train_pool.txt", "train");
        TokenPool test = load_pool_file(root + "/data/pools/test_pool.txt", "test");

        std::set<std::string> train_used, test_used;
        size_t round_trips = 0, exec_ok = 0;
        for (size_t i = 0; i < corpus.size(); ++i) {
            const ReasoningExample& ex = corpus[i];
            const TokenPool& pool = i % 2 ? test : train;
            std::set<std::string>& used = i % 2 ? test_used : train_used;
            HeaderMap m = build_map(anonymizable_headers(ex), pool,
                                    mix_seed(cfg.seed, fnv1a64(ex.id)));
            for (const auto& [h, tok] : m.forward) used.insert(tok);

            ReasoningExample anon = anonymize(m, ex);
            if (execute(anon.program, &anon.table) == ex.answer) ++exec_ok;

            ReasoningExample back = deanonymize(anon);
            if (example_to_jsonl_line(back) == example_to_jsonl_line(ex)) ++round_trips;
        }
        std::vector<std::string> overlap;
        std::set_intersection(train_used.begin(), train_used.end(), test_used.begin(),
                              test_used.end(), std::back_inserter(overlap));
        char buf[128];
        snprintf(buf, sizeof(buf), "%zu/1000 round-trip, %zu/1000 exec, %zu shared tokens",
                 round_trips, exec_ok, overlap.size());
        detail = buf;
        ok = round_trips == corpus.size() && exec_ok == corpus.size() && overlap.empty();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(4, "anonymization round-trip", ok, detail);
}

void criterion_5_scorer() {
    bool ok = true;
    std::string detail;
    try {
        const auto& ds = g_corpus10k;
        if (ds.size() != 10000) throw std::runtime_error("10k corpus unavailable");

        std::vector<PredictionRecord> preds;
        for (const auto& ex : ds) preds.push_back({ex.id, "assistant\n" + serialize(ex.program)});
        ScoreReport self = score(ds, preds);
        bool self_ok = self.program_accuracy == 1.0 && self.execution_accuracy == 1.0;

        // corrupt exactly 250 predictions with a parseable wrong program
        size_t corrupted = 0;
        for (size_t i = 0; i < preds.size() && corrupted < 250; ++i) {
            std::string wrong = "add(12345, 67890)";
            if (serialize(ds[i].program) == wrong) wrong = "add(11111, 22222)";
            preds[i].raw_output = "assistant\n" + wrong;
            ++corrupted;
        }
        ScoreReport corrupt = score(ds, preds);
        bool corrupt_ok = corrupt.program_accuracy == 0.9750;

        // commutative-operand perturbation over 1-step add/multiply programs
        std::vector<ReasoningExample> comm_ds;
        std::vector<PredictionRecord> comm_preds;
        for (const auto& ex : ds) {
            if (ex.program.steps.size() != 1) continue;
            const Step& s = ex.program.steps[0];
            if (s.op != Op::Add && s.op != Op::Multiply) continue;
            Program swapped;
            swapped.steps.push_back({s.op, s.arg2, s.arg1});
            if (serialize(swapped) == serialize(ex.program)) continue;
            comm_ds.push_back(ex);
            comm_preds.push_back({ex.id, "assistant\n" + serialize(swapped)});
        }
        ScoreReport comm = score(comm_ds, comm_preds);
        bool comm_ok = !comm.per_example.empty();
        for (const auto& s : comm.per_example)
            if (s.prog_match || !s.exec_match) comm_ok = false;

        char buf[160];
        snprintf(buf, sizeof(buf),
                 "self %.4f/%.4f, corrupted-250 prog %.4f, %zu commutative swaps",
                 self.program_accuracy, self.execution_accuracy, corrupt.program_accuracy,
                 comm.per_example.size());
        detail = buf;
        ok = self_ok && corrupt_ok && comm_ok;
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(5, "scorer self-consistency", ok, detail);
}

void criterion_6_matcher() {
    bool ok = true;
    std::string detail;
    struct Case {
        const char* gold;
        const char* pred;
        bool expect;
    };
    const Case cases[] = {
        {"1,694", "1694", true},        {"$1,694", "1694", true},
        {"£500", "500", true},          {"€500", "500.0", true},
        {"¥500", "500", true},          {"$2,500.50", "2500.5", true},
        {"1,000,000", "1000000", true}, {"1,694", "1695", false},
        {"$1.7 million", "1700000", true}, {"1.7 million", "1,700,000", true},
        {"250k", "250000", true},       {"3 billion", "3000000000", true},
        {"2 thousand", "2000", true},   {"5m", "5000000", true},
        {"1.7 million", "1800000", false}, {"4.63%", "4.63", true},
        {"4.63", "4.6285714", true},    {"0.0835", "8.35%", true},
        {"8.35%", "0.0835", true},      {"12%", "0.12", true},
        {"12%", "0.13", false},         {"50%", "0.75", false},
        {"3/4", "0.75", true},          {"1/2", "0.5", true},
        {"3/4", "75%", true},           {"2/3", "0.67", true},
        {"3/4", "0.2", false},          {"yes", "Yes.", true},
        {"no", "No", true},             {"yes", "true", true},
        {"no", "false", true},          {"yes", "no", false},
        {"-5", "5", false},             {"-5", "-5.0", true},
        {"0", "-0", true},              {"-0.2", "0.2", false},
        {"0.125", "0.13", true},        {"-0.125", "-0.13", true},
        {"4.6", "4.63", true},          {"4.6", "4.7", false},
        {"1694000000", "1694000000.0", true}, {"2.5", "3", true},
        {"  42 ", "42.", true},         {"n/a", "n/a", true},
    };
    size_t n = sizeof(cases) / sizeof(cases[0]);
    size_t hits = 0;
    for (const Case& c : cases)
        if (answers_match(c.gold, c.pred) == c.expect) ++hits;

    SplitMix64 rng(987);
    const std::string alphabet = "0123456789.,-%$/ yesno millionk";
    size_t sym_ok = 0;
    for (int i = 0; i < 10000; ++i) {
        auto rand_str = [&]() {
            std::string s;
            size_t len = rng.below(12);
            for (size_t j = 0; j < len; ++j) s += alphabet[rng.below(alphabet.size())];
            return s;
        };
        std::string a = rand_str(), b = rand_str();
        if (answers_match(a, b) == answers_match(b, a)) ++sym_ok;
    }
    char buf[96];
    snprintf(buf, sizeof(buf), "%zu/%zu cases, %zu/10000 symmetric, n>=40 %s", hits, n, sym_ok,
             n >= 40 ? "yes" : "no");
    detail = buf;
    ok = hits == n && sym_ok == 10000 && n >= 40;
    report(6, "matcher conformance", ok, detail);
}

void criterion_7_dsl_robustness() {
    bool ok = true;
    std::string detail;

    SplitMix64 rng(31337);
    const std::string alphabet =
        "adsbumltivgrexp_#,()0123456789. \t\"const\xff\x01\xc3\x97nohe";
    size_t outcomes = 0;
    bool overtime = false;
    for (int i = 0; i < 100000; ++i) {
        size_t len = rng.below(41);
        std::string s;
        for (size_t j = 0; j < len; ++j) s += alphabet[rng.below(alphabet.size())];
        auto t0 = std::chrono::steady_clock::now();
        try {
            (void)parse_program(s);
            ++outcomes;
        } catch (const ParseError&) {
            ++outcomes;
        }
        if (seconds_since(t0) > 0.05) overtime = true;
    }

    size_t round_trips = 0;
    for (int i = 0; i < 10000; ++i) {
        Program p;
        size_t len = 1 + rng.below(4);
        for (size_t k = 0; k < len; ++k) {
            Step s;
            s.op = static_cast<Op>(rng.below(6));
            auto operand = [&]() -> Operand {
                if (k > 0 && rng.below(3) == 0) return Operand::step_ref(k - 1);
                if (rng.below(4) == 0) return Operand::constant("const_100");
                double v = double(int64_t(rng.below(2000001)) - 1000000);
                return Operand::literal(v, rng.below(2) != 0);
            };
            s.arg1 = operand();
            s.arg2 = operand();
            p.steps.push_back(std::move(s));
        }
        if (parse_program(serialize(p)) == p) ++round_trips;
    }

    char buf[96];
    snprintf(buf, sizeof(buf), "%zu/100000 fuzz outcomes, %zu/10000 round-trips%s", outcomes,
             round_trips, overtime ? ", slow input" : "");
    detail = buf;
    ok = outcomes == 100000 && round_trips == 10000 && !overtime;
    report(7, "parser robustness", ok, detail);
}

void criterion_8_chat_golden(const std::string& root) {
    bool ok = true;
    std::string detail;
    try {
        auto corpus = load_corpus_jsonl(root + "/tests/golden/export_input.jsonl");

        auto render = [&](bool with_sketch, bool gold) {
            std::string bytes;
            for (const auto& rec : export_chat(corpus, with_sketch, gold))
                bytes += chat_record_to_json(rec).dump() + "\n";
            return bytes;
        };
        std::string no_sketch = render(false, true);
        std::string with_sketch = render(true, false);

        bool sep_ok = true;
        for (const auto& rec : export_chat(corpus, false, true)) {
            size_t n = 0;
            for (size_t p = rec.user.find("[SEP]"); p != std::string::npos;
                 p = rec.user.find("[SEP]", p + 1))
                ++n;
            if (n != 1) sep_ok = false;
            if (rec.system.find("Respond with the program text only.") == std::string::npos)
                sep_ok = false;
        }
        for (const auto& rec : export_chat(corpus, true, false)) {
            size_t n = 0;
            for (size_t p = rec.user.find("[SEP]"); p != std::string::npos;
                 p = rec.user.find("[SEP]", p + 1))
                ++n;
            if (n != 2) sep_ok = false;
            if (rec.assistant) sep_ok = false;
        }

        std::string gold_no = slurp(root + "/tests/golden/chat_no_sketch.jsonl");
        std::string gold_with = slurp(root + "/tests/golden/chat_with_sketch.jsonl");
        ok = sep_ok && no_sketch == gold_no && with_sketch == gold_with;
        detail = ok ? "byte-identical to goldens"
                    : (sep_ok ? "golden file mismatch" : "separator/system mismatch");
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(8, "chat-export conformance", ok, detail);
}

void criterion_9_domain_shift(const std::string& root) {
    bool ok = true;
    std::string detail;
    try {
        const auto& ds = g_corpus10k;
        if (ds.size() != 10000) throw std::runtime_error("10k corpus unavailable");
        Lexicon lex = load_lexicon_file(root + "/data/lexicons/mechanical.tsv", "mechanical");
        if (lex.mapping.size() < 50) throw std::runtime_error("lexicon too small");

        std::set<std::string> sources;
        for (const auto& [s, t] : lex.mapping) sources.insert(s);

        size_t changed_programs = 0, changed_answers = 0, changed_dims = 0,
               leftover_headers = 0;
        for (const auto& ex : ds) {
            ReasoningExample out = shift(ex, lex);
            if (serialize(out.program) != serialize(ex.program)) ++changed_programs;
            if (!(out.answer == ex.answer)) ++changed_answers;
            if (out.table.rows() != ex.table.rows() || out.table.cols() != ex.table.cols())
                ++changed_dims;
            // every mapped header slot must be rewritten
            for (const auto& h : out.table.row_headers)
                if (sources.count(h)) ++leftover_headers;
            for (const auto& h : out.table.col_headers)
                if (sources.count(h)) ++leftover_headers;
        }
        char buf[160];
        snprintf(buf, sizeof(buf),
                 "changed programs=%zu answers=%zu dims=%zu unshifted mapped headers=%zu",
                 changed_programs, changed_answers, changed_dims, leftover_headers);
        detail = buf;
        ok = !changed_programs && !changed_answers && !changed_dims && !leftover_headers;
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "domain-shift preservation", ok, detail);
}

void criterion_10_jargon(const std::string& root) {
    bool ok = true;
    std::string detail;
    try {
        auto book = load_jargon_book(root + "/data/jargon/jargon_book.json");
        // the three operation_k templates, verbatim
        std::map<std::string, std::string> expected_templates = {
            {"operation_0",
             "goodwill + intangibleAssets - otherFinancingActivities + minorityInterest"},
            {"operation_1", "commonStock + commonStock"},
            {"operation_2", "const_100 \xc3\x97 [numberOfShares - costAndExpenses]"},
        };
        bool templates_ok = true;
        for (const auto& [key, templ] : expected_templates) {
            bool found = false;
            for (const auto& e : book)
                if (e.key == key && e.sketch_template == templ) found = true;
            if (!found) templates_ok = false;
        }

        auto tables = load_tables(root + "/data/tables/sample_tables.json");
        GenConfig cfg;
        cfg.seed = 1010;
        cfg.count = 3000;
        cfg.jargon_fraction = 0.3;
        auto corpus = generate_corpus(tables, cfg, book, nullptr, 4);

        size_t jargon_total = 0, opaque = 0, sketch_ok = 0;
        const char* op_words[] = {"sum",     "difference", "ratio",  "change", "times",
                                  "add",     "subtract",   "divide", "multiply", "greater",
                                  "exp",     "product",    "combined"};
        for (const auto& ex : corpus) {
            if (!ex.jargon_key) continue;
            ++jargon_total;
            bool clean = ex.question.find(*ex.jargon_key) != std::string::npos;
            for (const char* w : op_words)
                if (contains_word(ex.question, w)) clean = false;
            if (clean) ++opaque;

            const JargonEntry* entry = nullptr;
            for (const auto& e : book)
                if (e.key == *ex.jargon_key) entry = &e;
            if (entry) {
                std::vector<PhraseReplacement> repl;
                for (const auto& slot : entry->slots)
                    repl.push_back({slot.name, slot.row_header});
                std::string expansion =
                    replace_phrases(entry->sketch_template, repl, false).text;
                if (ex.sketch == expansion) ++sketch_ok;
            }
        }
        char buf[160];
        snprintf(buf, sizeof(buf), "%zu jargon, %zu opaque, %zu sketch-exact, templates %s",
                 jargon_total, opaque, sketch_ok, templates_ok ? "verbatim" : "MISMATCH");
        detail = buf;
        ok = templates_ok && jargon_total > 0 && opaque == jargon_total &&
             sketch_ok == jargon_total;
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(10, "jargon opacity", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    std::string root = argc > 1 ? argv[1] : ".";
    criterion_1_worked_examples();
    criterion_2_generation(root);
    criterion_3_determinism(root);
    criterion_4_anonymization(root);
    criterion_5_scorer();
    criterion_6_matcher();
    criterion_7_dsl_robustness();
    criterion_8_chat_golden(root);
    criterion_9_domain_shift(root);
    criterion_10_jargon(root);
    if (g_failures) {
        printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    printf("all criteria passed\n");
    return 0;
}
