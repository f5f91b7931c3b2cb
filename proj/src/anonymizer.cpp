#include "tabnum/anonymizer.hpp"

#include <fstream>

#include "tabnum/example.hpp"
#include "tabnum/textutil.hpp"

namespace tabnum {

void TokenPool::validate() const {
    std::set<std::string> seen;
    for (const auto& t : tokens) {
        if (t.empty()) throw std::invalid_argument("pool '" + pool_id + "': empty token");
        if (!seen.insert(t).second)
            throw std::invalid_argument("pool '" + pool_id + "': duplicate token '" + t + "'");
        if (t == "[SEP]" || t == "none" || t.rfind("const_", 0) == 0 ||
            t.find('#') != std::string::npos)
            throw std::invalid_argument("pool '" + pool_id + "': reserved token '" + t + "'");
        static const char* const ops[] = {"add", "subtract", "sub", "multiply", "mul",
                                          "divide", "div", "exp", "greater", "table_sum",
                                          "table_average", "table_max", "table_min"};
        for (const char* op : ops)
            if (t == op)
                throw std::invalid_argument("pool '" + pool_id + "': reserved token '" + t + "'");
    }
}

TokenPool load_pool_file(const std::string& path, const std::string& pool_id) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pool file: " + path);
    TokenPool pool;
    pool.pool_id = pool_id;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) pool.tokens.push_back(line);
    }
    pool.validate();
    return pool;
}

HeaderMap build_map(const std::set<std::string>& headers, const TokenPool& pool, uint64_t seed) {
    if (headers.size() > pool.tokens.size())
        throw PoolExhausted("pool '" + pool.pool_id + "' has " +
                            std::to_string(pool.tokens.size()) + " tokens, need " +
                            std::to_string(headers.size()));

    // partial Fisher-Yates over pool indices; headers iterate in sorted order
    std::vector<size_t> idx(pool.tokens.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    SplitMix64 rng(mix_seed(seed, fnv1a64(pool.pool_id)));

    HeaderMap m;
    m.seed = seed;
    m.pool_id = pool.pool_id;
    size_t k = 0;
    for (const std::string& h : headers) {
        size_t j = k + rng.below(idx.size() - k);
        std::swap(idx[k], idx[j]);
        const std::string& tok = pool.tokens[idx[k]];
        m.forward[h] = tok;
        m.inverse[tok] = h;
        ++k;
    }
    return m;
}

std::set<std::string> anonymizable_headers(const ReasoningExample& ex) {
    std::set<std::string> headers(ex.table.row_headers.begin(), ex.table.row_headers.end());
    headers.insert(ex.table.col_headers.begin(), ex.table.col_headers.end());
    if (ex.jargon_key) headers.insert(*ex.jargon_key);
    return headers;
}

namespace {

ReasoningExample apply_mapping(const std::map<std::string, std::string>& mapping,
                               const ReasoningExample& ex, const AnonymizeOptions& opt) {
    std::vector<PhraseReplacement> phrases;
    phrases.reserve(mapping.size());
    for (const auto& [from, to] : mapping) phrases.push_back({from, to});

    ReasoningExample out = ex;
    auto rewrite = [&](std::string& s) { s = replace_phrases(s, phrases).text; };

    for (auto& h : out.table.row_headers) rewrite(h);
    for (auto& h : out.table.col_headers) rewrite(h);
    rewrite(out.question);
    rewrite(out.template_question);
    rewrite(out.sketch);
    if (out.jargon_key) rewrite(*out.jargon_key);
    if (opt.include_context) {
        for (auto& s : out.context.pre_text) rewrite(s);
        for (auto& s : out.context.post_text) rewrite(s);
    }
    return out;
}

}  // namespace

ReasoningExample anonymize(const HeaderMap& m, const ReasoningExample& ex,
                           const AnonymizeOptions& opt) {
    ReasoningExample out = apply_mapping(m.forward, ex, opt);
    out.header_map = m;
    return out;
}

ReasoningExample deanonymize(const ReasoningExample& ex, const AnonymizeOptions& opt) {
    if (!ex.header_map) return ex;
    HeaderMap m = *ex.header_map;
    ReasoningExample out = apply_mapping(m.inverse, ex, opt);
    out.header_map.reset();
    return out;
}

}  // namespace tabnum
