#include "tabnum/domain_shift.hpp"

#include <fstream>
#include <map>
#include <set>

#include "tabnum/textutil.hpp"

namespace tabnum {

void Lexicon::validate() const {
    if (domain_name.empty()) throw std::invalid_argument("lexicon has no domain name");
    std::set<std::string> sources, targets;
    for (const auto& [src, dst] : mapping) {
        if (src.empty() || dst.empty())
            throw std::invalid_argument("lexicon '" + domain_name + "': empty phrase");
        if (!sources.insert(to_lower(src)).second)
            throw std::invalid_argument("lexicon '" + domain_name + "': duplicate source '" +
                                        src + "'");
        if (!targets.insert(to_lower(dst)).second)
            throw std::invalid_argument("lexicon '" + domain_name + "': duplicate target '" +
                                        dst + "'");
    }
    // a target equal to a different source would re-trigger on a second pass;
    // single-pass substitution makes order-dependence a latent bug, so reject
    for (const auto& [src, dst] : mapping) {
        std::string ld = to_lower(dst);
        if (ld != to_lower(src) && sources.count(ld))
            throw std::invalid_argument("lexicon '" + domain_name + "': target '" + dst +
                                        "' collides with a source phrase");
    }
}

Lexicon load_lexicon_file(const std::string& path, const std::string& domain_name) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
    Lexicon lex;
    lex.domain_name = domain_name;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw std::runtime_error("lexicon '" + path + "': line is not tab-separated: " + line);
        lex.mapping.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    lex.validate();
    return lex;
}

ReasoningExample shift(const ReasoningExample& ex, const Lexicon& lex, ShiftStats* stats,
                       const ShiftOptions& opt) {
    std::vector<PhraseReplacement> phrases;
    phrases.reserve(lex.mapping.size());
    for (const auto& [src, dst] : lex.mapping) phrases.push_back({src, dst});

    ShiftStats local;
    ShiftStats& st = stats ? *stats : local;
    st = ShiftStats{};

    ReasoningExample out = ex;
    auto rewrite = [&](std::string& s) {
        ReplaceResult r = replace_phrases(s, phrases);
        st.replaced_phrases += r.count;
        bool changed = r.count > 0;
        s = std::move(r.text);
        return changed;
    };

    for (auto& h : out.table.row_headers)
        rewrite(h) ? ++st.replaced_headers : ++st.passed_through_headers;
    for (auto& h : out.table.col_headers)
        rewrite(h) ? ++st.replaced_headers : ++st.passed_through_headers;
    rewrite(out.question);
    rewrite(out.template_question);
    rewrite(out.sketch);
    if (out.jargon_key) rewrite(*out.jargon_key);
    if (opt.include_context) {
        for (auto& s : out.context.pre_text) rewrite(s);
        for (auto& s : out.context.post_text) rewrite(s);
    }
    out.lexicon_domain = lex.domain_name;
    return out;
}

}  // namespace tabnum
