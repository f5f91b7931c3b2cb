#include "tabnum/textutil.hpp"

namespace tabnum {

namespace {

bool matches_at(std::string_view text, size_t pos, std::string_view phrase, bool ci) {
    if (pos + phrase.size() > text.size()) return false;
    for (size_t i = 0; i < phrase.size(); ++i) {
        char a = text[pos + i];
        char b = phrase[i];
        if (ci ? (ascii_lower(a) != ascii_lower(b)) : (a != b)) return false;
    }
    // whole-phrase: no word character touching either side
    if (pos > 0 && is_word_char(text[pos - 1]) && is_word_char(phrase.front())) return false;
    size_t end = pos + phrase.size();
    if (end < text.size() && is_word_char(text[end]) && is_word_char(phrase.back())) return false;
    return true;
}

}  // namespace

ReplaceResult replace_phrases(std::string_view text, std::vector<PhraseReplacement> phrases,
                              bool case_insensitive) {
    std::sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) {
        if (a.from.size() != b.from.size()) return a.from.size() > b.from.size();
        return a.from < b.from;
    });

    ReplaceResult out;
    out.text.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        bool replaced = false;
        for (const auto& p : phrases) {
            if (p.from.empty()) continue;
            if (matches_at(text, i, p.from, case_insensitive)) {
                out.text += p.to;
                i += p.from.size();
                ++out.count;
                replaced = true;
                break;
            }
        }
        if (!replaced) out.text += text[i++];
    }
    return out;
}

}  // namespace tabnum
