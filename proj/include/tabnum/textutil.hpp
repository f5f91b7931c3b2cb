#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tabnum {

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    return true;
}

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct PhraseReplacement {
    std::string from;
    std::string to;
};

struct ReplaceResult {
    std::string text;
    size_t count = 0;
};

// Whole-phrase replacement, longest phrase first, single left-to-right pass
// so inserted text is never re-matched. A match must not touch adjacent word
// characters. Matching is case-insensitive when requested; the replacement
// string is inserted verbatim.
ReplaceResult replace_phrases(std::string_view text,
                              std::vector<PhraseReplacement> phrases,
                              bool case_insensitive = true);

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace tabnum
