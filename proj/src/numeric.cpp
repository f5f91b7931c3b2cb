#include "tabnum/numeric.hpp"

#include <cctype>
#include <cmath>

namespace tabnum {

namespace {

const char* const kCurrencyBytes[] = {"$", "£", "€", "¥"};

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

size_t skip_ws(std::string_view s, size_t i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
}

}  // namespace

std::optional<double> parse_plain_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    size_t start = text.front() == '+' ? 1 : 0;
    double v = 0.0;
    auto res = std::from_chars(text.data() + start, text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::optional<ParsedNumber> parse_numeric_text(std::string_view text,
                                               const std::map<std::string, int>& scale_words) {
    ParsedNumber out;
    size_t i = skip_ws(text, 0);

    bool paren = false;
    if (i < text.size() && text[i] == '(') {
        paren = true;
        i = skip_ws(text, i + 1);
    }

    for (const char* cur : kCurrencyBytes) {
        if (starts_with(text.substr(i), cur)) {
            out.currency = true;
            i += std::string_view(cur).size();
            i = skip_ws(text, i);
            break;
        }
    }

    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }

    std::string digits;
    bool seen_digit = false, seen_dot = false;
    int dp = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++dp;
            ++i;
        } else if (c == ',' && seen_digit) {
            ++i;  // thousands separator
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
            digits += c;
            ++i;
        } else {
            break;
        }
    }
    if (!seen_digit) return std::nullopt;

    // optional exponent
    if (i + 1 < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        size_t j = i + 1;
        if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
        size_t k = j;
        while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
        if (k > j) {
            digits.append(text.substr(i, k - i));
            i = k;
        }
    }

    double base = 0.0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), base);
    if (res.ec != std::errc{}) return std::nullopt;

    size_t after_number = i;
    i = skip_ws(text, i);
    if (i < text.size() && text[i] == '%') {
        out.percent = true;
        ++i;
    } else {
        size_t w = i;
        std::string word;
        while (w < text.size() && std::isalpha(static_cast<unsigned char>(text[w]))) {
            word += char(std::tolower(static_cast<unsigned char>(text[w])));
            ++w;
        }
        auto it = scale_words.find(word);
        if (!word.empty() && it != scale_words.end()) {
            out.scale = it->second;
            i = w;
        } else {
            i = after_number;
        }
    }

    if (paren) {
        i = skip_ws(text, i);
        if (i >= text.size() || text[i] != ')') return std::nullopt;
        ++i;
        neg = true;
    }

    out.base = neg ? -base : base;
    out.decimal_places = dp;
    out.value = out.base * std::pow(10.0, out.scale);
    out.consumed = i;
    return out;
}

}  // namespace tabnum
