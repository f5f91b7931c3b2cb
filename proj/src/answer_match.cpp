#include "tabnum/answer_match.hpp"

#include <algorithm>
#include <cctype>

#include "tabnum/textutil.hpp"

namespace tabnum {

namespace {

bool is_strippable(char c) {
    switch (c) {
        case '"':
        case '\'':
        case '.':
        case ',':
        case ';':
        case ':':
        case '!':
        case '?':
        case ' ':
        case '\t':
        case '\n':
        case '\r':
            return true;
        default:
            return false;
    }
}

std::string strip_surrounding(std::string s) {
    size_t b = 0, e = s.size();
    while (b < e && is_strippable(s[b])) ++b;
    while (e > b && is_strippable(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::optional<std::pair<double, int>> try_fraction(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= s.size()) return std::nullopt;
    auto a = parse_plain_decimal(std::string_view(s).substr(0, slash));
    auto b = parse_plain_decimal(std::string_view(s).substr(slash + 1));
    if (!a || !b || *b == 0.0) return std::nullopt;
    auto dp = [](std::string_view part) {
        size_t dot = part.find('.');
        return dot == std::string_view::npos ? 0 : int(part.size() - dot - 1);
    };
    int places = std::max(dp(std::string_view(s).substr(0, slash)),
                          dp(std::string_view(s).substr(slash + 1)));
    return std::make_pair(*a / *b, places);
}

bool signs_compatible(double a, double b) {
    // zero is sign-compatible with anything
    return !((a > 0 && b < 0) || (a < 0 && b > 0));
}

}  // namespace

NormalizedAnswer normalize(const std::string& text, const MatchConfig& cfg) {
    NormalizedAnswer out;
    out.cleaned = strip_surrounding(to_lower(text));

    if (out.cleaned == "yes" || out.cleaned == "true") {
        out.kind = NormalizedAnswer::Kind::Boolean;
        out.truth = true;
        return out;
    }
    if (out.cleaned == "no" || out.cleaned == "false") {
        out.kind = NormalizedAnswer::Kind::Boolean;
        out.truth = false;
        return out;
    }

    if (auto frac = try_fraction(out.cleaned)) {
        out.kind = NormalizedAnswer::Kind::Number;
        out.number = frac->first;
        out.decimal_places = frac->second;
        return out;
    }

    if (auto num = parse_numeric_text(out.cleaned, cfg.scale_words)) {
        out.kind = NormalizedAnswer::Kind::Number;
        out.number = num->value;
        out.decimal_places = num->decimal_places;
        out.had_percent_sign = num->percent;
        return out;
    }

    return out;  // NonNumeric fallback
}

bool answers_match(const std::string& gold, const std::string& pred, const MatchConfig& cfg) {
    NormalizedAnswer g = normalize(gold, cfg);
    NormalizedAnswer p = normalize(pred, cfg);
    using Kind = NormalizedAnswer::Kind;

    if (g.kind == Kind::Boolean && p.kind == Kind::Boolean) return g.truth == p.truth;

    if (g.kind == Kind::Number && p.kind == Kind::Number) {
        auto attempt = [](double gv, int gd, double pv, int pd) {
            if (!signs_compatible(gv, pv)) return false;
            return equal_after_rounding(gv, pv, std::min(gd, pd));
        };
        if (attempt(g.number, g.decimal_places, p.number, p.decimal_places)) return true;
        if (g.had_percent_sign != p.had_percent_sign) {
            // retry with the percent side rescaled by 1/100
            double gv = g.number, pv = p.number;
            int gd = g.decimal_places, pd = p.decimal_places;
            if (g.had_percent_sign) {
                gv /= 100.0;
                gd += 2;
            } else {
                pv /= 100.0;
                pd += 2;
            }
            return attempt(gv, gd, pv, pd);
        }
        return false;
    }

    if (g.kind == Kind::NonNumeric && p.kind == Kind::NonNumeric)
        return !g.cleaned.empty() && g.cleaned == p.cleaned;

    return false;
}

}  // namespace tabnum
