#pragma once

#include <map>
#include <string>
#include <vector>

#include "tabnum/numeric.hpp"

namespace tabnum {

struct NormalizedAnswer {
    enum class Kind { Number, Boolean, NonNumeric };

    Kind kind = Kind::NonNumeric;
    double number = 0.0;
    bool truth = false;
    std::string cleaned;       // lowercased, stripped surface form
    bool had_percent_sign = false;
    int decimal_places = 0;
};

struct MatchConfig {
    std::vector<std::string> currency_symbols = {"$", "£", "€", "¥"};
    std::map<std::string, int> scale_words = default_scale_words();
};

// Lowercases, strips commas / currency symbols / scale words (applying the
// multiplier) / surrounding punctuation, then interprets percents, fractions
// ("3/4"), yes/no/true/false, and leading signed decimals. Never fails;
// NonNumeric is the fallback.
NormalizedAnswer normalize(const std::string& text, const MatchConfig& cfg = {});

// Number vs Number: same sign (zero compatible with both) and equality after
// half-away-from-zero rounding at min(decimal places). If exactly one side
// carried '%', the comparison is retried with that side divided by 100.
bool answers_match(const std::string& gold, const std::string& pred, const MatchConfig& cfg = {});

}  // namespace tabnum
