#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace tabnum {

// Deterministic 64-bit PRNG (splitmix64). Used everywhere randomness is
// needed so that output bytes do not depend on platform or stdlib.
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (~n + 1) % n;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    // Uniform double in [0, 1).
    double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    SplitMix64 rng(a ^ (b * 0x9e3779b97f4a7c15ULL) ^ 0x5851f42d4c957f2dULL);
    rng.next();
    return rng.next();
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Shortest decimal string that round-trips to the same double.
inline std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Half-away-from-zero rounding of x at d decimal places, returned as the
// scaled integer (x * 10^d rounded). Exact as long as the scaled magnitude
// fits the long double mantissa.
inline long double round_scaled(double x, int d) {
    long double m = fabsl((long double)x);
    for (int i = 0; i < d; ++i) m *= 10.0L;
    long double r = floorl(m + 0.5L);
    return x < 0 ? -r : r;
}

inline bool equal_after_rounding(double a, double b, int d) {
    return round_scaled(a, d) == round_scaled(b, d);
}

// Scale-word table shared by cell parsing and answer normalization.
// Values are powers of ten.
inline const std::map<std::string, int>& default_scale_words() {
    static const std::map<std::string, int> words = {
        {"thousand", 3}, {"k", 3}, {"million", 6}, {"m", 6}, {"billion", 9}, {"bn", 9},
    };
    return words;
}

struct ParsedNumber {
    double value = 0.0;          // after applying sign and scale
    double base = 0.0;           // the literal digits as written
    int scale = 0;               // power of ten from a scale word
    int decimal_places = 0;      // digits after '.' in the surface form
    bool percent = false;
    bool currency = false;
    size_t consumed = 0;         // bytes of input consumed
};

// Parses a human-written numeric string: optional currency symbol, commas,
// parenthesized negatives, a trailing '%' or scale word. Returns nothing if
// the text does not start with a number once decorations are removed.
std::optional<ParsedNumber> parse_numeric_text(std::string_view text,
                                               const std::map<std::string, int>& scale_words = default_scale_words());

// Strict parse of a plain signed decimal ("-12.5", "3e2"). Whole string.
std::optional<double> parse_plain_decimal(std::string_view text);

}  // namespace tabnum
