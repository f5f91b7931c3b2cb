#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tabnum {

struct ReasoningExample;

struct TokenPool {
    std::vector<std::string> tokens;  // distinct, order-significant
    std::string pool_id;

    // Throws std::invalid_argument on duplicates or reserved strings
    // ("[SEP]", operator names, "const_", "#").
    void validate() const;
};

TokenPool load_pool_file(const std::string& path, const std::string& pool_id);

struct PoolExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HeaderMap {
    std::map<std::string, std::string> forward;  // header -> token
    std::map<std::string, std::string> inverse;  // token -> header
    uint64_t seed = 0;
    std::string pool_id;
};

// Deterministic given (headers, pool, seed): headers are sorted and assigned
// tokens sampled without replacement.
HeaderMap build_map(const std::set<std::string>& headers, const TokenPool& pool, uint64_t seed);

struct AnonymizeOptions {
    bool include_context = true;  // also replace header phrases in pre/post text
};

// Replaces every mapped header (whole phrase, case-insensitive, longest
// first) in table headers, question, template question, sketch, and
// optionally context. Program and answer are untouched; the map is recorded
// on the example.
ReasoningExample anonymize(const HeaderMap& m, const ReasoningExample& ex,
                           const AnonymizeOptions& opt = {});

// Inverse transform; clears the recorded map.
ReasoningExample deanonymize(const ReasoningExample& ex, const AnonymizeOptions& opt = {});

// Headers to anonymize for one example: row + column headers, plus the
// jargon key when the instance is jargon-opaque.
std::set<std::string> anonymizable_headers(const ReasoningExample& ex);

}  // namespace tabnum
