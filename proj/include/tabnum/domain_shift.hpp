#pragma once

#include <string>
#include <vector>

#include "tabnum/example.hpp"

namespace tabnum {

struct Lexicon {
    std::string domain_name;
    // Injective source phrase -> target phrase; no target equals a different
    // source (single-pass substitution has no swap cycles).
    std::vector<std::pair<std::string, std::string>> mapping;

    void validate() const;  // throws std::invalid_argument
};

// TSV "source<TAB>target", '#' comments, UTF-8.
Lexicon load_lexicon_file(const std::string& path, const std::string& domain_name);

struct ShiftOptions {
    bool include_context = true;
};

struct ShiftStats {
    size_t replaced_headers = 0;       // row/col header slots rewritten
    size_t passed_through_headers = 0; // header slots with no mapping
    size_t replaced_phrases = 0;       // total phrase substitutions, all fields
};

// Replaces every source phrase (whole phrase, longest first) in headers,
// question, sketch, and optionally context. Table shape, program, and answer
// are unchanged; the lexicon name is recorded in provenance.
ReasoningExample shift(const ReasoningExample& ex, const Lexicon& lex,
                       ShiftStats* stats = nullptr, const ShiftOptions& opt = {});

}  // namespace tabnum
