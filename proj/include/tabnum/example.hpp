#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tabnum/anonymizer.hpp"
#include "tabnum/program.hpp"
#include "tabnum/table.hpp"

namespace tabnum {

struct ReasoningExample {
    std::string id;
    Table table;
    Context context;
    std::string question;           // possibly paraphrased
    std::string template_question;  // rule-generated form
    Program program;
    std::string sketch;
    ExecValue answer;
    std::optional<HeaderMap> header_map;
    std::optional<std::string> jargon_key;
    uint64_t gen_seed = 0;
    std::string pattern;  // chain shape label ("sum", "percent_change", ...)
    bool paraphrase_rejected = false;
    std::optional<std::string> lexicon_domain;  // set by domain shift
};

}  // namespace tabnum
