#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabnum/answer_match.hpp"
#include "tabnum/example.hpp"

namespace tabnum {

struct PredictionRecord {
    std::string example_id;
    std::string raw_output;  // full decoded model text
};

struct EmptyExtraction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicatePrediction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownExampleId : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Takes the text after the last case-insensitive "assistant" (whole input
// when absent), strips leading punctuation and whitespace, and returns the
// first non-empty line. Throws EmptyExtraction when nothing remains.
std::string extract_program(const std::string& raw);

struct PerExampleScore {
    std::string id;
    std::string extracted_program;
    bool parse_ok = false;
    bool prog_match = false;
    bool exec_match = false;
    std::string error;
};

struct ScoreReport {
    size_t n = 0;
    double program_accuracy = 0.0;
    double execution_accuracy = 0.0;
    std::vector<PerExampleScore> per_example;  // ordered by example id
    std::string config_digest;
};

// Program accuracy: byte equality between the extracted prediction and the
// canonical gold serialization. Execution accuracy: the tolerant numeric
// match between the executed prediction and the gold answer; unparseable or
// failing programs score exec-wrong. Missing predictions score wrong on both.
ScoreReport score(const std::vector<ReasoningExample>& dataset,
                  const std::vector<PredictionRecord>& preds,
                  const MatchConfig& match_cfg = {});

struct ChatRecord {
    std::string system;
    std::string user;
    std::optional<std::string> assistant;
};

extern const char* const kChatSystemMessage;

// user = question [SEP] context+linearized table [(SEP) sketch]. Byte-stable
// across runs.
ChatRecord export_chat_record(const ReasoningExample& ex, bool with_sketch, bool include_gold);

std::vector<ChatRecord> export_chat(const std::vector<ReasoningExample>& dataset,
                                    bool with_sketch, bool include_gold);

}  // namespace tabnum
