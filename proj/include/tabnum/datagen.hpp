#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabnum/example.hpp"

namespace tabnum {

struct GenConfig {
    uint64_t seed = 0;
    size_t count = 0;
    int len_min = 1;
    int len_max = 4;
    std::map<Op, double> operator_weights = {
        {Op::Add, 1.0},     {Op::Subtract, 1.0}, {Op::Multiply, 1.0},
        {Op::Divide, 1.0},  {Op::Greater, 1.0},  {Op::Exp, 1.0},
    };
    double jargon_fraction = 0.0;
    double magnitude_cap = 1e15;

    void validate() const;  // throws std::invalid_argument
};

struct JargonSlot {
    std::string name;        // concept token in the template
    std::string row_header;  // table row the slot binds to
};

struct JargonEntry {
    std::string key;              // e.g. "operation_2" or "Return On Equity"
    std::string sketch_template;  // infix expression over slot names / const_*
    std::vector<JargonSlot> slots;
};

std::vector<JargonEntry> load_jargon_book(const std::string& path);

struct NoEligibleCells : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProvenanceLost : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientTables : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CellRef {
    size_t row = 0;
    size_t col = 0;
};

// A sampled program with per-operand cell provenance (one optional CellRef
// per arg per step) and its chain-shape label.
struct SampledProgram {
    Program program;
    std::vector<std::array<std::optional<CellRef>, 2>> sources;
    std::string pattern;
};

SampledProgram sample_program(const Table& t, const GenConfig& cfg, SplitMix64& rng);

// Executes and applies the discard rules: any execution error, non-finite
// intermediate, or intermediate magnitude above the cap drops the program.
std::optional<ExecValue> validate_and_execute(const Program& p, const Table& t,
                                              const GenConfig& cfg);

// Value-free infix rendering over row headers; constants render as their
// numeric value. With a jargon entry, the sketch is the entry's template
// expanded over the bound row headers.
std::string derive_sketch(const SampledProgram& sp, const Table& t,
                          const JargonEntry* jargon = nullptr);

std::string derive_template_question(const SampledProgram& sp, const Table& t,
                                     const JargonEntry* jargon, SplitMix64& rng);

struct GenStats {
    size_t attempts = 0;
    size_t emitted = 0;
    size_t discarded_sampling = 0;   // no eligible cells / jargon rows missing
    size_t discarded_execution = 0;  // execution failure or magnitude cap
};

// Program-first generation: emits exactly cfg.count examples, resampling
// across tables on discards, fully deterministic given (cfg.seed, table
// order). Attempt budget is 100 x count; exhausting it throws
// InsufficientTables. threads > 1 runs attempts in parallel with per-attempt
// seeds; output is independent of the degree.
std::vector<ReasoningExample> generate_corpus(
    const std::vector<std::pair<Table, Context>>& tables, const GenConfig& cfg,
    const std::vector<JargonEntry>& jargon_book, GenStats* stats = nullptr,
    unsigned threads = 1);

class ParaphraseClient {
  public:
    virtual ~ParaphraseClient() = default;
    // Returns the rewritten question, or throws std::runtime_error on
    // transport/protocol failure.
    virtual std::string rewrite(const std::string& system_instruction,
                                const std::string& question) = 0;
};

// Deterministic rule-based rewriter: synonym and word-order perturbations,
// keyed off a hash of the question, so the pipeline runs with no network.
std::unique_ptr<ParaphraseClient> make_offline_paraphrase_client();

// Generic HTTP/JSON client: POST {system, question} -> {rewrite}. The bearer
// credential is read from the named environment variable, never a flag.
std::unique_ptr<ParaphraseClient> make_http_paraphrase_client(const std::string& url,
                                                              const std::string& credential_env);

// Replaces the question with the client's rewrite. The rewrite is rejected
// (original kept, flag set) when it drops the jargon key or any header
// phrase present in the template question; client errors also pass the
// example through flagged.
ReasoningExample paraphrase(const ReasoningExample& ex, ParaphraseClient& client);

extern const char* const kParaphraseSystemInstruction;

}  // namespace tabnum
