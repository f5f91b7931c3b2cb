#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tabnum/eval.hpp"
#include "tabnum/example.hpp"

namespace tabnum {

using json = nlohmann::json;

json table_to_json(const Table& t, const Context& ctx);
std::pair<Table, Context> table_from_json(const json& j);

// Accepts a single table object, an array of tables, or a directory of
// *.json files (sorted by filename).
std::vector<std::pair<Table, Context>> load_tables(const std::string& path);

json example_to_json(const ReasoningExample& ex);
ReasoningExample example_from_json(const json& j);

std::string example_to_jsonl_line(const ReasoningExample& ex);

std::vector<ReasoningExample> load_corpus_jsonl(const std::string& path);
void write_corpus_jsonl(const std::string& path, const std::vector<ReasoningExample>& corpus);

std::vector<PredictionRecord> load_predictions_jsonl(const std::string& path);

json report_to_json(const ScoreReport& report);
json chat_record_to_json(const ChatRecord& rec);

}  // namespace tabnum
