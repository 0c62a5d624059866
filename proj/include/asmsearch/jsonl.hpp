#pragma once

#include "asmsearch/record.hpp"
#include "asmsearch/retrieval.hpp"

#include <json.hpp>

#include <string>

namespace asmsearch {

// Corpus line schema (JSON-lines, UTF-8), fields exactly:
//   id, source{name,language,body,docstring,body_line_count},
//   assembly_text, profile{compiler,opt_level,stripped}, inline_flag
// A missing docstring serializes as null.
nlohmann::ordered_json pair_record_to_json(const PairRecord& record);
PairRecord pair_record_from_json(const nlohmann::json& j);

std::string pair_record_to_line(const PairRecord& record);
PairRecord pair_record_from_line(const std::string& line);

// Judgments line schema: {id, text, relevant_ids:[...]}
nlohmann::ordered_json query_record_to_json(const QueryRecord& query);
QueryRecord query_record_from_json(const nlohmann::json& j);

nlohmann::ordered_json filter_report_to_json(const FilterReport& report);

} // namespace asmsearch
