#include "asmsearch/jsonl.hpp"

namespace asmsearch {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json pair_record_to_json(const PairRecord& record) {
    ordered_json source;
    source["name"] = record.source.name;
    source["language"] = to_string(record.source.language);
    source["body"] = record.source.body;
    if (record.source.docstring)
        source["docstring"] = *record.source.docstring;
    else
        source["docstring"] = nullptr;
    source["body_line_count"] = record.source.body_line_count;

    ordered_json profile;
    profile["compiler"] = to_string(record.profile.compiler);
    profile["opt_level"] = to_string(record.profile.opt_level);
    profile["stripped"] = record.profile.stripped;

    ordered_json j;
    j["id"] = record.id;
    j["source"] = std::move(source);
    j["assembly_text"] = record.assembly_text;
    j["profile"] = std::move(profile);
    j["inline_flag"] = record.inline_flag;
    return j;
}

PairRecord pair_record_from_json(const json& j) {
    PairRecord record;
    record.id = j.at("id").get<std::string>();
    const json& source = j.at("source");
    record.source.name = source.at("name").get<std::string>();
    record.source.language =
        language_from_string(source.at("language").get<std::string>());
    record.source.body = source.at("body").get<std::string>();
    if (source.contains("docstring") && !source.at("docstring").is_null())
        record.source.docstring = source.at("docstring").get<std::string>();
    if (source.contains("body_line_count"))
        record.source.body_line_count =
            source.at("body_line_count").get<std::size_t>();
    else
        record.source.body_line_count = count_body_lines(record.source.body);
    record.assembly_text = j.at("assembly_text").get<std::string>();
    if (j.contains("profile")) {
        const json& profile = j.at("profile");
        record.profile.compiler =
            compiler_from_string(profile.at("compiler").get<std::string>());
        record.profile.opt_level =
            opt_level_from_string(profile.at("opt_level").get<std::string>());
        record.profile.stripped = profile.at("stripped").get<bool>();
    }
    record.inline_flag = j.value("inline_flag", false);
    return record;
}

std::string pair_record_to_line(const PairRecord& record) {
    return pair_record_to_json(record).dump();
}

PairRecord pair_record_from_line(const std::string& line) {
    return pair_record_from_json(json::parse(line));
}

ordered_json query_record_to_json(const QueryRecord& query) {
    ordered_json j;
    j["id"] = query.id;
    j["text"] = query.text;
    j["relevant_ids"] = query.relevant_ids; // std::set keeps these sorted
    return j;
}

QueryRecord query_record_from_json(const json& j) {
    QueryRecord query;
    query.id = j.at("id").get<std::string>();
    query.text = j.value("text", std::string());
    for (const auto& id : j.at("relevant_ids"))
        query.relevant_ids.insert(id.get<std::string>());
    if (query.relevant_ids.empty())
        throw std::invalid_argument("query " + query.id +
                                    " has no relevant ids");
    return query;
}

ordered_json filter_report_to_json(const FilterReport& report) {
    ordered_json j;
    j["input"] = report.input;
    j["output"] = report.output;
    j["dropped_inline"] = report.dropped_inline;
    j["dropped_short"] = report.dropped_short;
    return j;
}

} // namespace asmsearch
