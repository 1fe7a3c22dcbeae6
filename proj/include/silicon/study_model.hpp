#pragma once

// Survey instruments, participants, and scoring: scale definitions with
// their bounds and scoring rule, demographic profiles, and the loader for
// the human ground-truth CSV.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace silicon::study {

struct WrongArity : std::invalid_argument {
    WrongArity(std::size_t expected, std::size_t got)
        : std::invalid_argument("expected " + std::to_string(expected) +
                                " responses, got " + std::to_string(got)) {}
};

struct OutOfRange : std::invalid_argument {
    OutOfRange(const std::string& item_id, long long value)
        : std::invalid_argument("value " + std::to_string(value) +
                                " out of range for item " + item_id) {}
};

struct SchemaMismatch : std::runtime_error {
    explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct DuplicateParticipantId : std::runtime_error {
    explicit DuplicateParticipantId(const std::string& id)
        : std::runtime_error("duplicate participant_id: " + id) {}
};

struct ItemDefinition {
    std::string item_id;
    std::string prompt_text;
    int response_min = 0;
    int response_max = 0;
    std::map<int, std::string> anchor_labels;

    bool in_range(int v) const { return v >= response_min && v <= response_max; }
};

enum class ScoringRule { sum, difference_first_minus_second };

inline std::string to_string(ScoringRule rule) {
    return rule == ScoringRule::sum ? "sum" : "difference_first_minus_second";
}

struct ScaleDefinition {
    std::string scale_id;
    std::string name;
    std::vector<ItemDefinition> items;
    ScoringRule scoring = ScoringRule::sum;
    int score_min = 0;
    int score_max = 0;

    void validate() const {
        if (items.empty()) throw SchemaMismatch("scale " + scale_id + " has no items");
        for (const auto& item : items) {
            if (item.response_min >= item.response_max)
                throw SchemaMismatch("item " + item.item_id + " has empty response range");
            for (const auto& [value, label] : item.anchor_labels)
                if (!item.in_range(value))
                    throw SchemaMismatch("anchor label off-range on item " + item.item_id);
        }
        if (score_min >= score_max)
            throw SchemaMismatch("scale " + scale_id + " has empty score range");
        if (scoring == ScoringRule::sum) {
            int lo = 0, hi = 0;
            for (const auto& item : items) {
                lo += item.response_min;
                hi += item.response_max;
            }
            if (lo != score_min || hi != score_max)
                throw SchemaMismatch("sum-scale bounds disagree with item bounds for " + scale_id);
        } else {
            if (items.size() != 2)
                throw SchemaMismatch("difference scale " + scale_id + " needs exactly 2 items");
            if (score_min != items[0].response_min - items[1].response_max ||
                score_max != items[0].response_max - items[1].response_min)
                throw SchemaMismatch("difference-scale bounds disagree with item bounds for " + scale_id);
        }
    }
};

struct DemographicProfile {
    int age = 0;
    std::string gender;
    std::string country_residence;
    std::string education;
    std::string ethnicity;
    std::string income;
    std::string political_identity;
};

struct ParticipantRecord {
    std::string participant_id;
    DemographicProfile demographics;
    // Keyed by (scale_id, item_id).
    std::map<std::pair<std::string, std::string>, int> responses;

    std::optional<int> response(const std::string& scale_id,
                                const std::string& item_id) const {
        auto it = responses.find({scale_id, item_id});
        if (it == responses.end()) return std::nullopt;
        return it->second;
    }
};

struct ScaleScore {
    std::string participant_id;
    std::string scale_id;
    int raw = 0;
    double normalized = 0.0;
};

inline int score_scale(const ScaleDefinition& scale,
                       const std::vector<int>& responses) {
    if (responses.size() != scale.items.size())
        throw WrongArity(scale.items.size(), responses.size());
    for (std::size_t i = 0; i < responses.size(); ++i)
        if (!scale.items[i].in_range(responses[i]))
            throw OutOfRange(scale.items[i].item_id, responses[i]);
    if (scale.scoring == ScoringRule::sum) {
        int total = 0;
        for (int v : responses) total += v;
        return total;
    }
    return responses[0] - responses[1];
}

inline double normalize_score(int raw, const ScaleDefinition& scale) {
    if (raw < scale.score_min || raw > scale.score_max)
        throw OutOfRange(scale.scale_id, raw);
    return static_cast<double>(raw - scale.score_min) /
           static_cast<double>(scale.score_max - scale.score_min);
}

inline ScaleScore score_participant(const ScaleDefinition& scale,
                                    const ParticipantRecord& participant) {
    std::vector<int> responses;
    responses.reserve(scale.items.size());
    for (const auto& item : scale.items) {
        auto v = participant.response(scale.scale_id, item.item_id);
        if (!v) throw WrongArity(scale.items.size(), responses.size());
        responses.push_back(*v);
    }
    const int raw = score_scale(scale, responses);
    return ScaleScore{participant.participant_id, scale.scale_id, raw,
                      normalize_score(raw, scale)};
}

// The two instruments studied. The preference scale is scored as the
// first-listed item minus the second (European-Americans rating minus
// African-Americans rating by default); swap the item order in a custom
// scale document to flip the convention.
inline ScaleDefinition builtin_bjw_scale() {
    ScaleDefinition scale;
    scale.scale_id = "bjw";
    scale.name = "Belief in a Just World";
    scale.scoring = ScoringRule::sum;
    scale.score_min = 6;
    scale.score_max = 36;
    const char* texts[6] = {
        "I feel that people get what they are entitled to have.",
        "I feel that a person's efforts are noticed and rewarded.",
        "I feel that people earn the rewards and punishments they get.",
        "I feel that people who meet with misfortune have brought it on themselves.",
        "I feel that rewards and punishments are fairly given.",
        "I basically feel that the world is a fair place.",
    };
    for (int i = 0; i < 6; ++i) {
        ItemDefinition item;
        item.item_id = "bjw_" + std::to_string(i + 1);
        item.prompt_text = texts[i];
        item.response_min = 1;
        item.response_max = 6;
        item.anchor_labels = {{1, "strongly disagree"}, {6, "strongly agree"}};
        scale.items.push_back(std::move(item));
    }
    scale.validate();
    return scale;
}

inline ScaleDefinition builtin_gut_feelings_scale() {
    ScaleDefinition scale;
    scale.scale_id = "gf";
    scale.name = "Gut Feelings";
    scale.scoring = ScoringRule::difference_first_minus_second;
    scale.score_min = -9;
    scale.score_max = 9;
    ItemDefinition ea;
    ea.item_id = "gf_european_americans";
    ea.prompt_text = "Please rate your gut feelings towards European-Americans.";
    ea.response_min = 1;
    ea.response_max = 10;
    ea.anchor_labels = {{1, "strongly negative"}, {10, "strongly positive"}};
    ItemDefinition aa;
    aa.item_id = "gf_african_americans";
    aa.prompt_text = "Please rate your gut feelings towards African-Americans.";
    aa.response_min = 1;
    aa.response_max = 10;
    aa.anchor_labels = {{1, "strongly negative"}, {10, "strongly positive"}};
    scale.items.push_back(std::move(ea));
    scale.items.push_back(std::move(aa));
    scale.validate();
    return scale;
}

inline std::vector<ScaleDefinition> builtin_scales() {
    return {builtin_bjw_scale(), builtin_gut_feelings_scale()};
}

// ---- scale document (versioned JSON) ----

inline nlohmann::json scales_to_json(const std::vector<ScaleDefinition>& scales) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["scales"] = nlohmann::json::array();
    for (const auto& scale : scales) {
        nlohmann::json s;
        s["scale_id"] = scale.scale_id;
        s["name"] = scale.name;
        s["scoring"] = to_string(scale.scoring);
        s["score_min"] = scale.score_min;
        s["score_max"] = scale.score_max;
        s["items"] = nlohmann::json::array();
        for (const auto& item : scale.items) {
            nlohmann::json j;
            j["item_id"] = item.item_id;
            j["prompt_text"] = item.prompt_text;
            j["response_min"] = item.response_min;
            j["response_max"] = item.response_max;
            for (const auto& [value, label] : item.anchor_labels)
                j["anchor_labels"][std::to_string(value)] = label;
            s["items"].push_back(std::move(j));
        }
        doc["scales"].push_back(std::move(s));
    }
    return doc;
}

inline std::vector<ScaleDefinition> scales_from_json(const nlohmann::json& doc) {
    if (!doc.contains("scales"))
        throw SchemaMismatch("scale document missing 'scales'");
    std::vector<ScaleDefinition> scales;
    for (const auto& s : doc.at("scales")) {
        ScaleDefinition scale;
        scale.scale_id = s.at("scale_id").get<std::string>();
        scale.name = s.at("name").get<std::string>();
        const auto rule = s.at("scoring").get<std::string>();
        if (rule == "sum")
            scale.scoring = ScoringRule::sum;
        else if (rule == "difference_first_minus_second")
            scale.scoring = ScoringRule::difference_first_minus_second;
        else
            throw SchemaMismatch("unknown scoring rule: " + rule);
        scale.score_min = s.at("score_min").get<int>();
        scale.score_max = s.at("score_max").get<int>();
        for (const auto& j : s.at("items")) {
            ItemDefinition item;
            item.item_id = j.at("item_id").get<std::string>();
            item.prompt_text = j.at("prompt_text").get<std::string>();
            item.response_min = j.at("response_min").get<int>();
            item.response_max = j.at("response_max").get<int>();
            if (j.contains("anchor_labels"))
                for (const auto& [key, label] : j.at("anchor_labels").items())
                    item.anchor_labels[std::stoi(key)] = label.get<std::string>();
            scale.items.push_back(std::move(item));
        }
        scale.validate();
        scales.push_back(std::move(scale));
    }
    return scales;
}

// ---- human dataset CSV ----

struct RowError {
    std::size_t row = 0;  // 1-based, header is row 1
    std::string column;
    std::string message;
};

struct LoadResult {
    std::vector<ParticipantRecord> records;
    std::vector<RowError> errors;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline std::optional<long long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t pos = 0;
    try {
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace detail

inline const std::vector<std::string>& human_csv_columns() {
    static const std::vector<std::string> columns = {
        "participant_id", "age", "gender", "country_residence", "education",
        "ethnicity", "income", "political_identity",
        "bjw_1", "bjw_2", "bjw_3", "bjw_4", "bjw_5", "bjw_6",
        "gf_african_americans", "gf_european_americans"};
    return columns;
}

// Loads the human ground-truth CSV. Incomplete or invalid rows are dropped
// and reported with their row numbers; strict callers can treat a nonempty
// error list as fatal.
inline LoadResult load_human_dataset(std::istream& in,
                                     const std::vector<ScaleDefinition>& scales) {
    LoadResult result;
    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch("empty file, header expected");
    const auto header = detail::split_csv_line(line);
    const auto& expected = human_csv_columns();
    if (header != expected) {
        std::string got;
        for (const auto& h : header) got += h + ",";
        throw SchemaMismatch("header mismatch, got: " + got);
    }

    // item column -> (scale_id, item bounds)
    std::map<std::string, std::pair<std::string, const ItemDefinition*>> item_columns;
    for (const auto& scale : scales)
        for (const auto& item : scale.items)
            item_columns[item.item_id] = {scale.scale_id, &item};

    std::map<std::string, std::size_t> seen_ids;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != expected.size()) {
            result.errors.push_back({row_number, "",
                                     "expected " + std::to_string(expected.size()) +
                                         " fields, got " + std::to_string(fields.size())});
            continue;
        }
        ParticipantRecord record;
        record.participant_id = fields[0];
        if (record.participant_id.empty()) {
            result.errors.push_back({row_number, "participant_id", "empty id"});
            continue;
        }
        if (seen_ids.count(record.participant_id))
            throw DuplicateParticipantId(record.participant_id);
        seen_ids[record.participant_id] = row_number;

        bool row_ok = true;
        const auto age = detail::parse_int(fields[1]);
        if (!age || *age <= 0) {
            result.errors.push_back({row_number, "age", "invalid age: " + fields[1]});
            row_ok = false;
        } else {
            record.demographics.age = static_cast<int>(*age);
        }
        record.demographics.gender = fields[2];
        record.demographics.country_residence = fields[3];
        record.demographics.education = fields[4];
        record.demographics.ethnicity = fields[5];
        record.demographics.income = fields[6];
        record.demographics.political_identity = fields[7];
        for (std::size_t c = 2; c < 8 && row_ok; ++c) {
            if (fields[c].empty()) {
                result.errors.push_back({row_number, expected[c], "missing value"});
                row_ok = false;
            }
        }
        for (std::size_t c = 8; c < expected.size(); ++c) {
            const auto& column = expected[c];
            const auto it = item_columns.find(column);
            if (it == item_columns.end()) continue;
            const auto value = detail::parse_int(fields[c]);
            if (!value || !it->second.second->in_range(static_cast<int>(*value))) {
                result.errors.push_back(
                    {row_number, column, "value out of range: " + fields[c]});
                row_ok = false;
                continue;
            }
            record.responses[{it->second.first, column}] = static_cast<int>(*value);
        }
        if (row_ok && record.responses.size() == item_columns.size())
            result.records.push_back(std::move(record));
        else if (row_ok)
            result.errors.push_back({row_number, "", "incomplete item responses"});
    }
    return result;
}

inline LoadResult load_human_dataset(const std::string& path,
                                     const std::vector<ScaleDefinition>& scales) {
    std::ifstream in(path);
    if (!in) throw SchemaMismatch("cannot open dataset file: " + path);
    return load_human_dataset(in, scales);
}

}  // namespace silicon::study
