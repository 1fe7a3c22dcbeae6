#pragma once

// Turns raw completions into validated item ratings and assembles
// per-configuration datasets under the exclusion rules: a participant is
// kept only if every unit covering their items parsed to a valid rating,
// configurations below the completeness threshold are dropped, and
// zero-variance scales are flagged out of correlation-based analyses.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "silicon/prompt_builder.hpp"
#include "silicon/study_model.hpp"

namespace silicon::intake {

struct EmptyDataset : std::invalid_argument {
    EmptyDataset() : std::invalid_argument("config dataset has no rows") {}
};

enum class Outcome { valid, refusal, unparseable, out_of_range, nonsense };

inline std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::valid: return "valid";
        case Outcome::refusal: return "refusal";
        case Outcome::unparseable: return "unparseable";
        case Outcome::out_of_range: return "out_of_range";
        default: return "nonsense";
    }
}

struct ParsedResponse {
    std::string unit_id;
    Outcome outcome = Outcome::unparseable;
    std::map<std::string, int> ratings;  // present iff valid
};

// Refusal phrase list, matched case-insensitively. Versioned data so runs
// record which rule set classified their responses.
struct RefusalPhrases {
    std::string version = "refusals-v1";
    std::vector<std::string> phrases = {
        "i can't", "i cannot", "i can not", "i won't", "i will not",
        "i'm unable", "i am unable", "i'm not able", "i am not able",
        "unable to provide", "cannot provide", "can't provide",
        "cannot assign", "can't assign", "i refuse", "i must decline",
        "i'm sorry, but", "i am sorry, but", "as an ai",
        "not appropriate for me", "i don't feel comfortable",
        "i do not feel comfortable",
    };

    bool matches(const std::string& text) const {
        std::string lower(text);
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        for (const auto& phrase : phrases)
            if (lower.find(phrase) != std::string::npos) return true;
        return false;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline std::optional<std::map<std::string, int>> json_object_ratings(
    const std::string& text, const prompt::ResponseSchema& schema) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    if (!j.is_object() || j.size() != schema.ranges.size()) return std::nullopt;
    std::map<std::string, int> ratings;
    for (const auto& [key, value] : j.items()) {
        if (!schema.ranges.count(key)) return std::nullopt;
        if (value.is_number_integer())
            ratings[key] = value.get<int>();
        else if (value.is_number_float() &&
                 value.get<double>() == static_cast<double>(
                                            static_cast<int>(value.get<double>())))
            ratings[key] = static_cast<int>(value.get<double>());
        else if (value.is_string()) {
            try {
                std::size_t pos = 0;
                const int v = std::stoi(value.get<std::string>(), &pos);
                if (pos != value.get<std::string>().size()) return std::nullopt;
                ratings[key] = v;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        } else {
            return std::nullopt;
        }
    }
    return ratings;
}

inline std::vector<int> all_integers(const std::string& text) {
    static const std::regex number_re(R"((-?\d+))");
    std::vector<int> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), number_re);
         it != std::sregex_iterator(); ++it) {
        try {
            out.push_back(std::stoi((*it)[1].str()));
        } catch (const std::exception&) {
            // overflow; skip
        }
    }
    return out;
}

// Lenient extraction: embedded JSON object, then item-id labels, then
// "N out of M" phrasing, then ordinal assignment when the integer count
// matches the item count.
inline std::optional<std::map<std::string, int>> lenient_ratings(
    const std::string& text, const prompt::ResponseSchema& schema) {
    const auto open = text.find('{');
    const auto close = text.rfind('}');
    if (open != std::string::npos && close != std::string::npos && close > open)
        if (auto embedded = json_object_ratings(text.substr(open, close - open + 1), schema))
            return embedded;

    std::map<std::string, int> ratings;
    std::string remainder = text;
    for (const auto& [item_id, range] : schema.ranges) {
        const std::regex labeled(item_id + R"(\W{0,3}(-?\d+))",
                                 std::regex::icase);
        std::smatch m;
        if (std::regex_search(remainder, m, labeled)) ratings[item_id] = std::stoi(m[1]);
    }
    if (ratings.size() == schema.ranges.size()) return ratings;

    if (schema.ranges.size() == 1) {
        const auto& item_id = schema.ranges.begin()->first;
        static const std::regex out_of(R"((-?\d+)\s*(?:out of|/)\s*\d+)",
                                       std::regex::icase);
        std::smatch m;
        if (std::regex_search(text, m, out_of)) return {{{item_id, std::stoi(m[1])}}};
        const auto numbers = all_integers(text);
        if (numbers.size() == 1) return {{{item_id, numbers[0]}}};
        return std::nullopt;
    }

    // drop item-id tokens before counting so digits inside labels (e.g. the
    // "1" in "bjw_1") cannot satisfy the ordinal count-match
    std::string stripped = text;
    for (const auto& [item_id, range] : schema.ranges) {
        const std::regex label(item_id, std::regex::icase);
        stripped = std::regex_replace(stripped, label, " ");
    }
    const auto numbers = all_integers(stripped);
    if (numbers.size() == schema.ranges.size()) {
        std::map<std::string, int> ordinal;
        std::size_t i = 0;
        for (const auto& [item_id, range] : schema.ranges) ordinal[item_id] = numbers[i++];
        return ordinal;
    }
    return std::nullopt;
}

}  // namespace detail

// Total, deterministic classification. Precedence:
// strict parse > refusal > lenient parse > out_of_range > unparseable,
// with nonsense for nonempty text carrying no integers and no refusal.
inline ParsedResponse parse_ratings(const std::string& raw_text,
                                    const prompt::PromptUnit& unit,
                                    const RefusalPhrases& refusals = {}) {
    ParsedResponse parsed;
    parsed.unit_id = unit.unit_id;

    auto finish_with = [&](std::map<std::string, int> ratings) {
        for (const auto& [item_id, value] : ratings) {
            const auto [lo, hi] = unit.response_schema.ranges.at(item_id);
            if (value < lo || value > hi) {
                parsed.outcome = Outcome::out_of_range;
                return;
            }
        }
        parsed.outcome = Outcome::valid;
        parsed.ratings = std::move(ratings);
    };

    const std::string text = detail::trim(raw_text);
    if (auto strict = detail::json_object_ratings(text, unit.response_schema)) {
        finish_with(std::move(*strict));
        return parsed;
    }
    if (refusals.matches(text)) {
        parsed.outcome = Outcome::refusal;
        return parsed;
    }
    if (auto lenient = detail::lenient_ratings(text, unit.response_schema)) {
        finish_with(std::move(*lenient));
        return parsed;
    }
    if (!text.empty() && detail::all_integers(text).empty())
        parsed.outcome = Outcome::nonsense;
    else
        parsed.outcome = Outcome::unparseable;
    return parsed;
}

struct DatasetRow {
    std::string participant_id;
    std::map<std::string, int> ratings;  // all 8 items
    std::map<std::string, study::ScaleScore> scores;  // by scale_id
};

struct ConfigDataset {
    std::string config_id;
    std::vector<DatasetRow> rows;
    std::map<std::string, Outcome> exclusion_annotations;  // worst outcome per participant
    std::size_t attempted_participants = 0;
    double completeness_fraction = 0.0;
};

struct ExclusionReport {
    // config_id -> outcome name -> unit count
    std::map<std::string, std::map<std::string, std::size_t>> outcome_counts;
    std::vector<std::string> configs_excluded_by_threshold;
    std::map<std::pair<std::string, std::string>, bool> zero_variance_flags;
};

// Retains a participant iff every unit of their plan parsed valid; scale
// scores are computed from the pooled item ratings.
inline ConfigDataset assemble_config_dataset(
    const std::string& config_id,
    const std::map<std::string, std::vector<ParsedResponse>>& parsed_by_participant,
    const std::vector<study::ParticipantRecord>& participants,
    const std::vector<study::ScaleDefinition>& scales) {
    std::size_t expected_items = 0;
    for (const auto& scale : scales) expected_items += scale.items.size();

    ConfigDataset dataset;
    dataset.config_id = config_id;
    dataset.attempted_participants = participants.size();
    for (const auto& participant : participants) {
        const auto it = parsed_by_participant.find(participant.participant_id);
        Outcome worst = Outcome::valid;
        std::map<std::string, int> ratings;
        if (it != parsed_by_participant.end()) {
            for (const auto& parsed : it->second) {
                if (parsed.outcome == Outcome::valid) {
                    for (const auto& [item_id, value] : parsed.ratings)
                        ratings[item_id] = value;
                } else {
                    worst = parsed.outcome;
                }
            }
        } else {
            worst = Outcome::unparseable;
        }
        if (worst == Outcome::valid && ratings.size() != expected_items)
            worst = Outcome::unparseable;
        dataset.exclusion_annotations[participant.participant_id] = worst;
        if (worst != Outcome::valid) continue;

        DatasetRow row;
        row.participant_id = participant.participant_id;
        row.ratings = std::move(ratings);
        bool scored = true;
        for (const auto& scale : scales) {
            std::vector<int> responses;
            for (const auto& item : scale.items) responses.push_back(row.ratings.at(item.item_id));
            try {
                const int raw = study::score_scale(scale, responses);
                row.scores[scale.scale_id] =
                    study::ScaleScore{row.participant_id, scale.scale_id, raw,
                                      study::normalize_score(raw, scale)};
            } catch (const study::OutOfRange&) {
                scored = false;
                break;
            }
        }
        if (!scored) {
            dataset.exclusion_annotations[row.participant_id] = Outcome::out_of_range;
            continue;
        }
        dataset.rows.push_back(std::move(row));
    }
    dataset.completeness_fraction =
        participants.empty()
            ? 0.0
            : static_cast<double>(dataset.rows.size()) /
                  static_cast<double>(participants.size());
    return dataset;
}

// "At least" threshold is inclusive: completeness >= threshold retains.
inline std::pair<std::vector<ConfigDataset>, std::vector<ConfigDataset>>
apply_config_threshold(const std::vector<ConfigDataset>& datasets,
                       double threshold = 0.5) {
    std::vector<ConfigDataset> retained, excluded;
    for (const auto& dataset : datasets)
        (dataset.completeness_fraction >= threshold ? retained : excluded)
            .push_back(dataset);
    return {retained, excluded};
}

// True for a scale iff every retained row shares one raw score. Flagged
// scales drop out of Features 1 and 3 but stay eligible for Feature 2.
inline std::map<std::string, bool> flag_zero_variance(
    const ConfigDataset& dataset, const std::vector<study::ScaleDefinition>& scales) {
    if (dataset.rows.empty()) throw EmptyDataset();
    std::map<std::string, bool> flags;
    for (const auto& scale : scales) {
        bool constant = true;
        const int first = dataset.rows.front().scores.at(scale.scale_id).raw;
        for (const auto& row : dataset.rows)
            if (row.scores.at(scale.scale_id).raw != first) {
                constant = false;
                break;
            }
        flags[scale.scale_id] = constant;
    }
    return flags;
}

// ---- persistence ----

inline std::string dataset_to_csv(const ConfigDataset& dataset,
                                  const std::vector<study::ScaleDefinition>& scales) {
    std::string csv = "participant_id";
    for (const auto& scale : scales)
        for (const auto& item : scale.items) csv += "," + item.item_id;
    for (const auto& scale : scales) csv += "," + scale.scale_id + "_raw";
    for (const auto& scale : scales) csv += "," + scale.scale_id + "_normalized";
    csv += "\n";
    for (const auto& row : dataset.rows) {
        csv += row.participant_id;
        for (const auto& scale : scales)
            for (const auto& item : scale.items)
                csv += "," + std::to_string(row.ratings.at(item.item_id));
        for (const auto& scale : scales)
            csv += "," + std::to_string(row.scores.at(scale.scale_id).raw);
        for (const auto& scale : scales) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.10g",
                          row.scores.at(scale.scale_id).normalized);
            csv += std::string(",") + buf;
        }
        csv += "\n";
    }
    return csv;
}

inline nlohmann::json exclusion_report_to_json(const ExclusionReport& report) {
    nlohmann::json doc;
    doc["outcome_counts"] = report.outcome_counts;
    doc["configs_excluded_by_threshold"] = report.configs_excluded_by_threshold;
    doc["zero_variance_flags"] = nlohmann::json::array();
    for (const auto& [key, flagged] : report.zero_variance_flags)
        doc["zero_variance_flags"].push_back(
            {{"config_id", key.first}, {"scale_id", key.second}, {"zero_variance", flagged}});
    return doc;
}

}  // namespace silicon::intake
