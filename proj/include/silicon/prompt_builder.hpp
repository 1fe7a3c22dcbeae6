#pragma once

// Persona-conditioned prompt rendering: one PromptPlan per (configuration,
// participant), split into units by the configured prompting strategy.
// Template text is data, not code; the active template's hash travels with
// every output row.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "silicon/decision_grid.hpp"
#include "silicon/digest.hpp"
#include "silicon/study_model.hpp"

namespace silicon::prompt {

struct MissingField : std::invalid_argument {
    MissingField(const std::string& level, const std::string& field)
        : std::invalid_argument("demographics level '" + level +
                                "' requires field: " + field) {}
};

struct ResponseSchema {
    // item_id -> inclusive integer range
    std::map<std::string, std::pair<int, int>> ranges;
};

struct PromptUnit {
    std::string unit_id;
    std::vector<std::pair<std::string, std::string>> covered_items;  // (scale_id, item_id)
    std::string system_text;
    std::string user_text;
    ResponseSchema response_schema;
};

struct PromptPlan {
    std::string config_id;
    std::string participant_id;
    std::string template_version;
    std::vector<PromptUnit> units;
};

struct PromptTemplate {
    std::string name = "default";
    std::string system_base =
        "You are simulating a survey respondent. Answer every question "
        "honestly from the perspective of the person described, or of a "
        "typical survey respondent if no person is described.";
    std::string persona_header = "You are answering as a person with the following profile:";
    std::string persona_line = "- {field}: {value}";
    std::string user_intro =
        "Please respond to the following survey item(s). For each item, give "
        "a single integer rating within the stated range.";
    std::string item_line = "{item_id}: {text} (respond with an integer from {min} to {max}{anchors})";
    std::string anchor_fragment = "; {value} = {label}";
    std::string response_instruction =
        "Reply with only a single JSON object mapping each item id to your "
        "integer rating, for example {\"item_id\": 3}. Do not include any "
        "other text.";

    // Template identity for provenance; any wording change changes it.
    std::string version() const {
        return name + "@" +
               digest::sha256_hex_short(system_base + "\x1f" + persona_header +
                                        "\x1f" + persona_line + "\x1f" + user_intro +
                                        "\x1f" + item_line + "\x1f" + anchor_fragment +
                                        "\x1f" + response_instruction);
    }

    static PromptTemplate from_json(const nlohmann::json& doc) {
        PromptTemplate t;
        auto get = [&](const char* key, std::string& out) {
            if (doc.contains(key)) out = doc.at(key).get<std::string>();
        };
        get("name", t.name);
        get("system_base", t.system_base);
        get("persona_header", t.persona_header);
        get("persona_line", t.persona_line);
        get("user_intro", t.user_intro);
        get("item_line", t.item_line);
        get("anchor_fragment", t.anchor_fragment);
        get("response_instruction", t.response_instruction);
        return t;
    }
};

namespace detail {

inline std::string replace_all(std::string text, const std::string& from,
                               const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

inline void require_nonempty(const std::string& level, const std::string& field,
                             const std::string& value) {
    if (value.empty()) throw MissingField(level, field);
}

}  // namespace detail

// Persona block for the requested level: empty for none, exactly age and
// gender for age_gender, all seven fields in fixed order for extensive.
inline std::string render_demographics(const study::DemographicProfile& profile,
                                       grid::DemographicsLevel level,
                                       const PromptTemplate& tmpl = {}) {
    using grid::DemographicsLevel;
    if (level == DemographicsLevel::none) return "";

    std::vector<std::pair<std::string, std::string>> fields;
    const std::string level_name = grid::to_string(level);
    if (profile.age <= 0) throw MissingField(level_name, "age");
    fields.emplace_back("Age", std::to_string(profile.age));
    detail::require_nonempty(level_name, "gender", profile.gender);
    fields.emplace_back("Gender", profile.gender);
    if (level == DemographicsLevel::extensive) {
        detail::require_nonempty(level_name, "country_residence", profile.country_residence);
        fields.emplace_back("Country of residence", profile.country_residence);
        detail::require_nonempty(level_name, "education", profile.education);
        fields.emplace_back("Education level", profile.education);
        detail::require_nonempty(level_name, "ethnicity", profile.ethnicity);
        fields.emplace_back("Ethnicity", profile.ethnicity);
        detail::require_nonempty(level_name, "income", profile.income);
        fields.emplace_back("Income level", profile.income);
        detail::require_nonempty(level_name, "political_identity", profile.political_identity);
        fields.emplace_back("Political identity", profile.political_identity);
    }

    std::string block = tmpl.persona_header;
    for (const auto& [field, value] : fields) {
        block += "\n" + detail::replace_all(
                            detail::replace_all(tmpl.persona_line, "{field}", field),
                            "{value}", value);
    }
    return block;
}

namespace detail {

inline std::string render_item_line(const study::ItemDefinition& item,
                                    const PromptTemplate& tmpl) {
    std::string anchors;
    for (const auto& [value, label] : item.anchor_labels)
        anchors += replace_all(replace_all(tmpl.anchor_fragment, "{value}",
                                           std::to_string(value)),
                               "{label}", label);
    std::string line = tmpl.item_line;
    line = replace_all(line, "{item_id}", item.item_id);
    line = replace_all(line, "{text}", item.prompt_text);
    line = replace_all(line, "{min}", std::to_string(item.response_min));
    line = replace_all(line, "{max}", std::to_string(item.response_max));
    line = replace_all(line, "{anchors}", anchors);
    return line;
}

inline PromptUnit make_unit(
    const std::string& unit_id,
    const std::vector<std::pair<const study::ScaleDefinition*,
                                const study::ItemDefinition*>>& items,
    const std::string& persona_block, const PromptTemplate& tmpl) {
    PromptUnit unit;
    unit.unit_id = unit_id;
    unit.system_text = tmpl.system_base;
    if (!persona_block.empty()) unit.system_text += "\n\n" + persona_block;
    unit.user_text = tmpl.user_intro;
    for (const auto& [scale, item] : items) {
        unit.covered_items.emplace_back(scale->scale_id, item->item_id);
        unit.response_schema.ranges[item->item_id] = {item->response_min,
                                                      item->response_max};
        unit.user_text += "\n" + render_item_line(*item, tmpl);
    }
    unit.user_text += "\n\n" + tmpl.response_instruction;
    return unit;
}

}  // namespace detail

// Splits the participant's full item set into stateless call units:
// all_in_one -> 1 unit, scale_by_scale -> one unit per scale,
// item_by_item -> one unit per item. Items keep questionnaire order.
inline PromptPlan build_prompt_plan(const grid::Configuration& config,
                                    const study::ParticipantRecord& participant,
                                    const std::vector<study::ScaleDefinition>& scales,
                                    const PromptTemplate& tmpl = {}) {
    const std::string persona =
        render_demographics(participant.demographics, config.demographics_level, tmpl);

    PromptPlan plan;
    plan.config_id = config.config_id();
    plan.participant_id = participant.participant_id;
    plan.template_version = tmpl.version();

    using ItemRef = std::pair<const study::ScaleDefinition*, const study::ItemDefinition*>;
    switch (config.strategy) {
        case grid::Strategy::all_in_one: {
            std::vector<ItemRef> all;
            for (const auto& scale : scales)
                for (const auto& item : scale.items) all.emplace_back(&scale, &item);
            plan.units.push_back(detail::make_unit("all", all, persona, tmpl));
            break;
        }
        case grid::Strategy::scale_by_scale: {
            for (const auto& scale : scales) {
                std::vector<ItemRef> items;
                for (const auto& item : scale.items) items.emplace_back(&scale, &item);
                plan.units.push_back(
                    detail::make_unit("scale_" + scale.scale_id, items, persona, tmpl));
            }
            break;
        }
        case grid::Strategy::item_by_item: {
            for (const auto& scale : scales)
                for (const auto& item : scale.items)
                    plan.units.push_back(detail::make_unit(
                        "item_" + item.item_id, {{&scale, &item}}, persona, tmpl));
            break;
        }
    }
    return plan;
}

}  // namespace silicon::prompt
