#pragma once

// Analytic-decision dimensions and enumeration of the configuration grid:
// model x sampling setting x demographics level x prompting strategy, with
// the applicability rule that reasoning models take an effort and all other
// models take a temperature.

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace silicon::grid {

struct EmptyDimension : std::invalid_argument {
    explicit EmptyDimension(const std::string& name)
        : std::invalid_argument("empty grid dimension: " + name) {}
};

struct InvalidConfigId : std::invalid_argument {
    explicit InvalidConfigId(const std::string& id)
        : std::invalid_argument("malformed config_id: " + id) {}
};

enum class ModelKind { sampling, reasoning };
enum class ReasoningEffort { low, high };
enum class DemographicsLevel { none, age_gender, extensive };
enum class Strategy { all_in_one, scale_by_scale, item_by_item };

struct ModelSpec {
    std::string model_id;
    std::string provider_id;
    ModelKind kind = ModelKind::sampling;

    auto operator<=>(const ModelSpec&) const = default;
};

// Exactly one of temperature or reasoning effort.
using SamplingSetting = std::variant<double, ReasoningEffort>;

inline bool setting_matches_kind(const SamplingSetting& setting, ModelKind kind) {
    return std::holds_alternative<double>(setting) == (kind == ModelKind::sampling);
}

inline std::string to_string(ReasoningEffort e) {
    return e == ReasoningEffort::low ? "low" : "high";
}

inline std::string to_string(DemographicsLevel level) {
    switch (level) {
        case DemographicsLevel::none: return "none";
        case DemographicsLevel::age_gender: return "age_gender";
        default: return "extensive";
    }
}

inline std::string to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::all_in_one: return "all_in_one";
        case Strategy::scale_by_scale: return "scale_by_scale";
        default: return "item_by_item";
    }
}

inline std::string format_temperature(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

inline std::string setting_token(const SamplingSetting& setting) {
    if (const double* t = std::get_if<double>(&setting))
        return "t" + format_temperature(*t);
    return "e" + to_string(std::get<ReasoningEffort>(setting));
}

struct Configuration {
    ModelSpec model;
    SamplingSetting sampling{0.0};
    DemographicsLevel demographics_level = DemographicsLevel::none;
    Strategy strategy = Strategy::all_in_one;
    // Dimensions outside the four studied ones ride along as provenance.
    std::map<std::string, std::string> extra_decisions;

    // Stable injective encoding of the decision values; '~'-separated and
    // filename-safe, so it doubles as the per-config artifact name.
    std::string config_id() const {
        return model.provider_id + "~" + model.model_id + "~" +
               setting_token(sampling) + "~" + to_string(demographics_level) +
               "~" + to_string(strategy);
    }

    bool operator==(const Configuration& other) const {
        return config_id() == other.config_id();
    }
};

inline Configuration parse_config_id(const std::string& id) {
    std::vector<std::string> parts;
    std::string part;
    for (char c : id) {
        if (c == '~') {
            parts.push_back(part);
            part.clear();
        } else {
            part += c;
        }
    }
    parts.push_back(part);
    if (parts.size() != 5) throw InvalidConfigId(id);

    Configuration config;
    config.model.provider_id = parts[0];
    config.model.model_id = parts[1];
    const auto& setting = parts[2];
    if (setting.size() < 2) throw InvalidConfigId(id);
    if (setting[0] == 't') {
        config.model.kind = ModelKind::sampling;
        try {
            std::size_t pos = 0;
            config.sampling = std::stod(setting.substr(1), &pos);
            if (pos != setting.size() - 1) throw InvalidConfigId(id);
        } catch (const std::logic_error&) {
            throw InvalidConfigId(id);
        }
    } else if (setting[0] == 'e') {
        config.model.kind = ModelKind::reasoning;
        const auto effort = setting.substr(1);
        if (effort == "low")
            config.sampling = ReasoningEffort::low;
        else if (effort == "high")
            config.sampling = ReasoningEffort::high;
        else
            throw InvalidConfigId(id);
    } else {
        throw InvalidConfigId(id);
    }
    if (parts[3] == "none")
        config.demographics_level = DemographicsLevel::none;
    else if (parts[3] == "age_gender")
        config.demographics_level = DemographicsLevel::age_gender;
    else if (parts[3] == "extensive")
        config.demographics_level = DemographicsLevel::extensive;
    else
        throw InvalidConfigId(id);
    if (parts[4] == "all_in_one")
        config.strategy = Strategy::all_in_one;
    else if (parts[4] == "scale_by_scale")
        config.strategy = Strategy::scale_by_scale;
    else if (parts[4] == "item_by_item")
        config.strategy = Strategy::item_by_item;
    else
        throw InvalidConfigId(id);
    return config;
}

struct DecisionGrid {
    std::vector<ModelSpec> models;
    std::vector<double> temperatures;
    std::vector<ReasoningEffort> efforts;
    std::vector<DemographicsLevel> demographics_levels;
    std::vector<Strategy> strategies;

    void validate() const {
        if (models.empty()) throw EmptyDimension("models");
        if (demographics_levels.empty()) throw EmptyDimension("demographics_levels");
        if (strategies.empty()) throw EmptyDimension("strategies");
        bool has_sampling = false, has_reasoning = false;
        for (const auto& m : models)
            (m.kind == ModelKind::sampling ? has_sampling : has_reasoning) = true;
        if (has_sampling && temperatures.empty()) throw EmptyDimension("temperatures");
        if (has_reasoning && efforts.empty()) throw EmptyDimension("efforts");
        auto check_unique = [](auto values, const std::string& name) {
            std::sort(values.begin(), values.end());
            if (std::adjacent_find(values.begin(), values.end()) != values.end())
                throw EmptyDimension("duplicate value in " + name);
        };
        check_unique(temperatures, "temperatures");
        check_unique(efforts, "efforts");
        check_unique(demographics_levels, "demographics_levels");
        check_unique(strategies, "strategies");
        std::vector<std::pair<std::string, std::string>> ids;
        for (const auto& m : models) ids.emplace_back(m.provider_id, m.model_id);
        check_unique(ids, "models");
    }
};

// Full cross-product under the applicability rule, in canonical order:
// models by (provider_id, model_id), settings ascending, then demographics
// level, then strategy.
inline std::vector<Configuration> enumerate_configurations(DecisionGrid grid) {
    grid.validate();
    std::sort(grid.models.begin(), grid.models.end(),
              [](const ModelSpec& a, const ModelSpec& b) {
                  return std::tie(a.provider_id, a.model_id) <
                         std::tie(b.provider_id, b.model_id);
              });
    std::sort(grid.temperatures.begin(), grid.temperatures.end());
    std::sort(grid.efforts.begin(), grid.efforts.end());
    std::sort(grid.demographics_levels.begin(), grid.demographics_levels.end());
    std::sort(grid.strategies.begin(), grid.strategies.end());

    std::vector<Configuration> configs;
    for (const auto& model : grid.models) {
        std::vector<SamplingSetting> settings;
        if (model.kind == ModelKind::sampling)
            for (double t : grid.temperatures) settings.emplace_back(t);
        else
            for (auto e : grid.efforts) settings.emplace_back(e);
        for (const auto& setting : settings)
            for (auto level : grid.demographics_levels)
                for (auto strategy : grid.strategies) {
                    Configuration config;
                    config.model = model;
                    config.sampling = setting;
                    config.demographics_level = level;
                    config.strategy = strategy;
                    configs.push_back(std::move(config));
                }
    }
    return configs;
}

inline long long expected_cell_count(const DecisionGrid& grid, long long participants) {
    if (participants < 0) throw std::invalid_argument("participants must be >= 0");
    return static_cast<long long>(enumerate_configurations(grid).size()) * participants;
}

// The 252-configuration grid studied: 4 reasoning models x 2 efforts plus
// 5 sampling models x 4 temperatures, crossed with 3 demographics levels
// and 3 prompting strategies. Model ids are current-provider names and can
// be substituted in a custom grid document.
inline DecisionGrid paper_2025_grid() {
    DecisionGrid grid;
    grid.models = {
        {"gpt-5-mini", "openai", ModelKind::reasoning},
        {"gpt-5-nano", "openai", ModelKind::reasoning},
        {"o3-mini", "openai", ModelKind::reasoning},
        {"o4-mini", "openai", ModelKind::reasoning},
        {"gpt-4o", "openai", ModelKind::sampling},
        {"gpt-4o-mini", "openai", ModelKind::sampling},
        {"gpt-3.5-turbo", "openai", ModelKind::sampling},
        {"llama-3.3-70b-versatile", "groq", ModelKind::sampling},
        {"deepseek-r1-distill-llama-70b", "groq", ModelKind::sampling},
    };
    grid.temperatures = {0.0, 0.5, 1.0, 1.5};
    grid.efforts = {ReasoningEffort::low, ReasoningEffort::high};
    grid.demographics_levels = {DemographicsLevel::none, DemographicsLevel::age_gender,
                                DemographicsLevel::extensive};
    grid.strategies = {Strategy::all_in_one, Strategy::scale_by_scale,
                       Strategy::item_by_item};
    return grid;
}

inline DecisionGrid grid_preset(const std::string& name) {
    if (name == "paper-2025-grid") return paper_2025_grid();
    throw std::invalid_argument("unknown grid preset: " + name);
}

// ---- grid document (JSON) ----

inline nlohmann::json grid_to_json(const DecisionGrid& grid) {
    nlohmann::json doc;
    doc["models"] = nlohmann::json::array();
    for (const auto& m : grid.models)
        doc["models"].push_back({{"model_id", m.model_id},
                                 {"provider_id", m.provider_id},
                                 {"kind", m.kind == ModelKind::sampling ? "sampling"
                                                                        : "reasoning"}});
    doc["temperatures"] = grid.temperatures;
    doc["efforts"] = nlohmann::json::array();
    for (auto e : grid.efforts) doc["efforts"].push_back(to_string(e));
    doc["demographics_levels"] = nlohmann::json::array();
    for (auto l : grid.demographics_levels)
        doc["demographics_levels"].push_back(to_string(l));
    doc["strategies"] = nlohmann::json::array();
    for (auto s : grid.strategies) doc["strategies"].push_back(to_string(s));
    return doc;
}

inline DecisionGrid grid_from_json(const nlohmann::json& doc) {
    DecisionGrid grid;
    for (const auto& m : doc.at("models")) {
        ModelSpec spec;
        spec.model_id = m.at("model_id").get<std::string>();
        spec.provider_id = m.at("provider_id").get<std::string>();
        const auto kind = m.at("kind").get<std::string>();
        if (kind == "sampling")
            spec.kind = ModelKind::sampling;
        else if (kind == "reasoning")
            spec.kind = ModelKind::reasoning;
        else
            throw std::invalid_argument("unknown model kind: " + kind);
        if (spec.model_id.find('~') != std::string::npos ||
            spec.provider_id.find('~') != std::string::npos)
            throw std::invalid_argument("model ids must not contain '~'");
        grid.models.push_back(std::move(spec));
    }
    if (doc.contains("temperatures"))
        grid.temperatures = doc.at("temperatures").get<std::vector<double>>();
    if (doc.contains("efforts"))
        for (const auto& e : doc.at("efforts")) {
            const auto name = e.get<std::string>();
            if (name == "low")
                grid.efforts.push_back(ReasoningEffort::low);
            else if (name == "high")
                grid.efforts.push_back(ReasoningEffort::high);
            else
                throw std::invalid_argument("unknown effort: " + name);
        }
    for (const auto& l : doc.at("demographics_levels")) {
        const auto name = l.get<std::string>();
        if (name == "none")
            grid.demographics_levels.push_back(DemographicsLevel::none);
        else if (name == "age_gender")
            grid.demographics_levels.push_back(DemographicsLevel::age_gender);
        else if (name == "extensive")
            grid.demographics_levels.push_back(DemographicsLevel::extensive);
        else
            throw std::invalid_argument("unknown demographics level: " + name);
    }
    for (const auto& s : doc.at("strategies")) {
        const auto name = s.get<std::string>();
        if (name == "all_in_one")
            grid.strategies.push_back(Strategy::all_in_one);
        else if (name == "scale_by_scale")
            grid.strategies.push_back(Strategy::scale_by_scale);
        else if (name == "item_by_item")
            grid.strategies.push_back(Strategy::item_by_item);
        else
            throw std::invalid_argument("unknown strategy: " + name);
    }
    grid.validate();
    return grid;
}

}  // namespace silicon::grid
