#include <doctest.h>

#include <algorithm>
#include <set>

#include "silicon/prompt_builder.hpp"
#include "support/fixtures.hpp"

using namespace silicon;
using namespace silicon::prompt;

namespace {

grid::Configuration make_config(grid::Strategy strategy,
                                grid::DemographicsLevel level) {
    grid::Configuration config;
    config.model = {"gpt-4o", "openai", grid::ModelKind::sampling};
    config.sampling = 1.0;
    config.demographics_level = level;
    config.strategy = strategy;
    return config;
}

}  // namespace

TEST_CASE("render_demographics levels") {
    const auto participant = fixtures::synthetic_participants(1).front();
    CHECK(render_demographics(participant.demographics,
                              grid::DemographicsLevel::none) == "");
    const auto age_gender = render_demographics(participant.demographics,
                                                grid::DemographicsLevel::age_gender);
    CHECK(std::count(age_gender.begin(), age_gender.end(), '\n') == 2);  // header + 2 lines
    CHECK(age_gender.find("Age: " + std::to_string(participant.demographics.age)) !=
          std::string::npos);
    CHECK(age_gender.find(participant.demographics.gender) != std::string::npos);
    CHECK(age_gender.find(participant.demographics.ethnicity) == std::string::npos);

    const auto extensive = render_demographics(participant.demographics,
                                               grid::DemographicsLevel::extensive);
    CHECK(std::count(extensive.begin(), extensive.end(), '\n') == 7);
    for (const auto* needle :
         {"Country of residence", "Education level", "Ethnicity", "Income level",
          "Political identity"})
        CHECK(extensive.find(needle) != std::string::npos);
}

TEST_CASE("render_demographics requires the fields its level uses") {
    study::DemographicProfile incomplete;
    incomplete.age = 30;
    CHECK_THROWS_AS(
        render_demographics(incomplete, grid::DemographicsLevel::age_gender),
        MissingField);
    incomplete.gender = "man";
    CHECK_NOTHROW(render_demographics(incomplete, grid::DemographicsLevel::age_gender));
    CHECK_THROWS_AS(
        render_demographics(incomplete, grid::DemographicsLevel::extensive),
        MissingField);
}

TEST_CASE("build_prompt_plan unit counts by strategy") {
    const auto scales = study::builtin_scales();
    const auto participant = fixtures::synthetic_participants(1).front();

    const auto one = build_prompt_plan(
        make_config(grid::Strategy::all_in_one, grid::DemographicsLevel::none),
        participant, scales);
    REQUIRE(one.units.size() == 1);
    CHECK(one.units[0].covered_items.size() == 8);

    const auto per_scale = build_prompt_plan(
        make_config(grid::Strategy::scale_by_scale, grid::DemographicsLevel::none),
        participant, scales);
    REQUIRE(per_scale.units.size() == 2);
    std::multiset<std::size_t> sizes;
    for (const auto& unit : per_scale.units) sizes.insert(unit.covered_items.size());
    CHECK(sizes == std::multiset<std::size_t>{2, 6});

    const auto per_item = build_prompt_plan(
        make_config(grid::Strategy::item_by_item, grid::DemographicsLevel::none),
        participant, scales);
    REQUIRE(per_item.units.size() == 8);
    for (const auto& unit : per_item.units) CHECK(unit.covered_items.size() == 1);
}

TEST_CASE("plans cover the full item set exactly once") {
    const auto scales = study::builtin_scales();
    const auto participant = fixtures::synthetic_participants(1).front();
    for (auto strategy : {grid::Strategy::all_in_one, grid::Strategy::scale_by_scale,
                          grid::Strategy::item_by_item}) {
        const auto plan = build_prompt_plan(
            make_config(strategy, grid::DemographicsLevel::extensive), participant,
            scales);
        std::multiset<std::string> covered;
        for (const auto& unit : plan.units) {
            CHECK(unit.response_schema.ranges.size() == unit.covered_items.size());
            for (const auto& [scale_id, item_id] : unit.covered_items) {
                covered.insert(item_id);
                CHECK(unit.response_schema.ranges.count(item_id) == 1);
            }
        }
        CHECK(covered.size() == 8);
        CHECK(std::set<std::string>(covered.begin(), covered.end()).size() == 8);
    }
}

TEST_CASE("item text appears verbatim in exactly one unit") {
    const auto scales = study::builtin_scales();
    const auto participant = fixtures::synthetic_participants(1).front();
    const auto plan = build_prompt_plan(
        make_config(grid::Strategy::scale_by_scale, grid::DemographicsLevel::none),
        participant, scales);
    for (const auto& scale : scales)
        for (const auto& item : scale.items) {
            int hits = 0;
            for (const auto& unit : plan.units)
                if (unit.user_text.find(item.prompt_text) != std::string::npos) ++hits;
            CHECK(hits == 1);
        }
}

TEST_CASE("rendering is pure and demographics level touches only the persona") {
    const auto scales = study::builtin_scales();
    const auto participant = fixtures::synthetic_participants(1).front();
    const auto config = make_config(grid::Strategy::all_in_one,
                                    grid::DemographicsLevel::age_gender);
    const auto a = build_prompt_plan(config, participant, scales);
    const auto b = build_prompt_plan(config, participant, scales);
    REQUIRE(a.units.size() == b.units.size());
    CHECK(a.units[0].system_text == b.units[0].system_text);
    CHECK(a.units[0].user_text == b.units[0].user_text);
    CHECK(a.template_version == b.template_version);

    auto extensive = config;
    extensive.demographics_level = grid::DemographicsLevel::extensive;
    const auto c = build_prompt_plan(extensive, participant, scales);
    CHECK(c.units[0].user_text == a.units[0].user_text);
    CHECK(c.units[0].system_text != a.units[0].system_text);
    CHECK(c.units[0].response_schema.ranges == a.units[0].response_schema.ranges);
}

TEST_CASE("template wording changes the template version") {
    PromptTemplate reworded;
    reworded.user_intro = "Answer the following questions.";
    CHECK(reworded.version() != PromptTemplate{}.version());
}
