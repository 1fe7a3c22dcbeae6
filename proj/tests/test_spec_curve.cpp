#include <doctest.h>

#include <algorithm>
#include <random>

#include "silicon/spec_curve.hpp"

using namespace silicon;
using namespace silicon::curve;

namespace {

std::vector<metrics::ConfigScores> scores_for(const std::vector<std::string>& ids,
                                              unsigned seed = 7) {
    std::mt19937_64 rng(seed);
    std::vector<metrics::ConfigScores> scores;
    for (const auto& id : ids) {
        metrics::ConfigScores s;
        s.config_id = id;
        auto draw = [&] { return static_cast<double>(rng() % 2001) / 1000.0 - 1.0; };
        s.f1_bjw = draw();
        s.f1_gf = draw();
        s.f2_bjw = std::fabs(draw());
        s.f2_gf = std::fabs(draw());
        s.f3_abs_error = std::fabs(draw());
        scores.push_back(s);
    }
    return scores;
}

std::vector<std::string> paper_ids() {
    std::vector<std::string> ids;
    for (const auto& config : grid::enumerate_configurations(grid::paper_2025_grid()))
        ids.push_back(config.config_id());
    return ids;
}

}  // namespace

TEST_CASE("build_curve sorts ascending with config_id tie-break") {
    auto scores = scores_for(paper_ids());
    scores[10].f1_bjw = 0.5;
    scores[20].f1_bjw = 0.5;  // deliberate tie
    const auto model = build_curve(scores, Metric::f1_bjw);
    REQUIRE(model.columns.size() == 252);
    for (std::size_t i = 1; i < model.columns.size(); ++i) {
        const auto& a = model.columns[i - 1];
        const auto& b = model.columns[i];
        CHECK(a.estimate <= b.estimate);
        if (a.estimate == b.estimate) CHECK(a.config_id < b.config_id);
    }
}

TEST_CASE("curve order is invariant to input permutation") {
    auto scores = scores_for(paper_ids());
    auto shuffled = scores;
    std::mt19937_64 rng(11);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = build_curve(scores, Metric::f2_gf);
    const auto b = build_curve(shuffled, Metric::f2_gf);
    REQUIRE(a.columns.size() == b.columns.size());
    for (std::size_t i = 0; i < a.columns.size(); ++i)
        CHECK(a.columns[i].config_id == b.columns[i].config_id);
    CHECK(render_curve_svg(a) == render_curve_svg(b));
}

TEST_CASE("ineligible configurations are dropped; none eligible throws") {
    auto scores = scores_for(paper_ids());
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (i % 2 == 0) scores[i].f3_abs_error.reset();
    const auto model = build_curve(scores, Metric::f3);
    CHECK(model.columns.size() == 126);

    for (auto& s : scores) s.f3_abs_error.reset();
    CHECK_THROWS_AS(build_curve(scores, Metric::f3), NoEligibleConfigurations);
}

TEST_CASE("decision panel ticks: one value per dimension per column") {
    const auto model = build_curve(scores_for(paper_ids()), Metric::f1_gf);
    std::map<std::string, std::vector<int>> per_dimension;
    for (const auto& row : model.decision_panel) {
        REQUIRE(row.ticks.size() == model.columns.size());
        auto& counts = per_dimension[row.dimension];
        counts.resize(model.columns.size(), 0);
        for (std::size_t i = 0; i < row.ticks.size(); ++i)
            if (row.ticks[i]) ++counts[i];
    }
    CHECK(per_dimension.size() == 4);
    for (const auto& [dimension, counts] : per_dimension)
        for (int c : counts) CHECK(c == 1);
    // the paper grid yields 9 models, 6 settings, 3 levels, 3 strategies
    CHECK(model.decision_panel.size() == 9 + 6 + 3 + 3);
}

TEST_CASE("CSV render round-trips the model") {
    ReferenceBand band{0.01, 0.06, 0.03};
    const auto model = build_curve(scores_for(paper_ids()), Metric::f2_bjw, band);
    const auto csv = render_curve_csv(model);
    const auto parsed = parse_curve_csv(csv);
    CHECK(parsed.metric_id == model.metric_id);
    REQUIRE(parsed.reference_band.has_value());
    CHECK(parsed.reference_band->low == band.low);
    CHECK(parsed.reference_band->high == band.high);
    CHECK(parsed.reference_band->point == band.point);
    REQUIRE(parsed.columns.size() == model.columns.size());
    for (std::size_t i = 0; i < model.columns.size(); ++i) {
        CHECK(parsed.columns[i].config_id == model.columns[i].config_id);
        CHECK(parsed.columns[i].estimate ==
              doctest::Approx(model.columns[i].estimate).epsilon(1e-9));
    }
    CHECK(render_curve_csv(parsed) == csv);
}

TEST_CASE("SVG output is deterministic and carries the reference band") {
    ReferenceBand band{0.01, 0.04, 0.02};
    const auto model = build_curve(scores_for(paper_ids()), Metric::f2_gf, band);
    const auto svg = render_curve_svg(model);
    CHECK(svg == render_curve_svg(model));
    CHECK(svg.rfind("<svg ", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    auto count = [&](const std::string& needle) {
        std::size_t hits = 0, pos = 0;
        while ((pos = svg.find(needle, pos)) != std::string::npos) {
            ++hits;
            pos += needle.size();
        }
        return hits;
    };
    CHECK(count("class=\"reference-band\"") == 1);
    CHECK(count("class=\"reference-point\"") == 1);
    CHECK(count("<circle ") == model.columns.size());

    const auto bare = build_curve(scores_for(paper_ids()), Metric::f1_bjw);
    CHECK(render_curve_svg(bare).find("reference-band") == std::string::npos);
}

TEST_CASE("render dispatch rejects unknown formats") {
    const auto model = build_curve(scores_for(paper_ids()), Metric::f1_bjw);
    CHECK_NOTHROW(render_curve(model, "svg"));
    CHECK_NOTHROW(render_curve(model, "csv"));
    CHECK_THROWS_AS(render_curve(model, "png"), UnsupportedFormat);
}

TEST_CASE("degenerate single-column curve still renders") {
    auto scores = scores_for({"openai~gpt-4o~t1~none~all_in_one"});
    const auto model = build_curve(scores, Metric::f1_bjw);
    CHECK(model.columns.size() == 1);
    CHECK_NOTHROW(render_curve_svg(model));
    CHECK_NOTHROW(parse_curve_csv(render_curve_csv(model)));
}
