#include <doctest.h>

#include <random>

#include "silicon/feature_metrics.hpp"
#include "support/fixtures.hpp"

using namespace silicon;
using namespace silicon::metrics;

namespace {

intake::ConfigDataset dataset_from_records(
    const std::vector<study::ParticipantRecord>& participants,
    const std::vector<study::ScaleDefinition>& scales,
    const std::string& config_id = "cfg") {
    intake::ConfigDataset dataset;
    dataset.config_id = config_id;
    dataset.attempted_participants = participants.size();
    for (const auto& p : participants) {
        intake::DatasetRow row;
        row.participant_id = p.participant_id;
        for (const auto& [key, value] : p.responses) row.ratings[key.second] = value;
        for (const auto& scale : scales)
            row.scores[scale.scale_id] = study::score_participant(scale, p);
        dataset.rows.push_back(std::move(row));
    }
    dataset.completeness_fraction = 1.0;
    return dataset;
}

}  // namespace

TEST_CASE("feature1 is exactly 1 when silicon equals human") {
    const auto participants = fixtures::synthetic_participants(85);
    const auto scales = study::builtin_scales();
    const auto dataset = dataset_from_records(participants, scales);
    const auto human = human_scores(participants, scales[0]);
    CHECK(feature1_ranking(dataset, human, "bjw").r == 1.0);
}

TEST_CASE("feature1 raises on missing human match") {
    const auto participants = fixtures::synthetic_participants(10);
    const auto scales = study::builtin_scales();
    const auto dataset = dataset_from_records(participants, scales);
    const auto human = human_scores(fixtures::synthetic_participants(5), scales[0]);
    CHECK_THROWS_AS(feature1_ranking(dataset, human, "bjw"), MissingHumanMatch);
}

TEST_CASE("feature2 is zero for identical distributions and tracks shifts") {
    // interior roster: every BJW item in 2..4 so a +1 shift cannot clip
    std::vector<study::ParticipantRecord> participants;
    for (int i = 0; i < 85; ++i) {
        study::ParticipantRecord p;
        p.participant_id = "p" + std::to_string(i + 1);
        for (int item = 1; item <= 6; ++item)
            p.responses[{"bjw", "bjw_" + std::to_string(item)}] =
                2 + (i * 7 + item * 3) % 3;
        p.responses[{"gf", "gf_european_americans"}] = 2 + i % 6;
        p.responses[{"gf", "gf_african_americans"}] = 3 + (i * 5) % 4;
        participants.push_back(std::move(p));
    }
    const auto scales = study::builtin_scales();
    const auto dataset = dataset_from_records(participants, scales);
    const auto human = human_scores(participants, scales[0]);
    CHECK(feature2_distribution(dataset, human, "bjw").w == 0.0);

    // translate every BJW raw score by +3 = +0.1 normalized
    auto shifted = participants;
    for (auto& p : shifted)
        for (int i = 1; i <= 3; ++i)
            p.responses[{"bjw", "bjw_" + std::to_string(i)}] += 1;
    const auto shifted_dataset = dataset_from_records(shifted, scales);
    CHECK(feature2_distribution(shifted_dataset, human, "bjw").w ==
          doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("feature3 absolute error examples") {
    const auto participants = fixtures::synthetic_participants(85);
    const auto scales = study::builtin_scales();
    const auto dataset = dataset_from_records(participants, scales);
    std::vector<double> bjw, gf;
    for (const auto& row : dataset.rows) {
        bjw.push_back(row.scores.at("bjw").raw);
        gf.push_back(row.scores.at("gf").raw);
    }
    const auto human_r = stats::pearson(bjw, gf);
    const auto [r_hat, abs_error] = feature3_relationship(dataset, human_r);
    CHECK(abs_error == 0.0);
    CHECK(r_hat.r == human_r.r);

    stats::CorrelationEstimate truth;
    truth.r = 0.65;
    stats::CorrelationEstimate claim;
    claim.r = 0.4;
    CHECK(std::fabs(claim.r - truth.r) == doctest::Approx(0.25));
    truth.r = 0.26;
    claim.r = 0.24;
    CHECK(std::fabs(claim.r - truth.r) == doctest::Approx(0.02));
}

TEST_CASE("score_configuration honors eligibility rules") {
    const auto participants = fixtures::synthetic_participants(30);
    const auto scales = study::builtin_scales();
    auto flat = participants;
    for (auto& p : flat)
        for (int i = 1; i <= 6; ++i) p.responses[{"bjw", "bjw_" + std::to_string(i)}] = 4;
    const auto dataset = dataset_from_records(flat, scales);
    const auto human_bjw = human_scores(participants, scales[0]);
    const auto human_gf = human_scores(participants, scales[1]);
    std::vector<double> b, g;
    for (const auto& p : participants) {
        b.push_back(human_bjw.at(p.participant_id).raw);
        g.push_back(human_gf.at(p.participant_id).raw);
    }
    const auto human_r = stats::pearson(b, g);
    const auto scores =
        score_configuration(dataset, human_bjw, human_gf, human_r, scales);
    CHECK_FALSE(scores.f1_bjw.has_value());   // zero variance
    CHECK(scores.f1_gf.has_value());
    CHECK(scores.f2_bjw.has_value());         // Feature 2 survives zero variance
    CHECK(scores.f2_gf.has_value());
    CHECK_FALSE(scores.f3_abs_error.has_value());
    CHECK_FALSE(scores.complete());
}

TEST_CASE("consistency matrix on identical score copies") {
    std::vector<ConfigScores> scores;
    std::mt19937_64 rng(23);
    for (int i = 0; i < 40; ++i) {
        const double v = static_cast<double>(rng() % 1000) / 1000.0;
        ConfigScores s;
        s.config_id = "c" + std::to_string(i);
        s.f1_bjw = s.f1_gf = s.f2_bjw = s.f2_gf = s.f3_abs_error = v;
        scores.push_back(s);
    }
    const auto matrix = consistency_matrix(scores);
    CHECK(matrix.n == 40);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(matrix.cells[i][j].r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("consistency matrix is complete-case and symmetric") {
    std::vector<ConfigScores> scores;
    std::mt19937_64 rng(29);
    for (int i = 0; i < 60; ++i) {
        ConfigScores s;
        s.config_id = "c" + std::to_string(i);
        auto draw = [&] { return static_cast<double>(rng() % 1000) / 1000.0; };
        s.f1_bjw = draw();
        s.f1_gf = draw();
        s.f2_bjw = draw();
        s.f2_gf = draw();
        if (i % 4 != 0) s.f3_abs_error = draw();  // 15 incomplete rows
        scores.push_back(s);
    }
    const auto matrix = consistency_matrix(scores);
    CHECK(matrix.n == 45);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(matrix.cells[i][i].r == 1.0);
        for (std::size_t j = 0; j < 5; ++j)
            CHECK(matrix.cells[i][j].r == matrix.cells[j][i].r);
    }
}

TEST_CASE("accuracy orientation flips the Feature 3 column sign") {
    std::vector<ConfigScores> scores;
    std::mt19937_64 rng(31);
    for (int i = 0; i < 30; ++i) {
        ConfigScores s;
        s.config_id = "c" + std::to_string(i);
        auto draw = [&] { return static_cast<double>(rng() % 1000) / 1000.0; };
        s.f1_bjw = draw();
        s.f1_gf = draw();
        s.f2_bjw = draw();
        s.f2_gf = draw();
        s.f3_abs_error = draw();
        scores.push_back(s);
    }
    const auto plain = consistency_matrix(scores, false);
    const auto flipped = consistency_matrix(scores, true);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(flipped.cells[4][j].r == doctest::Approx(-plain.cells[4][j].r));
}

TEST_CASE("significance stars match the .05/.01 thresholds") {
    CHECK(significance_stars(0.049) == "*");
    CHECK(significance_stars(0.009) == "**");
    CHECK(significance_stars(0.051) == "");
    CHECK(significance_stars(0.01) == "*");
    CHECK(significance_stars(0.05) == "");
}

TEST_CASE("formatted consistency table carries the star legend") {
    std::vector<ConfigScores> scores;
    std::mt19937_64 rng(37);
    for (int i = 0; i < 20; ++i) {
        ConfigScores s;
        s.config_id = "c" + std::to_string(i);
        auto draw = [&] { return static_cast<double>(rng() % 1000) / 1000.0; };
        s.f1_bjw = draw();
        s.f1_gf = draw();
        s.f2_bjw = draw();
        s.f2_gf = draw();
        s.f3_abs_error = draw();
        scores.push_back(s);
    }
    const auto table = format_consistency_table(consistency_matrix(scores));
    CHECK(table.find("* indicates p < .05. ** indicates p < .01.") != std::string::npos);
    CHECK(table.find("f1_bjw") != std::string::npos);
}
