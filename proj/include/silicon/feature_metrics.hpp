#pragma once

// The three evaluation features over per-configuration datasets, plus the
// cross-feature consistency matrix:
//   Feature 1 - participant ranking: correlation between silicon and human
//               scale scores, paired by participant.
//   Feature 2 - response distributions: W1 between normalized silicon and
//               human scores, with a bootstrapped human-human baseline.
//   Feature 3 - between-scale relationship: the silicon BJW/Gut Feelings
//               correlation versus the human one, scored as absolute error.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "silicon/response_intake.hpp"
#include "silicon/stats.hpp"
#include "silicon/study_model.hpp"

namespace silicon::metrics {

struct MissingHumanMatch : std::invalid_argument {
    explicit MissingHumanMatch(const std::string& participant_id)
        : std::invalid_argument("no human score for participant: " + participant_id) {}
};

struct DistanceEstimate {
    double w = 0.0;
    std::string scale_id;
};

enum class CorrelationMethod { pearson, spearman };

struct ConfigScores {
    std::string config_id;
    std::optional<double> f1_bjw;
    std::optional<double> f1_gf;
    std::optional<double> f2_bjw;
    std::optional<double> f2_gf;
    std::optional<double> f3_abs_error;
    std::optional<double> f3_r_hat;
    std::size_t n_rows = 0;

    bool complete() const {
        return f1_bjw && f1_gf && f2_bjw && f2_gf && f3_abs_error;
    }
};

// Human scores for one scale, keyed by participant id.
using HumanScores = std::map<std::string, study::ScaleScore>;

inline HumanScores human_scores(const std::vector<study::ParticipantRecord>& humans,
                                const study::ScaleDefinition& scale) {
    HumanScores scores;
    for (const auto& participant : humans)
        scores[participant.participant_id] = study::score_participant(scale, participant);
    return scores;
}

inline stats::CorrelationEstimate feature1_ranking(
    const intake::ConfigDataset& dataset, const HumanScores& human,
    const std::string& scale_id,
    CorrelationMethod method = CorrelationMethod::pearson) {
    std::vector<double> silicon_raw, human_raw;
    for (const auto& row : dataset.rows) {
        const auto it = human.find(row.participant_id);
        if (it == human.end()) throw MissingHumanMatch(row.participant_id);
        silicon_raw.push_back(row.scores.at(scale_id).raw);
        human_raw.push_back(it->second.raw);
    }
    return method == CorrelationMethod::pearson
               ? stats::pearson(human_raw, silicon_raw)
               : stats::spearman(human_raw, silicon_raw);
}

inline DistanceEstimate feature2_distribution(const intake::ConfigDataset& dataset,
                                              const HumanScores& human,
                                              const std::string& scale_id) {
    std::vector<double> silicon_norm, human_norm;
    for (const auto& row : dataset.rows)
        silicon_norm.push_back(row.scores.at(scale_id).normalized);
    for (const auto& [id, score] : human) human_norm.push_back(score.normalized);
    return DistanceEstimate{stats::wasserstein_1d(silicon_norm, human_norm), scale_id};
}

inline std::pair<stats::CorrelationEstimate, double> feature3_relationship(
    const intake::ConfigDataset& dataset, const stats::CorrelationEstimate& human_r,
    const std::string& first_scale = "bjw", const std::string& second_scale = "gf") {
    std::vector<double> a, b;
    for (const auto& row : dataset.rows) {
        a.push_back(row.scores.at(first_scale).raw);
        b.push_back(row.scores.at(second_scale).raw);
    }
    const auto r_hat = stats::pearson(a, b);
    return {r_hat, std::fabs(r_hat.r - human_r.r)};
}

// Scores one retained configuration, honoring eligibility: zero-variance
// scales are scored for Feature 2 only, Feature 3 needs variance in both.
inline ConfigScores score_configuration(
    const intake::ConfigDataset& dataset, const HumanScores& human_bjw,
    const HumanScores& human_gf, const stats::CorrelationEstimate& human_r,
    const std::vector<study::ScaleDefinition>& scales,
    CorrelationMethod method = CorrelationMethod::pearson) {
    ConfigScores scores;
    scores.config_id = dataset.config_id;
    scores.n_rows = dataset.rows.size();
    if (dataset.rows.empty()) return scores;

    const auto variance_flags = intake::flag_zero_variance(dataset, scales);
    const bool bjw_varies = !variance_flags.at("bjw");
    const bool gf_varies = !variance_flags.at("gf");

    if (bjw_varies && dataset.rows.size() >= 3)
        scores.f1_bjw = feature1_ranking(dataset, human_bjw, "bjw", method).r;
    if (gf_varies && dataset.rows.size() >= 3)
        scores.f1_gf = feature1_ranking(dataset, human_gf, "gf", method).r;
    scores.f2_bjw = feature2_distribution(dataset, human_bjw, "bjw").w;
    scores.f2_gf = feature2_distribution(dataset, human_gf, "gf").w;
    if (bjw_varies && gf_varies && dataset.rows.size() >= 3) {
        const auto [r_hat, abs_error] = feature3_relationship(dataset, human_r);
        scores.f3_r_hat = r_hat.r;
        scores.f3_abs_error = abs_error;
    }
    return scores;
}

// ---- consistency across features ----

inline constexpr std::array<const char*, 5> kConsistencyVariables = {
    "f1_bjw", "f1_gf", "f2_bjw", "f2_gf", "f3_abs_error"};

struct ConsistencyMatrix {
    // cells[i][j] for i != j; diagonal is identically 1.
    std::array<std::array<stats::CorrelationEstimate, 5>, 5> cells{};
    int n = 0;  // complete-case configuration count
    std::array<double, 5> means{};
    std::array<double, 5> sds{};
};

inline std::string significance_stars(double p_value) {
    if (p_value < 0.01) return "**";
    if (p_value < 0.05) return "*";
    return "";
}

// Complete-case pairwise correlations over the five config-level scores.
// With accuracy_orientation the Feature 3 error column is negated so its
// sign reads as "higher is better", matching the other correlation-based
// columns.
inline ConsistencyMatrix consistency_matrix(const std::vector<ConfigScores>& scores,
                                            bool accuracy_orientation = false) {
    std::array<std::vector<double>, 5> columns;
    for (const auto& s : scores) {
        if (!s.complete()) continue;
        columns[0].push_back(*s.f1_bjw);
        columns[1].push_back(*s.f1_gf);
        columns[2].push_back(*s.f2_bjw);
        columns[3].push_back(*s.f2_gf);
        columns[4].push_back(accuracy_orientation ? -*s.f3_abs_error : *s.f3_abs_error);
    }
    if (columns[0].size() < 3) throw stats::TooFewObservations(columns[0].size());

    ConsistencyMatrix matrix;
    matrix.n = static_cast<int>(columns[0].size());
    for (std::size_t v = 0; v < 5; ++v) {
        double mean = 0.0;
        for (double x : columns[v]) mean += x;
        mean /= static_cast<double>(columns[v].size());
        double var = 0.0;
        for (double x : columns[v]) var += (x - mean) * (x - mean);
        var /= static_cast<double>(columns[v].size()) - 1.0;
        matrix.means[v] = mean;
        matrix.sds[v] = std::sqrt(var);
    }
    for (std::size_t i = 0; i < 5; ++i) {
        matrix.cells[i][i] =
            stats::CorrelationEstimate{1.0, matrix.n, 1.0, 1.0, 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            const auto est = stats::pearson(columns[i], columns[j]);
            matrix.cells[i][j] = est;
            matrix.cells[j][i] = est;
        }
    }
    return matrix;
}

inline nlohmann::json consistency_to_json(const ConsistencyMatrix& matrix) {
    nlohmann::json doc;
    doc["n"] = matrix.n;
    doc["variables"] = kConsistencyVariables;
    for (std::size_t v = 0; v < 5; ++v) {
        doc["means"].push_back(matrix.means[v]);
        doc["sds"].push_back(matrix.sds[v]);
    }
    doc["cells"] = nlohmann::json::array();
    for (std::size_t i = 0; i < 5; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < 5; ++j) {
            const auto& cell = matrix.cells[i][j];
            row.push_back({{"r", cell.r},
                           {"ci_low", cell.ci_low},
                           {"ci_high", cell.ci_high},
                           {"p_value", cell.p_value},
                           {"stars", significance_stars(cell.p_value)}});
        }
        doc["cells"].push_back(std::move(row));
    }
    return doc;
}

// Lower-triangular text table in the style of a correlation-matrix report.
inline std::string format_consistency_table(const ConsistencyMatrix& matrix) {
    std::string out = "Variable";
    for (std::size_t j = 0; j + 1 < 5; ++j)
        out += "\t" + std::to_string(j + 1);
    out += "\n";
    for (std::size_t i = 0; i < 5; ++i) {
        out += std::to_string(i + 1) + ". " + kConsistencyVariables[i];
        for (std::size_t j = 0; j < i; ++j) {
            const auto& cell = matrix.cells[i][j];
            char buf[96];
            std::snprintf(buf, sizeof(buf), "\t%.2f%s [%.2f, %.2f]", cell.r,
                          significance_stars(cell.p_value).c_str(), cell.ci_low,
                          cell.ci_high);
            out += buf;
        }
        out += "\n";
    }
    out += "Note. n = " + std::to_string(matrix.n) +
           ". * indicates p < .05. ** indicates p < .01.\n";
    return out;
}

}  // namespace silicon::metrics
