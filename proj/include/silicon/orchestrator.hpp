#pragma once

// Study orchestration: validates a StudySpec, and implements the staged
// commands plan -> run -> score -> curves/consistency/report over a
// write-once run directory. The run stage is the only one that touches a
// provider; everything downstream recomputes from the response log.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "silicon/decision_grid.hpp"
#include "silicon/digest.hpp"
#include "silicon/feature_metrics.hpp"
#include "silicon/mock_provider.hpp"
#include "silicon/prompt_builder.hpp"
#include "silicon/provider_gateway.hpp"
#include "silicon/response_intake.hpp"
#include "silicon/spec_curve.hpp"
#include "silicon/stats.hpp"
#include "silicon/study_model.hpp"

namespace silicon::orchestrator {

namespace fs = std::filesystem;

struct SpecValidation : std::runtime_error {
    SpecValidation(const std::string& field, const std::string& message)
        : std::runtime_error("spec." + field + ": " + message) {}
};

struct MissingRunArtifacts : std::runtime_error {
    explicit MissingRunArtifacts(const std::string& path)
        : std::runtime_error("missing run artifact: " + path) {}
};

// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPartialRun = 2;
inline constexpr int kExitMissingPrereq = 3;

struct StudySpec {
    std::string dataset_path;
    std::string scales_path;     // empty -> built-in scales
    std::string grid_preset;     // one of preset or grid_path
    std::string grid_path;
    std::string template_path;   // empty -> default template
    std::string output_dir = "run";
    std::uint64_t bootstrap_seed = 1;
    std::uint64_t mock_seed = 1;
    int bootstrap_iterations = 2000;
    double completeness_threshold = 0.5;
    int workers = 4;
    double requests_per_minute = 0.0;
    bool strict_load = false;
    std::string correlation_method = "pearson";

    static StudySpec from_json(const nlohmann::json& doc) {
        StudySpec spec;
        spec.dataset_path = doc.value("dataset", "");
        spec.scales_path = doc.value("scales", "");
        spec.grid_preset = doc.value("grid_preset", "");
        spec.grid_path = doc.value("grid", "");
        spec.template_path = doc.value("template", "");
        spec.output_dir = doc.value("output_dir", spec.output_dir);
        if (doc.contains("seeds")) {
            spec.bootstrap_seed = doc["seeds"].value("bootstrap", spec.bootstrap_seed);
            spec.mock_seed = doc["seeds"].value("mock", spec.mock_seed);
        }
        spec.bootstrap_iterations = doc.value("bootstrap_iterations", spec.bootstrap_iterations);
        spec.completeness_threshold =
            doc.value("completeness_threshold", spec.completeness_threshold);
        spec.workers = doc.value("workers", spec.workers);
        spec.requests_per_minute = doc.value("requests_per_minute", spec.requests_per_minute);
        spec.strict_load = doc.value("strict_load", spec.strict_load);
        spec.correlation_method = doc.value("correlation_method", spec.correlation_method);
        return spec;
    }

    static StudySpec from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw SpecValidation("(file)", "cannot open spec: " + path);
        nlohmann::json doc;
        in >> doc;
        return from_json(doc);
    }
};

namespace detail {

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingRunArtifacts(path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// Loaded, validated study state shared by the commands.
class Study {
  public:
    explicit Study(StudySpec spec) : spec_(std::move(spec)) {
        if (spec_.dataset_path.empty())
            throw SpecValidation("dataset", "path is required");
        if (!fs::exists(spec_.dataset_path))
            throw SpecValidation("dataset", "file does not exist: " + spec_.dataset_path);
        if (spec_.grid_preset.empty() && spec_.grid_path.empty())
            throw SpecValidation("grid", "either grid_preset or grid is required");
        if (!spec_.grid_path.empty() && !fs::exists(spec_.grid_path))
            throw SpecValidation("grid", "file does not exist: " + spec_.grid_path);
        if (spec_.completeness_threshold < 0.0 || spec_.completeness_threshold > 1.0)
            throw SpecValidation("completeness_threshold", "must be in [0,1]");
        if (spec_.bootstrap_iterations < 1)
            throw SpecValidation("bootstrap_iterations", "must be >= 1");

        if (spec_.scales_path.empty()) {
            scales_ = study::builtin_scales();
        } else {
            std::ifstream in(spec_.scales_path);
            if (!in) throw SpecValidation("scales", "cannot open: " + spec_.scales_path);
            nlohmann::json doc;
            in >> doc;
            scales_ = study::scales_from_json(doc);
        }

        if (!spec_.template_path.empty()) {
            std::ifstream in(spec_.template_path);
            if (!in) throw SpecValidation("template", "cannot open: " + spec_.template_path);
            nlohmann::json doc;
            in >> doc;
            template_ = prompt::PromptTemplate::from_json(doc);
        }

        grid_ = spec_.grid_path.empty()
                    ? grid::grid_preset(spec_.grid_preset)
                    : [&] {
                          std::ifstream in(spec_.grid_path);
                          nlohmann::json doc;
                          in >> doc;
                          return grid::grid_from_json(doc);
                      }();
        configurations_ = grid::enumerate_configurations(grid_);

        const std::string dataset_bytes = detail::read_file(spec_.dataset_path);
        dataset_digest_ = digest::sha256_hex_short(dataset_bytes);
        std::istringstream stream(dataset_bytes);
        auto loaded = study::load_human_dataset(stream, scales_);
        if (spec_.strict_load && !loaded.errors.empty()) {
            const auto& e = loaded.errors.front();
            throw SpecValidation("dataset", "row " + std::to_string(e.row) + " " +
                                                e.column + ": " + e.message);
        }
        participants_ = std::move(loaded.records);
        load_errors_ = std::move(loaded.errors);
        if (participants_.empty())
            throw SpecValidation("dataset", "no complete participant records");

        human_bjw_ = metrics::human_scores(participants_, scale("bjw"));
        human_gf_ = metrics::human_scores(participants_, scale("gf"));
        std::vector<double> bjw_raw, gf_raw;
        for (const auto& p : participants_) {
            bjw_raw.push_back(human_bjw_.at(p.participant_id).raw);
            gf_raw.push_back(human_gf_.at(p.participant_id).raw);
        }
        human_r_ = stats::pearson(bjw_raw, gf_raw);
    }

    const StudySpec& spec() const { return spec_; }
    const grid::DecisionGrid& decision_grid() const { return grid_; }
    const std::vector<grid::Configuration>& configurations() const { return configurations_; }
    const std::vector<study::ParticipantRecord>& participants() const { return participants_; }
    const std::vector<study::ScaleDefinition>& scales() const { return scales_; }
    const prompt::PromptTemplate& prompt_template() const { return template_; }
    const stats::CorrelationEstimate& human_r() const { return human_r_; }
    const metrics::HumanScores& human_scores_bjw() const { return human_bjw_; }
    const metrics::HumanScores& human_scores_gf() const { return human_gf_; }

    const study::ScaleDefinition& scale(const std::string& scale_id) const {
        for (const auto& s : scales_)
            if (s.scale_id == scale_id) return s;
        throw SpecValidation("scales", "scale not defined: " + scale_id);
    }

    fs::path out(const std::string& name) const {
        return fs::path(spec_.output_dir) / name;
    }

    std::vector<gateway::CompletionRequest> all_requests() const {
        std::vector<gateway::CompletionRequest> requests;
        for (const auto& config : configurations_) {
            for (const auto& participant : participants_) {
                const auto plan =
                    prompt::build_prompt_plan(config, participant, scales_, template_);
                for (const auto& unit : plan.units) {
                    gateway::CompletionRequest request;
                    request.config_id = plan.config_id;
                    request.participant_id = plan.participant_id;
                    request.model = config.model;
                    request.sampling = config.sampling;
                    request.prompt = unit;
                    request.template_version = plan.template_version;
                    requests.push_back(std::move(request));
                }
            }
        }
        return requests;
    }

    nlohmann::json provenance() const {
        nlohmann::json doc;
        doc["dataset_digest"] = dataset_digest_;
        doc["grid_digest"] = digest::sha256_hex_short(grid::grid_to_json(grid_).dump());
        doc["template_version"] = template_.version();
        doc["seeds"] = {{"bootstrap", spec_.bootstrap_seed}, {"mock", spec_.mock_seed}};
        doc["bootstrap_iterations"] = spec_.bootstrap_iterations;
        doc["completeness_threshold"] = spec_.completeness_threshold;
        doc["configuration_count"] = configurations_.size();
        doc["participant_count"] = participants_.size();
        doc["correlation_method"] = spec_.correlation_method;
        return doc;
    }

    metrics::CorrelationMethod correlation_method() const {
        return spec_.correlation_method == "spearman" ? metrics::CorrelationMethod::spearman
                                                      : metrics::CorrelationMethod::pearson;
    }

  private:
    StudySpec spec_;
    std::vector<study::ScaleDefinition> scales_;
    prompt::PromptTemplate template_;
    grid::DecisionGrid grid_;
    std::vector<grid::Configuration> configurations_;
    std::vector<study::ParticipantRecord> participants_;
    std::vector<study::RowError> load_errors_;
    std::string dataset_digest_;
    metrics::HumanScores human_bjw_;
    metrics::HumanScores human_gf_;
    stats::CorrelationEstimate human_r_;
};

// ---- plan ----

inline int cmd_plan(const Study& study, std::ostream& log = std::cout) {
    const auto& configs = study.configurations();
    std::size_t units = 0;
    // unit count per plan depends only on strategy and scale shapes
    for (const auto& config : configs) {
        std::size_t per_plan = 1;
        if (config.strategy == grid::Strategy::scale_by_scale)
            per_plan = study.scales().size();
        else if (config.strategy == grid::Strategy::item_by_item) {
            per_plan = 0;
            for (const auto& scale : study.scales()) per_plan += scale.items.size();
        }
        units += per_plan * study.participants().size();
    }
    auto cache = std::make_shared<gateway::ResponseCache>();
    if (fs::exists(study.out("responses.jsonl")))
        cache = std::make_shared<gateway::ResponseCache>(study.out("responses.jsonl").string());

    detail::write_file(study.out("grid.json"),
                       grid::grid_to_json(study.decision_grid()).dump(2) + "\n");
    detail::write_file(study.out("provenance.json"), study.provenance().dump(2) + "\n");

    log << configs.size() << " configurations, "
        << configs.size() * study.participants().size() << " simulated participants\n"
        << units << " prompt units, approximately " << cache->size()
        << " responses already cached\n";
    return kExitOk;
}

// ---- run ----

struct RunOutcome {
    std::size_t requests = 0;
    std::size_t failures = 0;  // transport/provider errors after retries
    std::map<std::string, intake::ConfigDataset> datasets;  // by config_id
};

inline std::map<std::string, std::vector<intake::ParsedResponse>> parse_config_units(
    const Study& study, const grid::Configuration& config,
    const gateway::ResponseCache& cache, std::size_t* missing = nullptr,
    std::size_t* failures = nullptr) {
    std::map<std::string, std::vector<intake::ParsedResponse>> by_participant;
    for (const auto& participant : study.participants()) {
        const auto plan = prompt::build_prompt_plan(config, participant, study.scales(),
                                                    study.prompt_template());
        for (const auto& unit : plan.units) {
            gateway::CompletionRequest request;
            request.config_id = plan.config_id;
            request.participant_id = plan.participant_id;
            request.model = config.model;
            request.sampling = config.sampling;
            request.prompt = unit;
            request.template_version = plan.template_version;
            const auto result = cache.lookup(request.cache_key());
            intake::ParsedResponse parsed;
            parsed.unit_id = unit.unit_id;
            if (!result) {
                if (missing) ++*missing;
                parsed.outcome = intake::Outcome::unparseable;
            } else if (result->status == gateway::Status::ok) {
                parsed = intake::parse_ratings(result->raw_text, unit);
            } else if (result->status == gateway::Status::refusal) {
                parsed.outcome = intake::Outcome::refusal;
            } else {
                if (failures) ++*failures;
                parsed.outcome = intake::Outcome::unparseable;
            }
            by_participant[participant.participant_id].push_back(std::move(parsed));
        }
    }
    return by_participant;
}

inline std::vector<intake::ConfigDataset> assemble_all(const Study& study,
                                                       const gateway::ResponseCache& cache,
                                                       std::size_t* missing = nullptr,
                                                       std::size_t* failures = nullptr) {
    std::vector<intake::ConfigDataset> datasets;
    for (const auto& config : study.configurations()) {
        const auto parsed = parse_config_units(study, config, cache, missing, failures);
        datasets.push_back(intake::assemble_config_dataset(
            config.config_id(), parsed, study.participants(), study.scales()));
    }
    return datasets;
}

inline int cmd_run(const Study& study, std::shared_ptr<gateway::Provider> provider,
                   std::ostream& log = std::cout) {
    auto cache =
        std::make_shared<gateway::ResponseCache>(study.out("responses.jsonl").string());
    gateway::RetryPolicy retry;
    retry.jitter_seed = study.spec().mock_seed;
    gateway::Gateway gw(std::move(provider), cache, retry,
                        study.spec().requests_per_minute);

    const auto requests = study.all_requests();
    const auto results = gw.complete_all(requests, study.spec().workers);

    std::size_t failures = 0;
    for (const auto& result : results)
        if (result.status == gateway::Status::transport_error ||
            result.status == gateway::Status::provider_error)
            ++failures;

    const auto datasets = assemble_all(study, *cache);
    for (const auto& dataset : datasets)
        detail::write_file(study.out("config_data/" + dataset.config_id + ".csv"),
                           intake::dataset_to_csv(dataset, study.scales()));

    detail::write_file(study.out("grid.json"),
                       grid::grid_to_json(study.decision_grid()).dump(2) + "\n");
    detail::write_file(study.out("provenance.json"), study.provenance().dump(2) + "\n");
    log << requests.size() << " units executed, " << failures << " failed\n";
    return failures == 0 ? kExitOk : kExitPartialRun;
}

// ---- score ----

struct ScoreArtifacts {
    std::vector<metrics::ConfigScores> scores;
    intake::ExclusionReport exclusions;
    stats::BaselineBand baseline_bjw;
    stats::BaselineBand baseline_gf;
};

inline std::string scores_to_csv(const std::vector<metrics::ConfigScores>& scores) {
    std::string csv =
        "config_id,provider,model,setting,demographics,strategy,n,"
        "f1_bjw,f1_gf,f2_bjw,f2_gf,f3_r_hat,f3_abs_error,"
        "f1_bjw_eligible,f1_gf_eligible,f2_eligible,f3_eligible\n";
    auto cell = [](const std::optional<double>& v) {
        return v ? detail::fmt17(*v) : std::string();
    };
    for (const auto& s : scores) {
        const auto config = grid::parse_config_id(s.config_id);
        csv += s.config_id + "," + config.model.provider_id + "," +
               config.model.model_id + "," + grid::setting_token(config.sampling) +
               "," + grid::to_string(config.demographics_level) + "," +
               grid::to_string(config.strategy) + "," + std::to_string(s.n_rows) +
               "," + cell(s.f1_bjw) + "," + cell(s.f1_gf) + "," + cell(s.f2_bjw) +
               "," + cell(s.f2_gf) + "," + cell(s.f3_r_hat) + "," +
               cell(s.f3_abs_error) + "," + (s.f1_bjw ? "1" : "0") + "," +
               (s.f1_gf ? "1" : "0") + "," + (s.f2_bjw ? "1" : "0") + "," +
               (s.f3_abs_error ? "1" : "0") + "\n";
    }
    return csv;
}

inline std::vector<metrics::ConfigScores> scores_from_csv(const std::string& csv) {
    std::vector<metrics::ConfigScores> scores;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream fs(line);
        while (std::getline(fs, field, ',')) fields.push_back(field);
        fields.resize(17);
        metrics::ConfigScores s;
        s.config_id = fields[0];
        s.n_rows = static_cast<std::size_t>(std::stoull(fields[6]));
        auto opt = [](const std::string& f) -> std::optional<double> {
            if (f.empty()) return std::nullopt;
            return std::stod(f);
        };
        s.f1_bjw = opt(fields[7]);
        s.f1_gf = opt(fields[8]);
        s.f2_bjw = opt(fields[9]);
        s.f2_gf = opt(fields[10]);
        s.f3_r_hat = opt(fields[11]);
        s.f3_abs_error = opt(fields[12]);
        scores.push_back(std::move(s));
    }
    return scores;
}

inline ScoreArtifacts compute_scores(const Study& study,
                                     const gateway::ResponseCache& cache) {
    ScoreArtifacts artifacts;
    auto datasets = assemble_all(study, cache);

    for (const auto& dataset : datasets) {
        auto& counts = artifacts.exclusions.outcome_counts[dataset.config_id];
        for (const auto& [participant_id, outcome] : dataset.exclusion_annotations)
            ++counts[intake::to_string(outcome)];
    }

    auto [retained, excluded] =
        intake::apply_config_threshold(datasets, study.spec().completeness_threshold);
    for (const auto& dataset : excluded)
        artifacts.exclusions.configs_excluded_by_threshold.push_back(dataset.config_id);

    for (const auto& dataset : retained) {
        if (!dataset.rows.empty())
            for (const auto& [scale_id, flagged] :
                 intake::flag_zero_variance(dataset, study.scales()))
                artifacts.exclusions.zero_variance_flags[{dataset.config_id, scale_id}] =
                    flagged;
        artifacts.scores.push_back(metrics::score_configuration(
            dataset, study.human_scores_bjw(), study.human_scores_gf(), study.human_r(),
            study.scales(), study.correlation_method()));
    }

    std::vector<double> bjw_norm, gf_norm;
    for (const auto& [id, score] : study.human_scores_bjw()) bjw_norm.push_back(score.normalized);
    for (const auto& [id, score] : study.human_scores_gf()) gf_norm.push_back(score.normalized);
    artifacts.baseline_bjw = stats::bootstrap_human_baseline(
        bjw_norm, study.spec().bootstrap_iterations, study.spec().bootstrap_seed);
    artifacts.baseline_gf = stats::bootstrap_human_baseline(
        gf_norm, study.spec().bootstrap_iterations, study.spec().bootstrap_seed + 1);
    return artifacts;
}

inline nlohmann::json baselines_to_json(const Study& study, const ScoreArtifacts& artifacts) {
    auto band = [](const stats::BaselineBand& b) {
        return nlohmann::json{{"point", b.point},
                              {"ci_low", b.ci_low},
                              {"ci_high", b.ci_high},
                              {"iterations", b.iterations},
                              {"seed", b.seed}};
    };
    nlohmann::json doc;
    doc["bjw"] = band(artifacts.baseline_bjw);
    doc["gf"] = band(artifacts.baseline_gf);
    doc["human_r"] = {{"r", study.human_r().r},
                      {"ci_low", study.human_r().ci_low},
                      {"ci_high", study.human_r().ci_high},
                      {"p_value", study.human_r().p_value},
                      {"n", study.human_r().n}};
    doc["provenance"] = study.provenance();
    return doc;
}

inline int cmd_score(const Study& study, std::ostream& log = std::cout) {
    if (!fs::exists(study.out("responses.jsonl")))
        throw MissingRunArtifacts(study.out("responses.jsonl").string());
    gateway::ResponseCache cache(study.out("responses.jsonl").string());
    const auto artifacts = compute_scores(study, cache);

    detail::write_file(study.out("scores.csv"), scores_to_csv(artifacts.scores));
    detail::write_file(study.out("baselines.json"),
                       baselines_to_json(study, artifacts).dump(2) + "\n");
    detail::write_file(study.out("exclusions.json"),
                       intake::exclusion_report_to_json(artifacts.exclusions).dump(2) + "\n");

    std::size_t f1_bjw = 0, f1_gf = 0, f2 = 0, f3 = 0;
    for (const auto& s : artifacts.scores) {
        f1_bjw += s.f1_bjw.has_value();
        f1_gf += s.f1_gf.has_value();
        f2 += s.f2_bjw.has_value();
        f3 += s.f3_abs_error.has_value();
    }
    log << artifacts.scores.size() << " configurations scored (F1 bjw/gf: " << f1_bjw
        << "/" << f1_gf << ", F2: " << f2 << ", F3: " << f3 << ")\n";
    return kExitOk;
}

// ---- curves / consistency / report ----

inline int cmd_curves(const Study& study, std::ostream& log = std::cout) {
    if (!fs::exists(study.out("scores.csv")))
        throw MissingRunArtifacts(study.out("scores.csv").string());
    const auto scores = scores_from_csv(detail::read_file(study.out("scores.csv")));
    const auto baselines =
        nlohmann::json::parse(detail::read_file(study.out("baselines.json")));

    auto band_of = [&](const char* scale_id) {
        const auto& b = baselines.at(scale_id);
        return curve::ReferenceBand{b.at("ci_low").get<double>(),
                                    b.at("ci_high").get<double>(),
                                    b.at("point").get<double>()};
    };
    const auto& hr = baselines.at("human_r");
    const curve::ReferenceBand human_band{hr.at("ci_low").get<double>(),
                                          hr.at("ci_high").get<double>(),
                                          hr.at("r").get<double>()};

    const std::vector<std::pair<curve::Metric, std::optional<curve::ReferenceBand>>>
        curves = {{curve::Metric::f1_bjw, std::nullopt},
                  {curve::Metric::f1_gf, std::nullopt},
                  {curve::Metric::f2_bjw, band_of("bjw")},
                  {curve::Metric::f2_gf, band_of("gf")},
                  {curve::Metric::f3, human_band}};
    std::size_t written = 0;
    for (const auto& [metric, reference] : curves) {
        try {
            const auto model = curve::build_curve(scores, metric, reference);
            const auto name = curve::to_string(metric);
            detail::write_file(study.out("curves/" + name + ".svg"),
                               curve::render_curve_svg(model));
            detail::write_file(study.out("curves/" + name + ".csv"),
                               curve::render_curve_csv(model));
            ++written;
        } catch (const curve::NoEligibleConfigurations& e) {
            log << "skipping curve: " << e.what() << "\n";
        }
    }
    log << written << " curves written\n";
    return kExitOk;
}

inline int cmd_consistency(const Study& study, std::ostream& log = std::cout) {
    if (!fs::exists(study.out("scores.csv")))
        throw MissingRunArtifacts(study.out("scores.csv").string());
    const auto scores = scores_from_csv(detail::read_file(study.out("scores.csv")));
    try {
        const auto matrix = metrics::consistency_matrix(scores);
        auto doc = metrics::consistency_to_json(matrix);
        doc["provenance"] = study.provenance();
        detail::write_file(study.out("consistency.json"), doc.dump(2) + "\n");
        detail::write_file(study.out("consistency.txt"),
                           metrics::format_consistency_table(matrix));
        std::string csv = "variable";
        for (const auto* v : metrics::kConsistencyVariables) csv += std::string(",") + v;
        csv += "\n";
        for (std::size_t i = 0; i < 5; ++i) {
            csv += metrics::kConsistencyVariables[i];
            for (std::size_t j = 0; j < 5; ++j)
                csv += "," + detail::fmt17(matrix.cells[i][j].r);
            csv += "\n";
        }
        detail::write_file(study.out("consistency.csv"), csv);
        log << "consistency matrix over n=" << matrix.n << " configurations\n";
    } catch (const stats::TooFewObservations& e) {
        log << "consistency matrix unavailable: " << e.what() << "\n";
    } catch (const stats::ZeroVariance& e) {
        log << "consistency matrix unavailable: " << e.what() << "\n";
    }
    return kExitOk;
}

inline int cmd_report(const Study& study, std::ostream& log = std::cout) {
    if (!fs::exists(study.out("scores.csv")))
        throw MissingRunArtifacts(study.out("scores.csv").string());
    const auto provenance = study.provenance();
    std::string md = "# Silicon sample evaluation report\n\n";
    md += "## Provenance\n\n```json\n" + provenance.dump(2) + "\n```\n\n";
    md += "## Human ground truth\n\n";
    {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "BJW-Gut Feelings correlation: r = %.2f, 95%% CI [%.2f, %.2f], n = %d\n\n",
                      study.human_r().r, study.human_r().ci_low, study.human_r().ci_high,
                      study.human_r().n);
        md += buf;
    }
    md += "## Artifacts\n\n";
    const std::vector<std::string> artifacts = {
        "grid.json",        "responses.jsonl",  "scores.csv",
        "baselines.json",   "exclusions.json",  "consistency.json",
        "consistency.txt",  "curves/f1_bjw.svg", "curves/f1_gf.svg",
        "curves/f2_bjw.svg", "curves/f2_gf.svg", "curves/f3.svg"};
    for (const auto& name : artifacts) {
        const auto path = study.out(name);
        if (!fs::exists(path)) continue;
        md += "- [" + name + "](" + name + ") sha256:" +
              digest::sha256_hex_short(detail::read_file(path)) + "\n";
    }
    if (fs::exists(study.out("consistency.txt"))) {
        md += "\n## Consistency across data features\n\n```\n" +
              detail::read_file(study.out("consistency.txt")) + "```\n";
    }
    detail::write_file(study.out("report.md"), md);
    log << "report written to " << study.out("report.md").string() << "\n";
    return kExitOk;
}

}  // namespace silicon::orchestrator
