// silicon: staged evaluation harness for LLM-generated survey samples.
//   silicon plan|run|score|curves|consistency|report --spec <path>
//          [--mock <persona-config>] [--seed N] [--out <dir>]

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "silicon/http_provider.hpp"
#include "silicon/mock_provider.hpp"
#include "silicon/orchestrator.hpp"

namespace {

using namespace silicon;

gateway::PersonaModel load_persona(const std::string& arg) {
    std::ifstream in(arg);
    if (in) {
        nlohmann::json doc;
        in >> doc;
        return gateway::PersonaModel::from_json(doc);
    }
    if (!arg.empty() && arg.front() == '{')
        return gateway::PersonaModel::from_json(nlohmann::json::parse(arg));
    return gateway::PersonaModel::from_json(nlohmann::json{{"kind", arg}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"silicon sample evaluation harness"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string mock_config;
    std::string out_override;
    std::int64_t seed_override = -1;

    app.add_option("--spec", spec_path, "study spec JSON")->required();
    app.add_option("--mock", mock_config,
                   "mock persona config (JSON file, inline JSON, or kind name); "
                   "run offline instead of calling providers");
    app.add_option("--seed", seed_override, "override bootstrap and mock seeds");
    app.add_option("--out", out_override, "override the output directory");

    auto* plan = app.add_subcommand("plan", "validate spec and print request counts");
    auto* run = app.add_subcommand("run", "execute all prompt units (resumable)");
    auto* score = app.add_subcommand("score", "apply exclusions and compute scores");
    auto* curves = app.add_subcommand("curves", "render specification curves");
    auto* consistency = app.add_subcommand("consistency", "cross-feature correlation matrix");
    auto* report = app.add_subcommand("report", "write the summary report");

    CLI11_PARSE(app, argc, argv);

    try {
        auto spec = orchestrator::StudySpec::from_file(spec_path);
        if (!out_override.empty()) spec.output_dir = out_override;
        if (seed_override >= 0) {
            spec.bootstrap_seed = static_cast<std::uint64_t>(seed_override);
            spec.mock_seed = static_cast<std::uint64_t>(seed_override);
        }
        orchestrator::Study study(std::move(spec));

        if (plan->parsed()) return orchestrator::cmd_plan(study);
        if (run->parsed()) {
            std::shared_ptr<gateway::Provider> provider;
            if (!mock_config.empty()) {
                provider = std::make_shared<gateway::MockProvider>(
                    study.participants(), study.scales(), load_persona(mock_config),
                    study.spec().mock_seed);
            } else {
                provider = std::make_shared<gateway::HttpChatProvider>();
            }
            return orchestrator::cmd_run(study, std::move(provider));
        }
        if (score->parsed()) return orchestrator::cmd_score(study);
        if (curves->parsed()) return orchestrator::cmd_curves(study);
        if (consistency->parsed()) return orchestrator::cmd_consistency(study);
        if (report->parsed()) return orchestrator::cmd_report(study);
    } catch (const orchestrator::SpecValidation& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return orchestrator::kExitValidation;
    } catch (const orchestrator::MissingRunArtifacts& e) {
        std::cerr << "error: " << e.what() << "\n";
        return orchestrator::kExitMissingPrereq;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return orchestrator::kExitValidation;
    }
    return orchestrator::kExitOk;
}
