// Command-line front end: run the pipeline, evaluate a predicted graph
// against a ground truth, or run the missing-variable ablation harness.

#include <iostream>

#include <CLI11.hpp>

#include "iris/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitBackendError = 2;
constexpr int kExitInternalError = 3;

iris::PipelineConfig load_config(const std::string& path) {
    return iris::config_from_json(iris::read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iris: real-time causal discovery pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir, algo, cache_mode, cache_dir, fixture_corpus, allowlist_csv;
    double significance = -1, lambda1 = -1, edge_threshold = -1, h_tol = -1;
    double alpha = -1, beta = -1, proposal_alpha = -1;
    long corpus_threshold = -1, iterations = -1, pmi_topk = -1, evidence_k = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "pipeline config JSON")->required();
        cmd->add_option("--output-dir", output_dir);
        cmd->add_option("--algo", algo)->check(CLI::IsMember({"pc", "ges", "notears"}));
        cmd->add_option("--significance", significance);
        cmd->add_option("--lambda1", lambda1);
        cmd->add_option("--edge-threshold", edge_threshold);
        cmd->add_option("--h-tol", h_tol);
        cmd->add_option("--alpha", alpha);
        cmd->add_option("--beta", beta);
        cmd->add_option("--proposal-alpha", proposal_alpha);
        cmd->add_option("--corpus-threshold", corpus_threshold);
        cmd->add_option("--iterations", iterations);
        cmd->add_option("--pmi-topk", pmi_topk);
        cmd->add_option("--evidence-k", evidence_k);
        cmd->add_option("--fixture-corpus", fixture_corpus);
        cmd->add_option("--domain-allowlist", allowlist_csv, "comma-separated hosts");
        cmd->add_option("--cache-dir", cache_dir);
    };

    auto* run_cmd = app.add_subcommand("run", "run the iterative discovery pipeline");
    add_common(run_cmd);

    auto* record_cmd = app.add_subcommand("record", "run while recording the replay cache");
    add_common(record_cmd);

    auto* replay_cmd = app.add_subcommand("replay", "run strictly from the replay cache");
    add_common(replay_cmd);

    auto* eval_cmd = app.add_subcommand("evaluate", "score a predicted graph against truth");
    std::string predicted_path, truth_path;
    bool eval_json = false;
    eval_cmd->add_option("predicted", predicted_path, "predicted graph-json")->required();
    eval_cmd->add_option("truth", truth_path, "ground-truth graph-json")->required();
    eval_cmd->add_flag("--json", eval_json, "emit JSON instead of the table");

    auto* ablate_cmd = app.add_subcommand("ablate", "missing-variable success-rate harness");
    std::string ablate_truth_path;
    add_common(ablate_cmd);
    ablate_cmd->add_option("--truth", ablate_truth_path, "ground-truth graph-json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval_cmd->parsed()) {
            const iris::GraphEvalReport report =
                iris::evaluate_graph_files(predicted_path, truth_path);
            std::cout << (eval_json ? iris::report_to_json(report)
                                    : iris::report_to_table(report));
            return kExitOk;
        }

        iris::PipelineConfig config = load_config(config_path);
        if (!output_dir.empty()) config.output_dir = output_dir;
        if (!algo.empty())
            config.algo = algo == "pc"    ? iris::DiscoveryAlgo::PC
                          : algo == "ges" ? iris::DiscoveryAlgo::GES
                                          : iris::DiscoveryAlgo::NOTEARS;
        if (significance >= 0) config.significance = significance;
        if (lambda1 >= 0) config.notears.lambda1 = lambda1;
        if (edge_threshold >= 0) config.notears.edge_threshold = edge_threshold;
        if (h_tol >= 0) config.notears.h_tolerance = h_tol;
        if (alpha >= 0) config.alpha = alpha;
        if (beta >= 0) config.beta = beta;
        if (proposal_alpha >= 0) config.proposal_alpha = proposal_alpha;
        if (corpus_threshold >= 0) config.corpus_threshold = corpus_threshold;
        if (iterations >= 0) config.iterations = iterations;
        if (pmi_topk >= 0) config.pmi_topk = pmi_topk;
        if (evidence_k >= 0) config.evidence_k = evidence_k;
        if (!fixture_corpus.empty()) config.backends.fixture_corpus_path = fixture_corpus;
        if (!cache_dir.empty()) config.backends.cache_dir = cache_dir;
        if (!allowlist_csv.empty()) config.domain_allowlist = iris::split(allowlist_csv, ',');
        if (record_cmd->parsed()) config.backends.cache_mode = "record";
        if (replay_cmd->parsed()) config.backends.cache_mode = "replay";

        if (ablate_cmd->parsed()) {
            const iris::CausalGraph truth =
                iris::graph_from_json(iris::read_file(ablate_truth_path));
            const iris::AblationReport report = iris::ablate_missing_variable(truth, config);
            for (const auto& trial : report.trials) {
                std::cout << "removed=" << trial.removed_variable << " proposed=[";
                for (size_t i = 0; i < trial.proposed.size(); ++i)
                    std::cout << (i ? "," : "") << trial.proposed[i];
                std::cout << "]\n";
            }
            std::cout << "success_rate " << report.rate << "\n";
            return kExitOk;
        }

        const iris::RunManifest manifest = iris::run_pipeline(config);
        std::cout << "final graph: " << manifest.final_graph.nodes().size() << " nodes, "
                  << manifest.final_graph.edge_count() << " edges; artifacts in "
                  << config.output_dir << "\n";
        for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
        return kExitOk;
    } catch (const iris::BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackendError;
    } catch (const iris::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
}
