#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iris/backends.hpp"
#include "iris/graph.hpp"
#include "iris/metrics.hpp"
#include "iris/notears.hpp"
#include "iris/proposal.hpp"
#include "iris/verification.hpp"

namespace iris {

enum class DiscoveryAlgo { PC, GES, NOTEARS };

struct BackendConfig {
    // llm: "scripted" (script_path) or "http" (base_url/model/api_key_env)
    std::string llm_type = "scripted";
    std::string llm_script_path;
    std::string llm_base_url;
    std::string llm_model;
    std::string llm_api_key_env = "IRIS_LLM_API_KEY";

    // search: "fixture" (corpus_path); a live implementation plugs in here
    std::string search_type = "fixture";
    std::string fixture_corpus_path;

    // record/replay wrapper around the completion client
    std::string cache_mode = "passthrough";  // record | replay | passthrough
    std::string cache_dir;
};

struct PipelineConfig {
    std::vector<Variable> variables;
    size_t corpus_threshold = 20;
    DiscoveryAlgo algo = DiscoveryAlgo::GES;
    double significance = 0.05;
    NotearsConfig notears;
    double alpha = 0.5;  // verification accept threshold
    double beta = 0.5;   // verification reject threshold
    double proposal_alpha = 1.0;
    size_t pmi_topk = 5;
    size_t evidence_k = 10;
    size_t iterations = 0;  // 0 = discovery only
    std::vector<std::string> domain_allowlist;  // corpus collection filter
    BackendConfig backends;
    std::string output_dir = "out";
    uint64_t seed = 0;
};

PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& config);

struct IterationSummary {
    size_t index = 0;
    size_t corpus_size = 0;
    size_t corpus_shortfall = 0;
    std::vector<size_t> missing_per_column;
    size_t n_variables = 0;
    size_t statistical_edges = 0;
    size_t verified_edges = 0;
    size_t removed_edges = 0;
    size_t merged_edges = 0;
    size_t proposed_new = 0;
};

struct RunManifest {
    PipelineConfig config;
    std::vector<IterationSummary> iterations;
    CausalGraph final_graph;
    std::vector<std::string> final_variables;
    size_t llm_calls = 0;
    std::vector<std::string> warnings;
};

std::string manifest_to_json(const RunManifest& manifest);

// Runs the iterative pipeline and writes per-iteration artifacts
// (graph-json, dot, CSV table, verdict and candidate ledgers) plus
// manifest.json under config.output_dir.
RunManifest run_pipeline(const PipelineConfig& config);

GraphEvalReport evaluate_graph_files(const std::string& predicted_path,
                                     const std::string& truth_path);

struct AblationReport {
    std::vector<AblationTrial> trials;
    double rate = 0.0;
};

// For each node of the truth graph: drop it, run the proposal stage on the
// remaining variables, record whether it is re-proposed.
AblationReport ablate_missing_variable(const CausalGraph& truth, const PipelineConfig& config);

}  // namespace iris
