#include "iris/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "iris/extraction.hpp"
#include "iris/ges.hpp"
#include "iris/pc.hpp"
#include "iris/retrieval.hpp"

namespace fs = std::filesystem;

namespace iris {

namespace {

DiscoveryAlgo algo_from_string(const std::string& s) {
    const std::string k = norm_key(s);
    if (k == "pc") return DiscoveryAlgo::PC;
    if (k == "ges") return DiscoveryAlgo::GES;
    if (k == "notears") return DiscoveryAlgo::NOTEARS;
    throw InvalidArgument("unknown algo: " + s);
}

std::string algo_to_string(DiscoveryAlgo a) {
    switch (a) {
        case DiscoveryAlgo::PC: return "pc";
        case DiscoveryAlgo::GES: return "ges";
        case DiscoveryAlgo::NOTEARS: return "notears";
    }
    return "ges";
}

struct Backends {
    std::shared_ptr<CompletionClient> llm;
    std::shared_ptr<FixtureSearchClient> search;
};

Backends build_backends(const PipelineConfig& config) {
    Backends b;
    const auto& bc = config.backends;

    std::shared_ptr<CompletionClient> base;
    if (bc.llm_type == "scripted") {
        if (bc.llm_script_path.empty())
            throw InvalidArgument("scripted llm backend needs llm_script_path");
        base = std::make_shared<ScriptedCompletionClient>(
            ScriptedCompletionClient::from_json_file(bc.llm_script_path));
    } else if (bc.llm_type == "http") {
        HttpCompletionClient::Options opts;
        opts.base_url = bc.llm_base_url;
        opts.model = bc.llm_model;
        if (const char* key = std::getenv(bc.llm_api_key_env.c_str())) opts.api_key = key;
        base = std::make_shared<HttpCompletionClient>(std::move(opts));
    } else {
        throw InvalidArgument("unknown llm backend type: " + bc.llm_type);
    }

    if (bc.cache_mode == "passthrough") {
        b.llm = base;
    } else if (bc.cache_mode == "record" || bc.cache_mode == "replay") {
        if (bc.cache_dir.empty()) throw InvalidArgument("cache mode needs cache_dir");
        // Replay mode never touches the inner client.
        b.llm = std::make_shared<ReplayCompletionClient>(
            base, bc.cache_dir,
            bc.cache_mode == "record" ? CacheMode::Record : CacheMode::Replay);
    } else {
        throw InvalidArgument("unknown cache mode: " + bc.cache_mode);
    }

    if (bc.search_type != "fixture")
        throw InvalidArgument("unknown search backend type: " + bc.search_type);
    if (bc.fixture_corpus_path.empty())
        throw InvalidArgument("fixture search backend needs fixture_corpus_path");
    b.search = std::make_shared<FixtureSearchClient>(bc.fixture_corpus_path);
    for (const auto& v : config.variables) b.search->register_synonyms(v.name, v.synonyms);
    return b;
}

std::string verdicts_to_jsonl(const std::vector<VeracityVerdict>& verdicts) {
    std::ostringstream out;
    for (const auto& v : verdicts) {
        const char* label = v.label == VeracityLabel::Supports  ? "supports"
                            : v.label == VeracityLabel::Refutes ? "refutes"
                                                                : "unrelated";
        nlohmann::ordered_json j{{"claim", v.claim.text},
                                 {"doc_id", v.doc_id},
                                 {"label", label},
                                 {"fingerprint", stable_hash(v.claim.text + "|" + v.doc_id)}};
        out << j.dump() << "\n";
    }
    return out.str();
}

std::string candidates_to_jsonl(const std::vector<ProposalCandidate>& ledger) {
    std::ostringstream out;
    for (const auto& c : ledger) {
        nlohmann::ordered_json j{{"name", c.name},
                                 {"sources", c.source_doc_ids},
                                 {"verification_accepted", c.verification_accepted},
                                 {"aggregate_pmi", c.has_finite_pmi ? c.aggregate_pmi : 0.0},
                                 {"has_finite_pmi", c.has_finite_pmi}};
        out << j.dump() << "\n";
    }
    return out.str();
}

}  // namespace

PipelineConfig config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PipelineConfig c;
    for (const auto& v : j.at("variables")) {
        std::vector<std::string> domain, synonyms;
        for (const auto& d : v.at("domain")) domain.push_back(d.get<std::string>());
        if (v.contains("synonyms"))
            for (const auto& s : v.at("synonyms")) synonyms.push_back(s.get<std::string>());
        c.variables.emplace_back(v.at("name").get<std::string>(),
                                 v.value("description", std::string{}), domain, synonyms);
    }
    c.corpus_threshold = j.value("corpus_threshold", c.corpus_threshold);
    if (j.contains("algo")) c.algo = algo_from_string(j.at("algo").get<std::string>());
    c.significance = j.value("significance", c.significance);
    if (j.contains("notears")) {
        const auto& n = j.at("notears");
        c.notears.lambda1 = n.value("lambda1", c.notears.lambda1);
        c.notears.h_tolerance = n.value("h_tolerance", c.notears.h_tolerance);
        c.notears.max_outer = n.value("max_outer", c.notears.max_outer);
        c.notears.rho_init = n.value("rho_init", c.notears.rho_init);
        c.notears.rho_growth = n.value("rho_growth", c.notears.rho_growth);
        c.notears.edge_threshold = n.value("edge_threshold", c.notears.edge_threshold);
    }
    c.alpha = j.value("alpha", c.alpha);
    c.beta = j.value("beta", c.beta);
    c.proposal_alpha = j.value("proposal_alpha", c.proposal_alpha);
    c.pmi_topk = j.value("pmi_topk", c.pmi_topk);
    c.evidence_k = j.value("evidence_k", c.evidence_k);
    c.iterations = j.value("iterations", c.iterations);
    if (j.contains("domain_allowlist"))
        for (const auto& h : j.at("domain_allowlist"))
            c.domain_allowlist.push_back(h.get<std::string>());
    if (j.contains("backends")) {
        const auto& b = j.at("backends");
        c.backends.llm_type = b.value("llm_type", c.backends.llm_type);
        c.backends.llm_script_path = b.value("llm_script_path", c.backends.llm_script_path);
        c.backends.llm_base_url = b.value("llm_base_url", c.backends.llm_base_url);
        c.backends.llm_model = b.value("llm_model", c.backends.llm_model);
        c.backends.llm_api_key_env = b.value("llm_api_key_env", c.backends.llm_api_key_env);
        c.backends.search_type = b.value("search_type", c.backends.search_type);
        c.backends.fixture_corpus_path =
            b.value("fixture_corpus_path", c.backends.fixture_corpus_path);
        c.backends.cache_mode = b.value("cache_mode", c.backends.cache_mode);
        c.backends.cache_dir = b.value("cache_dir", c.backends.cache_dir);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
    c.seed = j.value("seed", c.seed);

    if (c.alpha <= 0 || c.alpha > 1 || c.beta <= 0 || c.beta > 1)
        throw InvalidArgument("alpha and beta must be in (0, 1]");
    if (c.significance <= 0 || c.significance >= 1)
        throw InvalidArgument("significance must be in (0, 1)");
    return c;
}

std::string config_to_json(const PipelineConfig& c) {
    nlohmann::ordered_json vars = nlohmann::ordered_json::array();
    for (const auto& v : c.variables)
        vars.push_back({{"name", v.name},
                        {"description", v.description},
                        {"domain", v.domain},
                        {"synonyms", v.synonyms}});
    nlohmann::ordered_json j{
        {"variables", vars},
        {"corpus_threshold", c.corpus_threshold},
        {"algo", algo_to_string(c.algo)},
        {"significance", c.significance},
        {"notears",
         {{"lambda1", c.notears.lambda1},
          {"h_tolerance", c.notears.h_tolerance},
          {"max_outer", c.notears.max_outer},
          {"rho_init", c.notears.rho_init},
          {"rho_growth", c.notears.rho_growth},
          {"edge_threshold", c.notears.edge_threshold}}},
        {"alpha", c.alpha},
        {"beta", c.beta},
        {"proposal_alpha", c.proposal_alpha},
        {"pmi_topk", c.pmi_topk},
        {"evidence_k", c.evidence_k},
        {"iterations", c.iterations},
        {"domain_allowlist", c.domain_allowlist},
        {"backends",
         {{"llm_type", c.backends.llm_type},
          {"llm_script_path", c.backends.llm_script_path},
          {"llm_base_url", c.backends.llm_base_url},
          {"llm_model", c.backends.llm_model},
          {"llm_api_key_env", c.backends.llm_api_key_env},
          {"search_type", c.backends.search_type},
          {"fixture_corpus_path", c.backends.fixture_corpus_path},
          {"cache_mode", c.backends.cache_mode},
          {"cache_dir", c.backends.cache_dir}}},
        {"output_dir", c.output_dir},
        {"seed", c.seed}};
    return j.dump(2) + "\n";
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::ordered_json iters = nlohmann::ordered_json::array();
    for (const auto& it : m.iterations)
        iters.push_back({{"index", it.index},
                         {"corpus_size", it.corpus_size},
                         {"corpus_shortfall", it.corpus_shortfall},
                         {"missing_per_column", it.missing_per_column},
                         {"n_variables", it.n_variables},
                         {"statistical_edges", it.statistical_edges},
                         {"verified_edges", it.verified_edges},
                         {"removed_edges", it.removed_edges},
                         {"merged_edges", it.merged_edges},
                         {"proposed_new", it.proposed_new}});
    nlohmann::ordered_json j{{"config", nlohmann::ordered_json::parse(config_to_json(m.config))},
                             {"iterations", iters},
                             {"final_variables", m.final_variables},
                             {"final_graph", nlohmann::ordered_json::parse(to_graph_json(m.final_graph))},
                             {"llm_calls", m.llm_calls},
                             {"warnings", m.warnings}};
    return j.dump(2) + "\n";
}

RunManifest run_pipeline(const PipelineConfig& config) {
    if (config.variables.empty()) throw InvalidArgument("pipeline: no variables configured");
    Backends backends = build_backends(config);
    fs::create_directories(config.output_dir);

    RunManifest manifest;
    manifest.config = config;

    std::vector<Variable> variables = config.variables;
    CausalGraph final_graph;

    for (size_t iter = 0; iter <= config.iterations; ++iter) {
        IterationSummary summary;
        summary.index = iter;
        summary.n_variables = variables.size();
        const std::string prefix =
            (fs::path(config.output_dir) / ("iter" + std::to_string(iter) + "_")).string();

        for (const auto& v : variables) backends.search->register_synonyms(v.name, v.synonyms);

        // Collect
        const QueryPlan plan = generate_queries(variables);
        CorpusResult corpus =
            collect_corpus(plan, *backends.search, config.corpus_threshold, config.domain_allowlist);
        summary.corpus_size = corpus.documents.size();
        summary.corpus_shortfall = corpus.shortfall;
        if (corpus.shortfall > 0)
            manifest.warnings.push_back("iteration " + std::to_string(iter) + ": corpus short by " +
                                        std::to_string(corpus.shortfall) + " documents");
        write_file(prefix + "corpus.jsonl", corpus_to_jsonl(corpus.documents));

        // Extract
        CausalGraph g_s;
        for (const auto& v : variables) g_s.add_node(v.name);
        if (!corpus.documents.empty()) {
            ExtractionResult extraction =
                extract_table(corpus.documents, variables, *backends.llm);
            for (size_t c = 0; c < variables.size(); ++c)
                summary.missing_per_column.push_back(extraction.table.missing_count(c));
            write_file(prefix + "table.csv", extraction.table.to_csv());

            // Statistical branch; degenerate tables degrade to an empty graph.
            try {
                switch (config.algo) {
                    case DiscoveryAlgo::PC:
                        g_s = run_pc(extraction.table, config.significance).graph;
                        break;
                    case DiscoveryAlgo::GES:
                        g_s = run_ges(extraction.table).graph;
                        break;
                    case DiscoveryAlgo::NOTEARS:
                        g_s = run_notears(encode_numeric(extraction.table), config.notears).graph;
                        break;
                }
            } catch (const InvalidArgument& e) {
                manifest.warnings.push_back("iteration " + std::to_string(iter) +
                                            ": statistical branch skipped: " + e.what());
            }
        } else {
            manifest.warnings.push_back("iteration " + std::to_string(iter) +
                                        ": empty corpus, statistical branch skipped");
        }
        summary.statistical_edges = g_s.directed_edge_set().size();

        // Verification branch + merge
        VerificationConfig vconfig;
        vconfig.alpha = config.alpha;
        vconfig.beta = config.beta;
        vconfig.evidence_k = config.evidence_k;
        VerifiedGraphResult verified =
            build_verified_graph(variables, {*backends.llm, *backends.search}, vconfig);
        summary.verified_edges = verified.graph.directed_edge_set().size();
        summary.removed_edges = verified.remove_edges.size();
        write_file(prefix + "verdicts.jsonl", verdicts_to_jsonl(verified.verdicts));

        MergeResult merged = merge_graphs(g_s, verified.graph, verified.remove_edges);
        summary.merged_edges = merged.graph.directed_edge_set().size();
        for (const auto& [from, to] : merged.conflicts)
            manifest.warnings.push_back("merge conflict (removal wins): " + from + " -> " + to);

        write_file(prefix + "graph.json", to_graph_json(merged.graph));
        write_file(prefix + "graph.dot", to_dot(merged.graph));
        final_graph = merged.graph;

        // Propose (not after the last iteration)
        if (iter < config.iterations) {
            ProposalConfig pconfig;
            pconfig.alpha = config.proposal_alpha;
            pconfig.pmi_topk = config.pmi_topk;
            pconfig.evidence_k = config.evidence_k;
            ProposalResult proposal = propose(corpus.documents, variables, *backends.llm,
                                              *backends.search, pconfig);
            summary.proposed_new = proposal.expanded_variables.size() - variables.size();
            write_file(prefix + "candidates.jsonl", candidates_to_jsonl(proposal.ledger));
            variables = std::move(proposal.expanded_variables);
        }

        manifest.iterations.push_back(std::move(summary));
    }

    manifest.final_graph = final_graph;
    for (const auto& v : variables) manifest.final_variables.push_back(v.name);
    manifest.llm_calls = backends.llm->call_count();
    write_file((fs::path(config.output_dir) / "manifest.json").string(),
               manifest_to_json(manifest));
    return manifest;
}

GraphEvalReport evaluate_graph_files(const std::string& predicted_path,
                                     const std::string& truth_path) {
    const CausalGraph predicted = graph_from_json(read_file(predicted_path));
    const CausalGraph truth = graph_from_json(read_file(truth_path));
    return evaluate_graphs(predicted, truth);
}

AblationReport ablate_missing_variable(const CausalGraph& truth, const PipelineConfig& config) {
    if (truth.nodes().size() < 2)
        throw InvalidArgument("ablate: truth graph needs at least two nodes");
    Backends backends = build_backends(config);

    // Variable specs for truth nodes: take the configured spec when present.
    std::map<std::string, Variable> specs;
    for (const auto& v : config.variables) specs.emplace(v.key(), v);

    AblationReport report;
    for (const auto& removed : truth.nodes()) {
        std::vector<Variable> remaining;
        for (const auto& name : truth.nodes()) {
            if (norm_key(name) == norm_key(removed)) continue;
            auto it = specs.find(norm_key(name));
            remaining.push_back(it != specs.end() ? it->second
                                                  : materialize_proposed_variable(name));
        }
        for (const auto& v : remaining) backends.search->register_synonyms(v.name, v.synonyms);

        const QueryPlan plan = generate_queries(remaining);
        CorpusResult corpus = collect_corpus(plan, *backends.search, config.corpus_threshold,
                                             config.domain_allowlist);

        ProposalConfig pconfig;
        pconfig.alpha = config.proposal_alpha;
        pconfig.pmi_topk = config.pmi_topk;
        pconfig.evidence_k = config.evidence_k;
        ProposalResult proposal =
            propose(corpus.documents, remaining, *backends.llm, *backends.search, pconfig);

        AblationTrial trial;
        trial.removed_variable = removed;
        for (size_t i = remaining.size(); i < proposal.expanded_variables.size(); ++i)
            trial.proposed.push_back(proposal.expanded_variables[i].name);
        report.trials.push_back(std::move(trial));
    }
    report.rate = success_rate(report.trials);
    return report;
}

}  // namespace iris
