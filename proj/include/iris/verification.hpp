#pragma once

#include <string>
#include <vector>

#include "iris/backends.hpp"
#include "iris/graph.hpp"

namespace iris {

struct CausalClaim {
    std::string cause;
    std::string effect;
    std::string text;  // "<cause> causes <effect>"
};

CausalClaim build_claim(const std::string& cause, const std::string& effect);

enum class VeracityLabel { Supports, Refutes, Unrelated };

struct VeracityVerdict {
    CausalClaim claim;
    std::string doc_id;
    VeracityLabel label = VeracityLabel::Unrelated;
    std::string raw_response;
};

enum class Decision { Accept, Reject, Abstain };

struct AggregateVerdict {
    CausalClaim claim;
    size_t n_total = 0, n_support = 0, n_refute = 0, n_unrelated = 0;
    Decision decision = Decision::Abstain;
    double alpha = 0.0, beta = 0.0;
};

// Academic hosts the evidence search is restricted to by default.
const std::vector<std::string>& default_academic_allowlist();

// Default verification prompt template. Slots: {doc}, {claim}.
const std::string& default_verification_template();

std::string build_verification_prompt(const Document& doc, const CausalClaim& claim,
                                      size_t doc_char_budget = 24000);

VeracityLabel parse_veracity(const std::string& response, const CausalClaim& claim);

struct VerificationBackends {
    CompletionClient& llm;
    SearchClient& search;
};

std::vector<Document> retrieve_evidence(const Variable& cause, const Variable& effect,
                                        SearchClient& search, size_t k,
                                        const std::vector<std::string>& allowlist =
                                            default_academic_allowlist());

VeracityVerdict judge_claim(const CausalClaim& claim, const Document& doc, CompletionClient& llm);

// Evidence pooling: Accept when n_support > alpha * n_total, else Reject when
// n_refute > beta * n_total, else Abstain. Empty evidence abstains.
AggregateVerdict aggregate(const CausalClaim& claim, const std::vector<VeracityVerdict>& verdicts,
                           double alpha, double beta);

struct VerifiedGraphResult {
    CausalGraph graph;                                        // G_v
    std::set<std::pair<std::string, std::string>> remove_edges;
    std::vector<AggregateVerdict> aggregates;
    std::vector<VeracityVerdict> verdicts;
};

struct VerificationConfig {
    double alpha = 0.5;
    double beta = 0.5;
    size_t evidence_k = 10;
    std::vector<std::string> allowlist = default_academic_allowlist();
};

VerifiedGraphResult build_verified_graph(const std::vector<Variable>& variables,
                                         VerificationBackends backends,
                                         const VerificationConfig& config = {});

struct MergeResult {
    CausalGraph graph;
    std::vector<std::pair<std::string, std::string>> conflicts;  // removed pairs G_v also added
};

// G_hat = G_s + G_v edges (Directed overrides Undirected) - remove_edges;
// removal wins over addition and the conflict is flagged.
MergeResult merge_graphs(const CausalGraph& g_s, const CausalGraph& g_v,
                         const std::set<std::pair<std::string, std::string>>& remove_edges);

}  // namespace iris
