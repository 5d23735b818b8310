#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iris/backends.hpp"
#include "iris/verification.hpp"

namespace iris {

struct ProposalCandidate {
    std::string name;  // first-seen casing
    std::set<std::string> source_doc_ids;
    bool verification_accepted = false;
    std::map<std::string, double> pmi_scores;  // initial variable -> PMI (may be -inf)
    double aggregate_pmi = 0.0;                // sum of finite components
    bool has_finite_pmi = false;
};

// Default variable-abstraction prompt template. Slots: {doc},
// {initial_variables}. The answer carries <var>...</var> markers.
const std::string& default_abstraction_template();

std::string build_abstraction_prompt(const Document& doc,
                                     const std::vector<Variable>& initial_variables,
                                     size_t doc_char_budget = 24000);

// Candidate name from the last <var>...</var> span, or none.
std::optional<std::string> parse_abstracted_variable(const std::string& response);

std::optional<std::string> abstract_variable(const Document& doc,
                                             const std::vector<Variable>& initial_variables,
                                             CompletionClient& llm);

// Case-fold + whitespace-collapse dedup; drops collisions with initial
// variable names or synonyms; unions source doc ids.
std::vector<ProposalCandidate> normalize_candidates(
    const std::vector<std::pair<std::string, std::string>>& raw_name_and_doc,
    const std::vector<Variable>& initial_variables);

struct ProposalConfig {
    double alpha = 1.0;   // accept when support > alpha * refute count
    size_t pmi_topk = 5;
    size_t evidence_k = 10;
    std::vector<std::string> allowlist = default_academic_allowlist();
};

// Evidence-based acceptance: for any (candidate, initial) pair in either direction,
// n_support > alpha * n_refute.
std::vector<ProposalCandidate> select_by_verification(std::vector<ProposalCandidate> candidates,
                                                      const std::vector<Variable>& initial_variables,
                                                      VerificationBackends backends,
                                                      const ProposalConfig& config);

// ln(o_ij / (o_i * o_j)) with the log C term dropped; -inf when any count is 0.
double pmi(const std::string& term_i, const std::string& term_j, SearchClient& counts);

// Fills pmi_scores/aggregate_pmi and returns the top-k by aggregate
// (descending, ties lexicographic; candidates without a finite component last).
std::vector<ProposalCandidate> select_by_pmi(std::vector<ProposalCandidate> candidates,
                                             const std::vector<Variable>& initial_variables,
                                             SearchClient& counts, size_t k);

struct ProposalResult {
    std::vector<Variable> expanded_variables;  // initial ∪ selected
    std::vector<ProposalCandidate> ledger;     // every normalized candidate with its routes
};

ProposalResult propose(const std::vector<Document>& corpus,
                       const std::vector<Variable>& initial_variables,
                       CompletionClient& llm, SearchClient& search,
                       const ProposalConfig& config = {});

// Variable materialized for a newly proposed name: binary existence domain.
Variable materialize_proposed_variable(const std::string& name);

}  // namespace iris
