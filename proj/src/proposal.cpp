#include "iris/proposal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace iris {

namespace {

std::string replace_all(std::string text, const std::string& slot, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
    return text;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

const std::string& default_abstraction_template() {
    static const std::string tmpl =
        "Given a document: {doc}\n"
        "\n"
        "Please complete the below task.\n"
        "We have some given variables: '{initial_variables}'.\n"
        "What are the high-level variables in the provided document that have causal relations "
        "to variables in the given variable set?\n"
        "Please form the answer using the following format.\n"
        "First, propose as many variables as possible that have causal relationships with the "
        "given variables, based on your understanding of the document.\n"
        "Please ensure these proposed variables are different from the ones already provided.\n"
        "Next, refine your list of candidate variables by reducing semantic overlap among them "
        "and shortening their names for clarity.\n"
        "Finally, determine the most reliable variable candidate as the final answer using the "
        "template provided below:\n"
        "The new abstracted variable is <var>____</var>.\n";
    return tmpl;
}

std::string build_abstraction_prompt(const Document& doc,
                                     const std::vector<Variable>& initial_variables,
                                     size_t doc_char_budget) {
    if (doc.text.empty()) throw InvalidArgument("build_abstraction_prompt: empty document");
    const std::string text =
        doc.text.size() > doc_char_budget ? doc.text.substr(0, doc_char_budget) : doc.text;
    std::ostringstream names;
    for (size_t i = 0; i < initial_variables.size(); ++i) {
        if (i) names << ", ";
        names << initial_variables[i].name;
    }
    std::string prompt = default_abstraction_template();
    prompt = replace_all(prompt, "{doc}", text);
    prompt = replace_all(prompt, "{initial_variables}", names.str());
    return prompt;
}

std::optional<std::string> parse_abstracted_variable(const std::string& response) {
    const std::string hay = to_lower(response);
    const size_t open = hay.rfind("<var>");
    if (open == std::string::npos) return std::nullopt;
    const size_t start = open + 5;
    const size_t close = hay.find("</var>", start);
    if (close == std::string::npos) return std::nullopt;
    const std::string name = collapse_whitespace(response.substr(start, close - start));
    if (name.empty() || name.find('_') == 0) return std::nullopt;
    return name;
}

std::optional<std::string> abstract_variable(const Document& doc,
                                             const std::vector<Variable>& initial_variables,
                                             CompletionClient& llm) {
    try {
        return parse_abstracted_variable(
            llm.complete({build_abstraction_prompt(doc, initial_variables)}));
    } catch (const BackendError&) {
        return std::nullopt;
    }
}

std::vector<ProposalCandidate> normalize_candidates(
    const std::vector<std::pair<std::string, std::string>>& raw_name_and_doc,
    const std::vector<Variable>& initial_variables) {
    std::set<std::string> reserved;
    for (const auto& v : initial_variables) {
        reserved.insert(norm_key(collapse_whitespace(v.name)));
        for (const auto& s : v.synonyms) reserved.insert(norm_key(collapse_whitespace(s)));
    }

    std::vector<ProposalCandidate> out;
    std::map<std::string, size_t> index;  // norm key -> position
    for (const auto& [raw, doc_id] : raw_name_and_doc) {
        const std::string display = collapse_whitespace(raw);
        const std::string key = norm_key(display);
        if (key.empty() || reserved.count(key)) continue;
        auto it = index.find(key);
        if (it == index.end()) {
            index[key] = out.size();
            ProposalCandidate c;
            c.name = display;
            if (!doc_id.empty()) c.source_doc_ids.insert(doc_id);
            out.push_back(std::move(c));
        } else if (!doc_id.empty()) {
            out[it->second].source_doc_ids.insert(doc_id);
        }
    }
    return out;
}

std::vector<ProposalCandidate> select_by_verification(std::vector<ProposalCandidate> candidates,
                                                      const std::vector<Variable>& initial_variables,
                                                      VerificationBackends backends,
                                                      const ProposalConfig& config) {
    for (auto& candidate : candidates) {
        const Variable cand_var = materialize_proposed_variable(candidate.name);
        bool accepted = false;
        for (const auto& initial : initial_variables) {
            for (int direction = 0; direction < 2 && !accepted; ++direction) {
                const std::string& cause = direction == 0 ? candidate.name : initial.name;
                const std::string& effect = direction == 0 ? initial.name : candidate.name;
                const CausalClaim claim = build_claim(cause, effect);
                size_t n_support = 0, n_refute = 0;
                try {
                    const std::vector<Document> evidence =
                        retrieve_evidence(cand_var, initial, backends.search, config.evidence_k,
                                          config.allowlist);
                    for (const auto& doc : evidence) {
                        const VeracityVerdict v = judge_claim(claim, doc, backends.llm);
                        if (v.label == VeracityLabel::Supports) ++n_support;
                        if (v.label == VeracityLabel::Refutes) ++n_refute;
                    }
                } catch (const BackendError&) {
                    continue;  // pair contributes nothing
                }
                // Accept when supporting evidence outweighs alpha x refuting evidence.
                if (n_support > 0 &&
                    static_cast<double>(n_support) > config.alpha * static_cast<double>(n_refute))
                    accepted = true;
            }
            if (accepted) break;
        }
        candidate.verification_accepted = accepted;
    }

    std::vector<ProposalCandidate> out;
    for (auto& c : candidates)
        if (c.verification_accepted) out.push_back(std::move(c));
    return out;
}

double pmi(const std::string& term_i, const std::string& term_j, SearchClient& counts) {
    size_t o_ij = 0, o_i = 0, o_j = 0;
    try {
        o_ij = counts.count(SearchQuery{{term_i, term_j}});
        o_i = counts.count(SearchQuery{{term_i}});
        o_j = counts.count(SearchQuery{{term_j}});
    } catch (const BackendError&) {
        return kNegInf;
    }
    if (o_ij == 0 || o_i == 0 || o_j == 0) return kNegInf;
    return std::log(static_cast<double>(o_ij) /
                    (static_cast<double>(o_i) * static_cast<double>(o_j)));
}

namespace {

void score_pmi(std::vector<ProposalCandidate>& candidates,
               const std::vector<Variable>& initial_variables, SearchClient& counts) {
    for (auto& candidate : candidates) {
        candidate.aggregate_pmi = 0.0;
        candidate.has_finite_pmi = false;
        for (const auto& initial : initial_variables) {
            const double score = pmi(candidate.name, initial.name, counts);
            candidate.pmi_scores[initial.name] = score;
            if (std::isfinite(score)) {
                candidate.aggregate_pmi += score;
                candidate.has_finite_pmi = true;
            }
        }
    }
}

}  // namespace

std::vector<ProposalCandidate> select_by_pmi(std::vector<ProposalCandidate> candidates,
                                             const std::vector<Variable>& initial_variables,
                                             SearchClient& counts, size_t k) {
    score_pmi(candidates, initial_variables, counts);

    std::vector<size_t> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const auto& ca = candidates[a];
        const auto& cb = candidates[b];
        if (ca.has_finite_pmi != cb.has_finite_pmi) return ca.has_finite_pmi;
        if (ca.has_finite_pmi && ca.aggregate_pmi != cb.aggregate_pmi)
            return ca.aggregate_pmi > cb.aggregate_pmi;
        return norm_key(ca.name) < norm_key(cb.name);
    });

    std::vector<ProposalCandidate> out;
    for (size_t i = 0; i < order.size() && out.size() < k; ++i)
        out.push_back(candidates[order[i]]);
    return out;
}

Variable materialize_proposed_variable(const std::string& name) {
    return Variable(name,
                    "the existence of " + name + " can be inferred from the document",
                    {"True", "False"});
}

ProposalResult propose(const std::vector<Document>& corpus,
                       const std::vector<Variable>& initial_variables,
                       CompletionClient& llm, SearchClient& search,
                       const ProposalConfig& config) {
    std::vector<std::pair<std::string, std::string>> raw;
    for (const auto& doc : corpus) {
        if (auto name = abstract_variable(doc, initial_variables, llm))
            raw.push_back({*name, doc.id});
    }
    std::vector<ProposalCandidate> candidates = normalize_candidates(raw, initial_variables);

    VerificationBackends backends{llm, search};
    const std::vector<ProposalCandidate> verified =
        select_by_verification(candidates, initial_variables, backends, config);
    score_pmi(candidates, initial_variables, search);
    const std::vector<ProposalCandidate> by_pmi =
        select_by_pmi(candidates, initial_variables, search, config.pmi_topk);

    std::set<std::string> verified_keys, pmi_keys;
    for (const auto& c : verified) verified_keys.insert(norm_key(c.name));
    for (const auto& c : by_pmi) pmi_keys.insert(norm_key(c.name));

    ProposalResult result;
    result.expanded_variables = initial_variables;
    std::set<std::string> present;
    for (const auto& v : initial_variables) present.insert(v.key());

    // Ledger keeps every candidate; selected ones extend the variable set.
    for (auto& c : candidates) {
        const std::string key = norm_key(c.name);
        c.verification_accepted = verified_keys.count(key) > 0;
        const bool selected = c.verification_accepted || pmi_keys.count(key) > 0;
        if (selected && !present.count(key)) {
            present.insert(key);
            result.expanded_variables.push_back(materialize_proposed_variable(c.name));
        }
        result.ledger.push_back(c);
    }
    return result;
}

}  // namespace iris
