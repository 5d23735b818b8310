#include "iris/verification.hpp"

#include <cctype>

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

// Last case-insensitive occurrence of "the veracity of claim '<claim>' is",
// tolerating straight/curly quotes. Returns offset past the match or npos.
size_t find_last_veracity_sentence(const std::string& response, const std::string& claim) {
    const std::string hay = to_lower(response);
    static const std::vector<std::pair<std::string, std::string>> quote_pairs = {
        {"'", "'"}, {"‘", "’"}, {"\"", "\""}};
    size_t best = std::string::npos;
    for (const auto& [open, close] : quote_pairs) {
        const std::string needle =
            "the veracity of claim " + open + to_lower(claim) + close + " is";
        const size_t pos = hay.rfind(needle);
        if (pos == std::string::npos) continue;
        const size_t end = pos + needle.size();
        if (best == std::string::npos || end > best) best = end;
    }
    return best;
}

std::string next_word(const std::string& text, size_t from) {
    size_t b = from;
    while (b < text.size() && !std::isalpha(static_cast<unsigned char>(text[b]))) ++b;
    size_t e = b;
    while (e < text.size() && std::isalpha(static_cast<unsigned char>(text[e]))) ++e;
    return text.substr(b, e - b);
}

}  // namespace

CausalClaim build_claim(const std::string& cause, const std::string& effect) {
    if (trim(cause).empty() || trim(effect).empty())
        throw InvalidArgument("build_claim: empty variable name");
    if (norm_key(cause) == norm_key(effect))
        throw InvalidArgument("build_claim: cause and effect must differ");
    return {cause, effect, cause + " causes " + effect};
}

const std::vector<std::string>& default_academic_allowlist() {
    static const std::vector<std::string> hosts = {
        "jstor.org",     "springer.com",      "ieee.org",         "ncbi.nlm.nih.gov",
        "sciencedirect.com", "scholar.google.com", "arxiv.org"};
    return hosts;
}

const std::string& default_verification_template() {
    static const std::string tmpl =
        "Given a document: {doc}\n"
        "\n"
        "Please complete the below task.\n"
        "We have a claim: '{claim}'. We need to check the veracity of this claim. The value of "
        "veracity is True or False or Unknown.\n"
        "True indicates that the given document supports this claim,\n"
        "False indicates that the given document refutes the claim.\n"
        "Unknown indicates that the given document has no relation to the claim.\n"
        "Please form the answer with a logical reasoning chain according to the following "
        "format.\n"
        "First, provide an introductory sentence that explains what information will be "
        "discussed.\n"
        "Next, list the logical reasoning chain in detail, ensuring clarity and precision.\n"
        "Finally, conclude the veracity of claim '{claim}' using the following template:\n"
        "The veracity of claim '{claim}' is ___.\n";
    return tmpl;
}

std::string build_verification_prompt(const Document& doc, const CausalClaim& claim,
                                      size_t doc_char_budget) {
    if (doc.text.empty()) throw InvalidArgument("build_verification_prompt: empty document");
    const std::string text =
        doc.text.size() > doc_char_budget ? doc.text.substr(0, doc_char_budget) : doc.text;
    std::string prompt = default_verification_template();
    prompt = replace_all(prompt, "{doc}", text);
    prompt = replace_all(prompt, "{claim}", claim.text);
    return prompt;
}

VeracityLabel parse_veracity(const std::string& response, const CausalClaim& claim) {
    const size_t after = find_last_veracity_sentence(response, claim.text);
    if (after == std::string::npos) return VeracityLabel::Unrelated;
    const std::string word = to_lower(next_word(response, after));
    if (word == "true") return VeracityLabel::Supports;
    if (word == "false") return VeracityLabel::Refutes;
    return VeracityLabel::Unrelated;
}

std::vector<Document> retrieve_evidence(const Variable& cause, const Variable& effect,
                                        SearchClient& search, size_t k,
                                        const std::vector<std::string>& allowlist) {
    if (k < 1) throw InvalidArgument("retrieve_evidence: k must be >= 1");
    SearchQuery query{{cause.name, effect.name}};
    std::vector<Document> docs;
    std::set<std::string> seen;
    for (const auto& hit : search.search(query, k, allowlist)) {
        if (docs.size() >= k) break;
        if (!seen.insert(hit.url).second) continue;
        try {
            docs.push_back(search.fetch(hit.url));
        } catch (const BackendError&) {
            // skip unfetchable evidence
        }
    }
    return docs;
}

VeracityVerdict judge_claim(const CausalClaim& claim, const Document& doc, CompletionClient& llm) {
    VeracityVerdict verdict;
    verdict.claim = claim;
    verdict.doc_id = doc.id;
    try {
        verdict.raw_response = llm.complete({build_verification_prompt(doc, claim)});
        verdict.label = parse_veracity(verdict.raw_response, claim);
    } catch (const BackendError&) {
        verdict.label = VeracityLabel::Unrelated;
    }
    return verdict;
}

AggregateVerdict aggregate(const CausalClaim& claim, const std::vector<VeracityVerdict>& verdicts,
                           double alpha, double beta) {
    if (alpha <= 0 || alpha > 1 || beta <= 0 || beta > 1)
        throw InvalidArgument("aggregate: alpha and beta must be in (0, 1]");
    AggregateVerdict out;
    out.claim = claim;
    out.alpha = alpha;
    out.beta = beta;
    out.n_total = verdicts.size();
    for (const auto& v : verdicts) {
        switch (v.label) {
            case VeracityLabel::Supports: ++out.n_support; break;
            case VeracityLabel::Refutes: ++out.n_refute; break;
            case VeracityLabel::Unrelated: ++out.n_unrelated; break;
        }
    }
    const double total = static_cast<double>(out.n_total);
    if (out.n_total == 0)
        out.decision = Decision::Abstain;
    else if (static_cast<double>(out.n_support) > alpha * total)
        out.decision = Decision::Accept;
    else if (static_cast<double>(out.n_refute) > beta * total)
        out.decision = Decision::Reject;
    else
        out.decision = Decision::Abstain;
    return out;
}

VerifiedGraphResult build_verified_graph(const std::vector<Variable>& variables,
                                         VerificationBackends backends,
                                         const VerificationConfig& config) {
    if (variables.size() < 2)
        throw InvalidArgument("build_verified_graph: need at least two variables");

    VerifiedGraphResult result;
    for (const auto& v : variables) result.graph.add_node(v.name);

    for (const auto& cause : variables) {
        for (const auto& effect : variables) {
            if (cause.key() == effect.key()) continue;
            const CausalClaim claim = build_claim(cause.name, effect.name);
            std::vector<VeracityVerdict> verdicts;
            try {
                const std::vector<Document> evidence = retrieve_evidence(
                    cause, effect, backends.search, config.evidence_k, config.allowlist);
                for (const auto& doc : evidence)
                    verdicts.push_back(judge_claim(claim, doc, backends.llm));
            } catch (const BackendError&) {
                verdicts.clear();  // pair degrades to Abstain
            }
            AggregateVerdict agg = aggregate(claim, verdicts, config.alpha, config.beta);
            if (agg.decision == Decision::Accept)
                result.graph.add_edge(cause.name, effect.name, EdgeMark::Directed);
            else if (agg.decision == Decision::Reject)
                result.remove_edges.insert({cause.name, effect.name});
            result.aggregates.push_back(std::move(agg));
            for (auto& v : verdicts) result.verdicts.push_back(std::move(v));
        }
    }
    return result;
}

MergeResult merge_graphs(const CausalGraph& g_s, const CausalGraph& g_v,
                         const std::set<std::pair<std::string, std::string>>& remove_edges) {
    MergeResult result;
    result.graph = g_s;
    for (const auto& n : g_v.nodes()) result.graph.add_node(n);
    for (const auto& [from, to] : remove_edges) {
        result.graph.add_node(from);
        result.graph.add_node(to);
    }

    for (const auto& [from, to] : g_v.directed_edge_set())
        result.graph.add_edge(from, to, EdgeMark::Directed);

    // Removal wins over addition; only the exact directed pair is deleted.
    for (const auto& [from, to] : remove_edges) {
        if (g_v.has_directed(from, to)) result.conflicts.push_back({from, to});
        result.graph.remove_edge(from, to);
    }
    return result;
}

}  // namespace iris
