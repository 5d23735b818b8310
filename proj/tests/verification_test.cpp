#include <doctest.h>

#include <random>
#include <sstream>

#include "iris/verification.hpp"

using namespace iris;

namespace {

VeracityVerdict verdict(VeracityLabel label) {
    VeracityVerdict v;
    v.label = label;
    return v;
}

std::vector<VeracityVerdict> make_verdicts(size_t support, size_t refute, size_t unrelated) {
    std::vector<VeracityVerdict> out;
    for (size_t i = 0; i < support; ++i) out.push_back(verdict(VeracityLabel::Supports));
    for (size_t i = 0; i < refute; ++i) out.push_back(verdict(VeracityLabel::Refutes));
    for (size_t i = 0; i < unrelated; ++i) out.push_back(verdict(VeracityLabel::Unrelated));
    return out;
}

// Reference implementation of the pooling rule, written independently.
Decision oracle_decision(size_t support, size_t refute, size_t unrelated, double alpha,
                         double beta) {
    const double total = static_cast<double>(support + refute + unrelated);
    if (total == 0) return Decision::Abstain;
    if (static_cast<double>(support) > alpha * total) return Decision::Accept;
    if (static_cast<double>(refute) > beta * total) return Decision::Reject;
    return Decision::Abstain;
}

CausalGraph graph_of(const std::vector<std::pair<std::string, std::string>>& edges,
                     const std::vector<std::string>& nodes = {}) {
    CausalGraph g;
    for (const auto& n : nodes) g.add_node(n);
    for (const auto& [f, t] : edges) {
        g.add_node(f);
        g.add_node(t);
        g.add_edge(f, t);
    }
    return g;
}

const char* kEvidenceCorpus = R"(
{"id": "e1", "url": "https://www.ncbi.nlm.nih.gov/pmc/a", "text": "Smoking and cancer: smoking is a cause of cancer.", "tags": []}
{"id": "e2", "url": "https://link.springer.com/b", "text": "A study of smoking and cancer risk in adults.", "tags": []}
{"id": "e3", "url": "https://www.example.com/blog", "text": "smoking cancer hot take", "tags": []}
{"id": "e4", "url": "https://arxiv.org/abs/1", "text": "Pollution and asthma rates.", "tags": []}
)";

}  // namespace

TEST_CASE("build_claim renders the claim text") {
    const CausalClaim c = build_claim("smoking", "cancer");
    CHECK(c.cause == "smoking");
    CHECK(c.effect == "cancer");
    CHECK(c.text == "smoking causes cancer");
    CHECK_THROWS_AS(build_claim("", "cancer"), InvalidArgument);
    CHECK_THROWS_AS(build_claim("x", "x"), InvalidArgument);
}

TEST_CASE("verification prompt embeds the claim and document") {
    const CausalClaim c = build_claim("smoking", "cancer");
    const Document d = make_document("https://arxiv.org/abs/2", "Evidence text here.");
    const std::string p = build_verification_prompt(d, c);
    CHECK(p.find("smoking causes cancer") != std::string::npos);
    CHECK(p.find("Evidence text here.") != std::string::npos);
    CHECK(p.find("{doc}") == std::string::npos);
    CHECK(p.find("{claim}") == std::string::npos);
}

TEST_CASE("parse_veracity reads the last stated verdict") {
    const CausalClaim c = build_claim("smoking", "cancer");
    auto parse = [&](const std::string& s) { return parse_veracity(s, c); };
    CHECK(parse("The veracity of claim 'smoking causes cancer' is True.") ==
          VeracityLabel::Supports);
    CHECK(parse("The veracity of claim 'smoking causes cancer' is False.") ==
          VeracityLabel::Refutes);
    CHECK(parse("the veracity of claim 'smoking causes cancer' is TRUE") ==
          VeracityLabel::Supports);
    // last occurrence wins
    CHECK(parse("The veracity of claim 'smoking causes cancer' is True.\n"
                "Wait. The veracity of claim 'smoking causes cancer' is False.") ==
          VeracityLabel::Refutes);
    // anything else is unrelated
    CHECK(parse("The veracity of claim 'smoking causes cancer' is Unclear.") ==
          VeracityLabel::Unrelated);
    CHECK(parse("no verdict sentence at all") == VeracityLabel::Unrelated);
}

TEST_CASE("aggregate matches the reference rule on an exhaustive sweep") {
    const double alphas[] = {0.3, 0.5, 0.7, 1.0};
    const double betas[] = {0.3, 0.5, 0.7, 1.0};
    const CausalClaim c = build_claim("a", "b");
    for (double alpha : alphas)
        for (double beta : betas)
            for (size_t s = 0; s <= 6; ++s)
                for (size_t r = 0; s + r <= 6; ++r)
                    for (size_t u = 0; s + r + u <= 6; ++u) {
                        const AggregateVerdict v =
                            aggregate(c, make_verdicts(s, r, u), alpha, beta);
                        CHECK(v.decision == oracle_decision(s, r, u, alpha, beta));
                        CHECK(v.n_support == s);
                        CHECK(v.n_refute == r);
                        CHECK(v.n_unrelated == u);
                        CHECK(v.n_total == s + r + u);
                    }
}

TEST_CASE("aggregate boundary cases") {
    const CausalClaim c = build_claim("a", "b");
    // empty evidence abstains
    CHECK(aggregate(c, {}, 0.5, 0.5).decision == Decision::Abstain);
    // exactly alpha*total does not accept (strict inequality)
    CHECK(aggregate(c, make_verdicts(1, 1, 0), 0.5, 0.5).decision == Decision::Abstain);
    CHECK(aggregate(c, make_verdicts(2, 1, 0), 0.5, 0.5).decision == Decision::Accept);
    // accept is checked before reject
    CHECK(aggregate(c, make_verdicts(3, 3, 0), 0.4, 0.4).decision == Decision::Accept);
    // invalid thresholds
    CHECK_THROWS_AS(aggregate(c, {}, 0.0, 0.5), InvalidArgument);
    CHECK_THROWS_AS(aggregate(c, {}, 0.5, 1.5), InvalidArgument);
}

TEST_CASE("retrieve_evidence respects the academic allowlist") {
    FixtureSearchClient search = FixtureSearchClient::from_text(kEvidenceCorpus);
    const Variable cause("smoking", "", {"True", "False"});
    const Variable effect("cancer", "", {"True", "False"});
    const auto docs = retrieve_evidence(cause, effect, search, 10);
    REQUIRE(docs.size() == 2);  // e3 blocked by allowlist, e4 does not match
    for (const auto& d : docs) {
        CHECK(d.url.find("example.com") == std::string::npos);
    }
    // k caps the result
    CHECK(retrieve_evidence(cause, effect, search, 1).size() == 1);
}

TEST_CASE("judge_claim maps backend failure to Unrelated") {
    struct Failing : CompletionClient {
        std::string complete(const CompletionRequest&) override {
            throw BackendError("down");
        }
    } llm;
    const CausalClaim c = build_claim("a", "b");
    const Document d = make_document("https://arxiv.org/abs/3", "text");
    CHECK(judge_claim(c, d, llm).label == VeracityLabel::Unrelated);
}

TEST_CASE("build_verified_graph accepts and rejects from scripted verdicts") {
    FixtureSearchClient search = FixtureSearchClient::from_text(kEvidenceCorpus);
    ScriptedCompletionClient llm;
    llm.add_rule({"'smoking causes cancer'"},
                 "The veracity of claim 'smoking causes cancer' is True.");
    llm.add_rule({"'cancer causes smoking'"},
                 "The veracity of claim 'cancer causes smoking' is False.");
    llm.set_default_response("unsure");

    const std::vector<Variable> vars{Variable("smoking", "", {"True", "False"}),
                                     Variable("cancer", "", {"True", "False"})};
    VerificationConfig cfg;
    cfg.alpha = 0.5;
    cfg.beta = 0.5;
    const VerifiedGraphResult r = build_verified_graph(vars, {llm, search}, cfg);

    CHECK(r.graph.has_directed("smoking", "cancer"));
    CHECK_FALSE(r.graph.has_directed("cancer", "smoking"));
    CHECK(r.remove_edges.count({"cancer", "smoking"}) == 1);
    REQUIRE(r.aggregates.size() == 2);  // both ordered pairs judged
    CHECK(r.verdicts.size() == 4);      // two evidence docs per direction
}

TEST_CASE("merge keeps statistical edges, adds verified ones, removal wins") {
    const CausalGraph g_s = graph_of({{"a", "b"}, {"b", "c"}});
    const CausalGraph g_v = graph_of({{"a", "c"}, {"b", "c"}}, {"d"});
    const MergeResult m = merge_graphs(g_s, g_v, {{"a", "b"}, {"b", "c"}});

    const auto edges = m.graph.directed_edge_set();
    CHECK_FALSE(edges.count({"a", "b"}));  // removed
    CHECK_FALSE(edges.count({"b", "c"}));  // removed despite g_v adding it
    CHECK(edges.count({"a", "c"}));        // added by g_v
    // conflict flagged for the pair both added and removed
    REQUIRE(m.conflicts.size() == 1);
    CHECK(m.conflicts[0] == std::pair<std::string, std::string>{"b", "c"});
    // node union includes the isolated g_v node
    CHECK(m.graph.nodes().size() == 4);
}

TEST_CASE("merge with empty removal set is edge union") {
    std::mt19937 rng(99);
    const std::vector<std::string> names{"a", "b", "c", "d"};
    std::uniform_int_distribution<size_t> pick(0, 3);
    std::bernoulli_distribution coin(0.3);
    for (int trial = 0; trial < 200; ++trial) {
        CausalGraph g_s, g_v;
        for (const auto& n : names) {
            g_s.add_node(n);
            g_v.add_node(n);
        }
        std::set<std::pair<std::string, std::string>> expected;
        for (const auto& f : names)
            for (const auto& t : names) {
                if (f == t) continue;
                if (coin(rng)) {
                    g_s.add_edge(f, t);
                    expected.insert({f, t});
                }
                if (coin(rng)) {
                    g_v.add_edge(f, t);
                    expected.insert({f, t});
                }
            }
        const MergeResult m = merge_graphs(g_s, g_v, {});
        CHECK(m.graph.directed_edge_set() == expected);
        CHECK(m.conflicts.empty());
    }
}

TEST_CASE("merge removal only deletes the exact directed pair") {
    CausalGraph g_s;
    g_s.add_node("x");
    g_s.add_node("y");
    g_s.add_edge("x", "y", EdgeMark::Undirected);
    const MergeResult m = merge_graphs(g_s, CausalGraph{}, {{"x", "y"}});
    const auto edges = m.graph.directed_edge_set();
    CHECK_FALSE(edges.count({"x", "y"}));
    CHECK(edges.count({"y", "x"}));
}
