#include <doctest.h>

#include <cmath>

#include "iris/proposal.hpp"

using namespace iris;

namespace {

Variable binary(const std::string& name) { return Variable(name, "", {"True", "False"}); }

ProposalCandidate candidate(const std::string& name) {
    ProposalCandidate c;
    c.name = name;
    return c;
}

// Search stub that answers count() from a fixed table and never fetches.
class CountStub : public SearchClient {
public:
    std::map<std::string, size_t> counts;  // rendered query -> count

    std::vector<SearchHit> search(const SearchQuery&, size_t,
                                  const std::vector<std::string>&) override {
        return {};
    }
    size_t count(const SearchQuery& query) override {
        auto it = counts.find(query.render());
        return it == counts.end() ? 0 : it->second;
    }
    Document fetch(const std::string&) override { throw BackendError("no fetch"); }
};

std::string term_query(const std::string& a) { return SearchQuery{{a}}.render(); }
std::string pair_query(const std::string& a, const std::string& b) {
    return SearchQuery{{a, b}}.render();
}

}  // namespace

TEST_CASE("abstraction prompt lists the known variables") {
    const Document d = make_document("https://arxiv.org/abs/9", "Shift work disrupts sleep.");
    const std::vector<Variable> vars{binary("smoking"), binary("cancer")};
    const std::string p = build_abstraction_prompt(d, vars);
    CHECK(p.find("smoking") != std::string::npos);
    CHECK(p.find("cancer") != std::string::npos);
    CHECK(p.find("Shift work disrupts sleep.") != std::string::npos);
    CHECK(p.find("{doc}") == std::string::npos);
    CHECK(p.find("{initial_variables}") == std::string::npos);
}

TEST_CASE("parse_abstracted_variable takes the last marked span") {
    CHECK(parse_abstracted_variable("The new abstracted variable is <var>stress</var>.") ==
          "stress");
    CHECK(parse_abstracted_variable("<var>first</var> then <var>second</var>") == "second");
    CHECK(parse_abstracted_variable("<var>  shift   work </var>") == "shift work");
    CHECK_FALSE(parse_abstracted_variable("no markers here").has_value());
    CHECK_FALSE(parse_abstracted_variable("<var></var>").has_value());
    CHECK_FALSE(parse_abstracted_variable("<var>   </var>").has_value());
    CHECK_FALSE(parse_abstracted_variable("<var>_placeholder</var>").has_value());
}

TEST_CASE("normalize_candidates dedups case/whitespace variants") {
    const std::vector<Variable> initial{binary("smoking")};
    const auto out = normalize_candidates({{"Air Pollution", "d1"},
                                           {"air  pollution", "d2"},
                                           {"AIR POLLUTION", "d3"},
                                           {"stress", "d2"}},
                                          initial);
    REQUIRE(out.size() == 2);
    // first-seen casing kept, doc ids unioned
    const auto& ap = out[0].name == "Air Pollution" ? out[0] : out[1];
    CHECK(ap.name == "Air Pollution");
    CHECK(ap.source_doc_ids == std::set<std::string>{"d1", "d2", "d3"});
}

TEST_CASE("normalize_candidates drops collisions with initial variables") {
    std::vector<Variable> initial{binary("smoking")};
    initial[0].synonyms.push_back("tobacco use");
    const auto out = normalize_candidates(
        {{"Smoking", "d1"}, {"Tobacco  Use", "d2"}, {"exercise", "d3"}}, initial);
    REQUIRE(out.size() == 1);
    CHECK(out[0].name == "exercise");
}

TEST_CASE("verification route applies support > alpha * refute with support required") {
    FixtureSearchClient search = FixtureSearchClient::from_text(R"(
{"id": "v1", "url": "https://arxiv.org/abs/10", "text": "stress and smoking study", "tags": []}
{"id": "v2", "url": "https://arxiv.org/abs/11", "text": "stress and smoking revisited", "tags": []}
{"id": "v3", "url": "https://arxiv.org/abs/12", "text": "boredom and smoking study", "tags": []}
)");
    ScriptedCompletionClient llm;
    // stress->smoking: 2 supports, 0 refutes -> 2 > 1.0*0 -> accepted
    llm.add_rule({"'stress causes smoking'"},
                 "The veracity of claim 'stress causes smoking' is True.");
    // boredom: refuted both ways
    llm.add_rule({"boredom causes"}, "The veracity of claim 'boredom causes smoking' is False.");
    llm.add_rule({"causes boredom"}, "The veracity of claim 'smoking causes boredom' is False.");
    llm.set_default_response("unsure");

    const std::vector<Variable> initial{binary("smoking")};
    ProposalConfig cfg;
    cfg.alpha = 1.0;
    // returns only the accepted candidates
    const auto out = select_by_verification({candidate("stress"), candidate("boredom")}, initial,
                                            {llm, search}, cfg);
    REQUIRE(out.size() == 1);
    CHECK(out[0].name == "stress");
    CHECK(out[0].verification_accepted);

    // zero support never accepts even when refute is zero too (0 > alpha*0 fails)
    ScriptedCompletionClient mute;
    mute.set_default_response("unsure");
    CHECK(select_by_verification({candidate("stress")}, initial, {mute, search}, cfg).empty());
}

TEST_CASE("pmi formula and -inf sentinel") {
    CountStub counts;
    counts.counts[term_query("stress")] = 100;
    counts.counts[term_query("smoking")] = 20;
    counts.counts[pair_query("smoking", "stress")] = 10;
    counts.counts[pair_query("stress", "smoking")] = 10;

    // pmi = ln(10 / (100 * 20)) = ln(0.005)
    CHECK(pmi("stress", "smoking", counts) == doctest::Approx(std::log(0.005)).epsilon(1e-12));
    // symmetric
    CHECK(pmi("smoking", "stress", counts) == doctest::Approx(std::log(0.005)).epsilon(1e-12));
    // any zero count -> -inf
    CHECK(std::isinf(pmi("stress", "unknown", counts)));
    CHECK(pmi("stress", "unknown", counts) < 0);
}

TEST_CASE("select_by_pmi ranks by aggregate, finite components first") {
    CountStub counts;
    for (const char* t : {"a", "b"}) counts.counts[term_query(t)] = 10;
    counts.counts[term_query("good")] = 10;
    counts.counts[term_query("better")] = 10;
    // good pairs with a only; better pairs with both a and b, higher counts
    auto put_pair = [&](const std::string& x, const std::string& y, size_t c) {
        counts.counts[pair_query(x, y)] = c;
        counts.counts[pair_query(y, x)] = c;
    };
    put_pair("good", "a", 5);
    put_pair("better", "a", 50);
    put_pair("better", "b", 50);

    const std::vector<Variable> initial{binary("a"), binary("b")};
    auto out = select_by_pmi({candidate("good"), candidate("better"), candidate("nohit")},
                             initial, counts, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0].name == "better");
    CHECK(out[1].name == "good");
    CHECK(out[0].has_finite_pmi);
    // aggregate sums only finite components
    CHECK(out[1].aggregate_pmi == doctest::Approx(std::log(5.0 / 100.0)));

    // candidates with no finite PMI rank last but can still fill k
    auto all = select_by_pmi({candidate("good"), candidate("nohit")}, initial, counts, 2);
    REQUIRE(all.size() == 2);
    CHECK(all[0].name == "good");
    CHECK(all[1].name == "nohit");
    CHECK_FALSE(all[1].has_finite_pmi);
}

TEST_CASE("select_by_pmi breaks aggregate ties lexicographically") {
    CountStub counts;
    counts.counts[term_query("a")] = 10;
    for (const char* t : {"x", "y", "z"}) {
        counts.counts[term_query(t)] = 10;
        counts.counts[pair_query(t, "a")] = 5;
        counts.counts[pair_query("a", t)] = 5;
    }
    const std::vector<Variable> initial{binary("a")};
    auto out = select_by_pmi({candidate("z"), candidate("y"), candidate("x")}, initial, counts, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0].name == "x");
    CHECK(out[1].name == "y");
}

TEST_CASE("materialize_proposed_variable builds a binary existence variable") {
    const Variable v = materialize_proposed_variable("stress");
    CHECK(v.name == "stress");
    CHECK(v.domain == std::vector<std::string>{"True", "False"});
    CHECK(v.description.find("stress") != std::string::npos);
}

TEST_CASE("propose unions verification and PMI routes") {
    FixtureSearchClient search = FixtureSearchClient::from_text(R"(
{"id": "p1", "url": "https://arxiv.org/abs/20", "text": "stress and smoking study", "tags": []}
{"id": "p2", "url": "https://arxiv.org/abs/21", "text": "diet, smoking, everything", "tags": []}
)");
    ScriptedCompletionClient llm;
    llm.add_rule({"stress and smoking study", "new abstracted"},
                 "The new abstracted variable is <var>stress</var>.");
    llm.add_rule({"diet, smoking, everything", "new abstracted"},
                 "The new abstracted variable is <var>diet</var>.");
    llm.add_rule({"'stress causes smoking'"},
                 "The veracity of claim 'stress causes smoking' is True.");
    llm.set_default_response("unsure");

    const std::vector<Variable> initial{binary("smoking")};
    const std::vector<Document> corpus{
        make_document("https://arxiv.org/abs/20", "stress and smoking study"),
        make_document("https://arxiv.org/abs/21", "diet, smoking, everything")};

    ProposalConfig cfg;
    cfg.pmi_topk = 1;
    const ProposalResult r = propose(corpus, initial, llm, search, cfg);

    // ledger records every normalized candidate
    REQUIRE(r.ledger.size() == 2);
    // stress accepted via verification; diet can enter via PMI top-k
    std::set<std::string> names;
    for (const auto& v : r.expanded_variables) names.insert(v.name);
    CHECK(names.count("smoking"));
    CHECK(names.count("stress"));
    CHECK(r.expanded_variables.size() >= 2);
    // initial variables always come first
    CHECK(r.expanded_variables[0].name == "smoking");
}
