#include <doctest.h>

#include "iris/retrieval.hpp"

using namespace iris;

namespace {

Variable plain(const std::string& name, std::vector<std::string> synonyms = {}) {
    return Variable(name, "", {"True", "False"}, std::move(synonyms));
}

const char* kCorpus = R"({"id":"d1","url":"u1","text":"smoking cancer pollution","tags":[]}
{"id":"d2","url":"u2","text":"smoking cancer","tags":[]}
{"id":"d3","url":"u3","text":"smoking pollution","tags":[]}
{"id":"d4","url":"u4","text":"cancer pollution","tags":[]}
{"id":"d5","url":"u5","text":"smoking only","tags":[]}
)";

}  // namespace

TEST_CASE("stepwise-removal plan: 3 variables, no synonyms -> 7 queries") {
    const QueryPlan plan =
        generate_queries({plain("smoking"), plain("cancer"), plain("pollution")});
    REQUIRE(plan.queries.size() == 7);
    // full-set query first, singles last
    CHECK(plan.queries.front().size() == 3);
    CHECK(plan.queries.back().size() == 1);
    // non-increasing |q|
    for (size_t i = 1; i < plan.queries.size(); ++i)
        CHECK(plan.queries[i].size() <= plan.queries[i - 1].size());
}

TEST_CASE("single variable -> 1 query") {
    CHECK(generate_queries({plain("x")}).queries.size() == 1);
}

TEST_CASE("synonym expansion: 2 variables, one synonym -> 5 queries") {
    const QueryPlan plan = generate_queries({plain("a", {"a2"}), plain("b")});
    // pairs {a-variant, b}: 2; singles a: 2, b: 1
    CHECK(plan.queries.size() == 5);
}

TEST_CASE("variant cap and total cap bound the plan") {
    std::vector<Variable> vars;
    for (int i = 0; i < 10; ++i)
        vars.push_back(plain("v" + std::to_string(i), {"s1", "s2", "s3", "s4", "s5"}));
    const QueryPlan plan = generate_queries(vars);
    CHECK(plan.queries.size() <= QueryPlan::kMaxQueries);
    for (const auto& q : plan.queries) CHECK(q.size() <= 10);
}

TEST_CASE("collect_corpus stops at the threshold in plan order") {
    FixtureSearchClient search = FixtureSearchClient::from_text(kCorpus);
    const QueryPlan plan =
        generate_queries({plain("smoking"), plain("cancer"), plain("pollution")});

    CorpusResult r = collect_corpus(plan, search, 4);
    REQUIRE(r.documents.size() == 4);
    // triple query hits d1 only; then pair queries in subset order
    CHECK(r.documents[0].id == "d1");
    CHECK(r.documents[1].id == "d2");  // smoking AND cancer
    CHECK(r.documents[2].id == "d3");  // smoking AND pollution
    CHECK(r.documents[3].id == "d4");  // cancer AND pollution
    CHECK(r.shortfall == 0);

    // no duplicate ids; every source_query is a plan query
    std::set<std::string> ids;
    std::set<std::string> plan_queries;
    for (const auto& q : plan.queries) plan_queries.insert(q.render());
    for (const auto& d : r.documents) {
        CHECK(ids.insert(d.id).second);
        CHECK(plan_queries.count(d.source_query) == 1);
    }
}

TEST_CASE("collect_corpus early stop at T=1 and shortfall reporting") {
    FixtureSearchClient search = FixtureSearchClient::from_text(kCorpus);
    const QueryPlan plan = generate_queries({plain("smoking"), plain("cancer")});
    CHECK(collect_corpus(plan, search, 1).documents.size() == 1);

    CorpusResult r = collect_corpus(plan, search, 50);
    CHECK(r.documents.size() == 5);  // every fixture doc mentions smoking or cancer
    CHECK(r.shortfall == 50 - r.documents.size());
    CHECK_THROWS_AS(collect_corpus(plan, search, 0), InvalidArgument);
}

TEST_CASE("corpus JSONL round-trip") {
    FixtureSearchClient search = FixtureSearchClient::from_text(kCorpus);
    const QueryPlan plan = generate_queries({plain("smoking")});
    CorpusResult r = collect_corpus(plan, search, 3);
    const std::string jsonl = corpus_to_jsonl(r.documents);
    const std::vector<Document> back = corpus_from_jsonl(jsonl);
    REQUIRE(back.size() == r.documents.size());
    for (size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].id == r.documents[i].id);
        CHECK(back[i].text == r.documents[i].text);
        CHECK(back[i].source_query == r.documents[i].source_query);
    }
}
