#include "iris/retrieval.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace iris {

namespace {

// Appends one query per combination of term choices for the subset `idx`.
void expand_term_choices(const std::vector<std::vector<std::string>>& variants,
                         const std::vector<size_t>& idx, std::vector<SearchQuery>& out,
                         size_t cap) {
    std::vector<size_t> choice(idx.size(), 0);
    while (out.size() < cap) {
        SearchQuery q;
        for (size_t i = 0; i < idx.size(); ++i) q.terms.push_back(variants[idx[i]][choice[i]]);
        out.push_back(std::move(q));
        // odometer increment over term choices
        size_t i = idx.size();
        while (i > 0) {
            --i;
            if (++choice[i] < variants[idx[i]].size()) break;
            choice[i] = 0;
            if (i == 0) return;
        }
    }
}

bool next_combination(std::vector<size_t>& comb, size_t n) {
    const size_t k = comb.size();
    size_t i = k;
    while (i > 0) {
        --i;
        if (comb[i] < n - (k - i)) {
            ++comb[i];
            for (size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

QueryPlan generate_queries(const std::vector<Variable>& variables) {
    if (variables.empty()) throw InvalidArgument("generate_queries: need at least one variable");

    std::vector<std::vector<std::string>> variants;
    for (const auto& v : variables) {
        std::vector<std::string> terms{v.name};
        for (const auto& s : v.synonyms) {
            if (terms.size() >= QueryPlan::kMaxVariantsPerVariable) break;
            terms.push_back(s);
        }
        variants.push_back(std::move(terms));
    }

    QueryPlan plan;
    const size_t n = variables.size();
    std::set<std::string> seen;
    for (size_t size = n; size >= 1 && plan.queries.size() < QueryPlan::kMaxQueries; --size) {
        std::vector<size_t> comb(size);
        for (size_t i = 0; i < size; ++i) comb[i] = i;
        do {
            std::vector<SearchQuery> batch;
            expand_term_choices(variants, comb, batch, QueryPlan::kMaxQueries);
            for (auto& q : batch) {
                if (plan.queries.size() >= QueryPlan::kMaxQueries) break;
                if (seen.insert(q.render()).second) plan.queries.push_back(std::move(q));
            }
        } while (plan.queries.size() < QueryPlan::kMaxQueries && next_combination(comb, n));
    }
    return plan;
}

CorpusResult collect_corpus(const QueryPlan& plan, SearchClient& search, size_t threshold,
                            const std::vector<std::string>& domain_allowlist) {
    if (threshold < 1) throw InvalidArgument("collect_corpus: threshold must be >= 1");

    CorpusResult result;
    std::set<std::string> seen_urls;
    for (const auto& query : plan.queries) {
        if (result.documents.size() >= threshold) break;
        const size_t k = 20 * query.size();
        std::vector<SearchHit> hits = search.search(query, k, domain_allowlist);
        for (const auto& hit : hits) {
            if (result.documents.size() >= threshold) break;
            if (!seen_urls.insert(hit.url).second) continue;
            try {
                Document doc = search.fetch(hit.url);
                doc.source_query = query.render();
                result.documents.push_back(std::move(doc));
            } catch (const BackendError&) {
                ++result.fetch_failures;  // skip and continue
            }
        }
    }
    if (result.documents.size() < threshold)
        result.shortfall = threshold - result.documents.size();
    return result;
}

std::string corpus_to_jsonl(const std::vector<Document>& docs) {
    std::ostringstream out;
    for (const auto& d : docs) {
        nlohmann::ordered_json j{
            {"id", d.id}, {"url", d.url}, {"text", d.text}, {"tags", nlohmann::json::array()}};
        if (!d.source_query.empty()) j["tags"].push_back(d.source_query);
        out << j.dump() << "\n";
    }
    return out.str();
}

std::vector<Document> corpus_from_jsonl(const std::string& text) {
    std::vector<Document> docs;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Document d;
        d.url = j.at("url").get<std::string>();
        d.text = j.at("text").get<std::string>();
        d.id = j.contains("id") ? j.at("id").get<std::string>() : stable_hash(d.url);
        if (j.contains("tags") && !j.at("tags").empty())
            d.source_query = j.at("tags").at(0).get<std::string>();
        docs.push_back(std::move(d));
    }
    return docs;
}

}  // namespace iris
