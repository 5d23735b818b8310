#pragma once

#include <string>
#include <vector>

#include "iris/backends.hpp"
#include "iris/graph.hpp"

namespace iris {

/// Stepwise-removal query plan: every non-empty variable subset by
/// descending size, one query per combination of term choices (name or
/// synonym). Bounded by the per-variable variant cap and the total cap.
struct QueryPlan {
    std::vector<SearchQuery> queries;

    static constexpr size_t kMaxVariantsPerVariable = 3;
    static constexpr size_t kMaxQueries = 256;
};

QueryPlan generate_queries(const std::vector<Variable>& variables);

struct CorpusResult {
    std::vector<Document> documents;
    size_t shortfall = 0;     // how far below the threshold we stopped
    size_t fetch_failures = 0;
};

// Runs the plan against the search backend until `threshold` documents are
// collected (deduplicated by url). Per-query hit budget is 20 x |query|.
CorpusResult collect_corpus(const QueryPlan& plan, SearchClient& search, size_t threshold,
                            const std::vector<std::string>& domain_allowlist = {});

std::string corpus_to_jsonl(const std::vector<Document>& docs);
std::vector<Document> corpus_from_jsonl(const std::string& text);

}  // namespace iris
