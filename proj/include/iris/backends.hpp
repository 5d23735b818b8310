#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "iris/common.hpp"

namespace iris {

struct CompletionRequest {
    std::string prompt;
    int max_tokens = 1024;
    double temperature = 0.0;
};

// Stable fingerprint of a normalized request, used as replay cache key.
std::string fingerprint(const CompletionRequest& req);

class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual std::string complete(const CompletionRequest& req) = 0;
    virtual size_t call_count() const { return 0; }
};

struct SearchHit {
    std::string url;
    std::string title;
    std::string snippet;
};

struct Document {
    std::string id;  // stable hash of url
    std::string url;
    std::string text;
    std::string source_query;
};

Document make_document(const std::string& url, std::string text, std::string source_query = "");

// A conjunction of search terms. Each term may carry synonyms; a document
// matches a term when the term or any synonym appears case-insensitively.
struct SearchQuery {
    std::vector<std::string> terms;

    std::string render() const;  // "a" AND "b" AND ...
    size_t size() const { return terms.size(); }
};

class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual std::vector<SearchHit> search(const SearchQuery& query, size_t k,
                                          const std::vector<std::string>& domain_allowlist = {}) = 0;
    virtual size_t count(const SearchQuery& query) = 0;
    virtual Document fetch(const std::string& url) = 0;
};

// Strips tags and collapses whitespace.
std::string strip_markup(std::string_view html);

bool host_matches_allowlist(const std::string& url, const std::vector<std::string>& allowlist);

/// Offline search backend over a JSONL corpus ({id, url, text, tags} per
/// line). Term matching is case-insensitive substring, with optional
/// registered synonyms.
class FixtureSearchClient : public SearchClient {
public:
    explicit FixtureSearchClient(const std::string& jsonl_path);
    static FixtureSearchClient from_text(const std::string& jsonl_text);

    void register_synonyms(const std::string& term, const std::vector<std::string>& synonyms);

    std::vector<SearchHit> search(const SearchQuery& query, size_t k,
                                  const std::vector<std::string>& domain_allowlist = {}) override;
    size_t count(const SearchQuery& query) override;
    Document fetch(const std::string& url) override;

    size_t corpus_size() const { return docs_.size(); }

private:
    FixtureSearchClient() = default;
    void load(const std::string& jsonl_text);
    bool doc_matches(const Document& doc, const SearchQuery& query) const;

    std::vector<Document> docs_;  // file order
    std::map<std::string, std::vector<std::string>> synonyms_;  // norm term -> variants
};

/// Completion mock driven by a script: ordered rules, first whose substrings
/// all appear in the prompt wins. Misses throw unless a default is set.
class ScriptedCompletionClient : public CompletionClient {
public:
    struct Rule {
        std::vector<std::string> match_all;  // case-insensitive substrings
        std::string response;
    };

    ScriptedCompletionClient() = default;
    explicit ScriptedCompletionClient(std::vector<Rule> rules) : rules_(std::move(rules)) {}
    static ScriptedCompletionClient from_json_file(const std::string& path);

    void add_rule(std::vector<std::string> match_all, std::string response);
    void set_default_response(std::string response) { default_response_ = std::move(response); }

    std::string complete(const CompletionRequest& req) override;
    size_t call_count() const override { return calls_; }

private:
    std::vector<Rule> rules_;
    std::optional<std::string> default_response_;
    size_t calls_ = 0;
};

enum class CacheMode { Record, Replay, Passthrough };

/// Record/replay wrapper around a CompletionClient. One file per fingerprint
/// under cache_dir, holding request + response JSON. In Replay mode a miss is
/// fatal and no live call is ever made.
class ReplayCompletionClient : public CompletionClient {
public:
    ReplayCompletionClient(std::shared_ptr<CompletionClient> inner, std::string cache_dir,
                           CacheMode mode);

    std::string complete(const CompletionRequest& req) override;
    size_t call_count() const override { return calls_; }
    size_t cache_hits() const { return hits_; }

private:
    std::string cache_path(const std::string& fp) const;
    std::optional<std::string> lookup(const std::string& fp) const;
    void store(const std::string& fp, const CompletionRequest& req, const std::string& response);

    std::shared_ptr<CompletionClient> inner_;
    std::string cache_dir_;
    CacheMode mode_;
    mutable std::mutex mu_;
    size_t calls_ = 0, hits_ = 0;
};

/// Generic JSON-over-HTTP chat-completion client. Endpoint, model, and auth
/// come from config/env; retries 3 times with exponential backoff from 1s.
class HttpCompletionClient : public CompletionClient {
public:
    struct Options {
        std::string base_url;   // scheme://host[:port]
        std::string path = "/v1/chat/completions";
        std::string model;
        std::string api_key;    // sent as Bearer auth when non-empty
        int max_retries = 3;
    };

    explicit HttpCompletionClient(Options opts) : opts_(std::move(opts)) {}
    std::string complete(const CompletionRequest& req) override;
    size_t call_count() const override { return calls_; }

private:
    Options opts_;
    size_t calls_ = 0;
};

}  // namespace iris
