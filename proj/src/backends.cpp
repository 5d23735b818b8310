#include "iris/backends.hpp"

#include <chrono>
#include <filesystem>
#include <sstream>
#include <thread>

#include <json.hpp>

// httplib pulled in only here; keep it out of public headers.
#define CPPHTTPLIB_OPENSSL_SUPPORT_DISABLED
#include <httplib.h>

namespace fs = std::filesystem;

namespace iris {

std::string fingerprint(const CompletionRequest& req) {
    nlohmann::ordered_json j{{"prompt", req.prompt},
                             {"max_tokens", req.max_tokens},
                             {"temperature", req.temperature}};
    return stable_hash(j.dump());
}

Document make_document(const std::string& url, std::string text, std::string source_query) {
    if (text.empty()) throw InvalidArgument("document text must be non-empty: " + url);
    return Document{stable_hash(url), url, std::move(text), std::move(source_query)};
}

std::string SearchQuery::render() const {
    std::ostringstream out;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i) out << " AND ";
        out << '"' << terms[i] << '"';
    }
    return out.str();
}

std::string strip_markup(std::string_view html) {
    std::string out;
    out.reserve(html.size());
    bool in_tag = false;
    for (char c : html) {
        if (c == '<')
            in_tag = true;
        else if (c == '>')
            in_tag = false;
        else if (!in_tag)
            out.push_back(c);
    }
    return collapse_whitespace(out);
}

namespace {
std::string url_host(const std::string& url) {
    size_t start = url.find("://");
    start = (start == std::string::npos) ? 0 : start + 3;
    size_t end = url.find_first_of("/:?#", start);
    return to_lower(url.substr(start, end == std::string::npos ? std::string::npos : end - start));
}
}  // namespace

bool host_matches_allowlist(const std::string& url, const std::vector<std::string>& allowlist) {
    if (allowlist.empty()) return true;
    const std::string host = url_host(url);
    for (const auto& entry : allowlist) {
        const std::string e = to_lower(trim(entry));
        if (host == e) return true;
        if (host.size() > e.size() && host.compare(host.size() - e.size(), e.size(), e) == 0 &&
            host[host.size() - e.size() - 1] == '.')
            return true;
    }
    return false;
}

FixtureSearchClient::FixtureSearchClient(const std::string& jsonl_path) {
    load(read_file(jsonl_path));
}

FixtureSearchClient FixtureSearchClient::from_text(const std::string& jsonl_text) {
    FixtureSearchClient c;
    c.load(jsonl_text);
    return c;
}

void FixtureSearchClient::load(const std::string& jsonl_text) {
    std::istringstream in(jsonl_text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Document d;
        d.url = j.at("url").get<std::string>();
        d.text = j.at("text").get<std::string>();
        d.id = j.contains("id") ? j.at("id").get<std::string>() : stable_hash(d.url);
        docs_.push_back(std::move(d));
    }
}

void FixtureSearchClient::register_synonyms(const std::string& term,
                                            const std::vector<std::string>& synonyms) {
    auto& list = synonyms_[norm_key(term)];
    for (const auto& s : synonyms) list.push_back(s);
}

bool FixtureSearchClient::doc_matches(const Document& doc, const SearchQuery& query) const {
    for (const auto& term : query.terms) {
        bool found = contains_ci(doc.text, term);
        if (!found) {
            auto it = synonyms_.find(norm_key(term));
            if (it != synonyms_.end())
                for (const auto& syn : it->second)
                    if (contains_ci(doc.text, syn)) {
                        found = true;
                        break;
                    }
        }
        if (!found) return false;
    }
    return true;
}

std::vector<SearchHit> FixtureSearchClient::search(const SearchQuery& query, size_t k,
                                                   const std::vector<std::string>& allowlist) {
    if (k < 1) throw InvalidArgument("search: k must be >= 1");
    if (query.terms.empty()) throw InvalidArgument("search: empty query");
    std::vector<SearchHit> hits;
    for (const auto& doc : docs_) {
        if (hits.size() >= k) break;
        if (!host_matches_allowlist(doc.url, allowlist)) continue;
        if (!doc_matches(doc, query)) continue;
        std::string snippet = doc.text.substr(0, 120);
        hits.push_back({doc.url, doc.id, std::move(snippet)});
    }
    return hits;
}

size_t FixtureSearchClient::count(const SearchQuery& query) {
    if (query.terms.empty()) throw InvalidArgument("count: empty query");
    size_t n = 0;
    for (const auto& doc : docs_)
        if (doc_matches(doc, query)) ++n;
    return n;
}

Document FixtureSearchClient::fetch(const std::string& url) {
    for (const auto& doc : docs_)
        if (doc.url == url) return doc;
    throw BackendError("fetch: unknown fixture url: " + url);
}

ScriptedCompletionClient ScriptedCompletionClient::from_json_file(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    std::vector<Rule> rules;
    for (const auto& r : j.at("rules")) {
        Rule rule;
        for (const auto& m : r.at("match_all")) rule.match_all.push_back(m.get<std::string>());
        rule.response = r.at("response").get<std::string>();
        rules.push_back(std::move(rule));
    }
    ScriptedCompletionClient c(std::move(rules));
    if (j.contains("default_response"))
        c.set_default_response(j.at("default_response").get<std::string>());
    return c;
}

void ScriptedCompletionClient::add_rule(std::vector<std::string> match_all, std::string response) {
    rules_.push_back({std::move(match_all), std::move(response)});
}

std::string ScriptedCompletionClient::complete(const CompletionRequest& req) {
    if (req.prompt.empty()) throw InvalidArgument("completion: empty prompt");
    ++calls_;
    for (const auto& rule : rules_) {
        bool all = true;
        for (const auto& needle : rule.match_all)
            if (!contains_ci(req.prompt, needle)) {
                all = false;
                break;
            }
        if (all) return rule.response;
    }
    if (default_response_) return *default_response_;
    throw BackendError("scripted completion: no rule matches prompt (fingerprint " +
                       fingerprint(req) + ")");
}

ReplayCompletionClient::ReplayCompletionClient(std::shared_ptr<CompletionClient> inner,
                                               std::string cache_dir, CacheMode mode)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)), mode_(mode) {
    if (mode_ != CacheMode::Replay) fs::create_directories(cache_dir_);
}

std::string ReplayCompletionClient::cache_path(const std::string& fp) const {
    return (fs::path(cache_dir_) / (fp + ".json")).string();
}

std::optional<std::string> ReplayCompletionClient::lookup(const std::string& fp) const {
    const std::string path = cache_path(fp);
    if (!fs::exists(path)) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    return j.at("response").get<std::string>();
}

void ReplayCompletionClient::store(const std::string& fp, const CompletionRequest& req,
                                   const std::string& response) {
    nlohmann::ordered_json j{{"fingerprint", fp},
                             {"request",
                              {{"prompt", req.prompt},
                               {"max_tokens", req.max_tokens},
                               {"temperature", req.temperature}}},
                             {"response", response}};
    write_file(cache_path(fp), j.dump(2) + "\n");
}

std::string ReplayCompletionClient::complete(const CompletionRequest& req) {
    if (req.prompt.empty()) throw InvalidArgument("completion: empty prompt");
    const std::string fp = fingerprint(req);
    {
        std::lock_guard lock(mu_);
        ++calls_;
        if (mode_ != CacheMode::Passthrough) {
            if (auto cached = lookup(fp)) {
                ++hits_;
                return *cached;
            }
            if (mode_ == CacheMode::Replay)
                throw BackendError("replay cache miss for fingerprint " + fp);
        }
    }
    const std::string response = inner_->complete(req);
    if (mode_ == CacheMode::Record) {
        std::lock_guard lock(mu_);
        store(fp, req, response);
    }
    return response;
}

std::string HttpCompletionClient::complete(const CompletionRequest& req) {
    if (req.prompt.empty()) throw InvalidArgument("completion: empty prompt");
    ++calls_;
    nlohmann::json body{{"model", opts_.model},
                        {"messages", {{{"role", "user"}, {"content", req.prompt}}}},
                        {"max_tokens", req.max_tokens},
                        {"temperature", req.temperature}};
    httplib::Headers headers;
    if (!opts_.api_key.empty()) headers.emplace("Authorization", "Bearer " + opts_.api_key);

    std::string last_error;
    int backoff_ms = 1000;
    for (int attempt = 0; attempt < opts_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        httplib::Client client(opts_.base_url);
        client.set_read_timeout(120, 0);
        auto res = client.Post(opts_.path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            nlohmann::json j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const std::exception& e) {
            throw BackendError(std::string("malformed completion response: ") + e.what());
        }
    }
    throw BackendError("completion failed after retries: " + last_error);
}

}  // namespace iris
