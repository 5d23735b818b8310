#include "iris/graph.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace iris {

Variable::Variable(std::string name_, std::string description_, std::vector<std::string> domain_,
                   std::vector<std::string> synonyms_)
    : name(std::move(name_)),
      description(std::move(description_)),
      domain(std::move(domain_)),
      synonyms(std::move(synonyms_)) {
    if (trim(name).empty()) throw InvalidArgument("variable name must be non-empty");
    if (domain.size() < 2) throw InvalidArgument("variable '" + name + "' needs a domain of >= 2 labels");
    std::set<std::string> seen;
    for (const auto& label : domain) {
        if (!seen.insert(norm_key(label)).second)
            throw InvalidArgument("variable '" + name + "' has duplicate domain label '" + label + "'");
    }
}

std::optional<std::string> Variable::match_label(std::string_view raw) const {
    const std::string k = norm_key(raw);
    for (const auto& label : domain)
        if (norm_key(label) == k) return label;
    return std::nullopt;
}

void CausalGraph::add_node(const std::string& name) {
    const std::string key = norm_key(name);
    if (key.empty()) throw InvalidArgument("node name must be non-empty");
    if (index_.count(key)) return;
    index_[key] = node_names_.size();
    node_names_.push_back(trim(name));
}

bool CausalGraph::has_node(const std::string& name) const {
    return index_.count(norm_key(name)) > 0;
}

size_t CausalGraph::node_index(const std::string& name) const {
    auto it = index_.find(norm_key(name));
    if (it == index_.end()) throw InvalidArgument("unknown node: " + name);
    return it->second;
}

const std::string& CausalGraph::canonical_name(const std::string& name) const {
    return node_names_[node_index(name)];
}

void CausalGraph::add_edge(const std::string& cause, const std::string& effect, EdgeMark mark) {
    const std::string a = norm_key(cause), b = norm_key(effect);
    node_index(cause);
    node_index(effect);
    if (a == b) throw InvalidArgument("self-loop forbidden: " + cause);

    const std::pair und_key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (mark == EdgeMark::Undirected) {
        // A Directed mark on either orientation wins over an Undirected add.
        if (marks_.count({a, b}) || marks_.count({b, a})) return;
        marks_[und_key] = EdgeMark::Undirected;
        return;
    }
    // Directed add upgrades an existing Undirected pair.
    auto it = marks_.find(und_key);
    if (it != marks_.end() && it->second == EdgeMark::Undirected) marks_.erase(it);
    marks_[{a, b}] = EdgeMark::Directed;
}

bool CausalGraph::remove_edge(const std::string& cause, const std::string& effect) {
    const std::string a = norm_key(cause), b = norm_key(effect);
    auto it = marks_.find({a, b});
    if (it != marks_.end() && it->second == EdgeMark::Directed) {
        marks_.erase(it);
        return true;
    }
    const std::pair und_key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    it = marks_.find(und_key);
    if (it != marks_.end() && it->second == EdgeMark::Undirected) {
        marks_.erase(it);
        marks_[{b, a}] = EdgeMark::Directed;  // surviving orientation
        return true;
    }
    return false;
}

bool CausalGraph::has_directed(const std::string& cause, const std::string& effect) const {
    const std::string a = norm_key(cause), b = norm_key(effect);
    auto it = marks_.find({a, b});
    if (it != marks_.end()) return true;
    const std::pair und_key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    it = marks_.find(und_key);
    return it != marks_.end() && it->second == EdgeMark::Undirected;
}

std::vector<Edge> CausalGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(marks_.size());
    for (const auto& [k, mark] : marks_) {
        out.push_back({node_names_[index_.at(k.first)], node_names_[index_.at(k.second)], mark});
    }
    return out;
}

std::set<std::pair<std::string, std::string>> CausalGraph::directed_edge_set() const {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& [k, mark] : marks_) {
        const std::string& u = node_names_[index_.at(k.first)];
        const std::string& v = node_names_[index_.at(k.second)];
        out.insert({u, v});
        if (mark == EdgeMark::Undirected) out.insert({v, u});
    }
    return out;
}

bool CausalGraph::operator==(const CausalGraph& other) const {
    std::set<std::string> a, b;
    for (const auto& [k, _] : index_) a.insert(k);
    for (const auto& [k, _] : other.index_) b.insert(k);
    return a == b && marks_ == other.marks_;
}

namespace {

std::vector<std::string> sorted_nodes(const CausalGraph& g) {
    std::vector<std::string> names = g.nodes();
    std::sort(names.begin(), names.end(),
              [](const std::string& x, const std::string& y) { return norm_key(x) < norm_key(y); });
    return names;
}

std::vector<Edge> sorted_edges(const CausalGraph& g) {
    std::vector<Edge> es = g.edges();
    std::sort(es.begin(), es.end(), [](const Edge& x, const Edge& y) {
        return std::make_pair(norm_key(x.from), norm_key(x.to)) <
               std::make_pair(norm_key(y.from), norm_key(y.to));
    });
    return es;
}

}  // namespace

std::string to_graph_json(const CausalGraph& g) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : sorted_nodes(g)) j["nodes"].push_back(n);
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : sorted_edges(g)) {
        j["edges"].push_back({{"from", e.from},
                              {"to", e.to},
                              {"mark", e.mark == EdgeMark::Directed ? "directed" : "undirected"}});
    }
    return j.dump(2) + "\n";
}

CausalGraph graph_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CausalGraph g;
    for (const auto& n : j.at("nodes")) g.add_node(n.get<std::string>());
    for (const auto& e : j.at("edges")) {
        const std::string mark = e.at("mark").get<std::string>();
        if (mark != "directed" && mark != "undirected")
            throw InvalidArgument("unknown edge mark: " + mark);
        g.add_edge(e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                   mark == "directed" ? EdgeMark::Directed : EdgeMark::Undirected);
    }
    return g;
}

std::string to_dot(const CausalGraph& g) {
    std::ostringstream out;
    out << "digraph causal {\n";
    for (const auto& n : sorted_nodes(g)) out << "  \"" << n << "\";\n";
    for (const auto& e : sorted_edges(g)) {
        out << "  \"" << e.from << "\" -> \"" << e.to << "\"";
        if (e.mark == EdgeMark::Undirected) out << " [dir=both]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace iris
