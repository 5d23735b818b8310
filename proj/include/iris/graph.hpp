#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iris/common.hpp"

namespace iris {

/// A named categorical variable. Names compare case-insensitively after
/// trimming; the first-seen casing is the stored form.
struct Variable {
    std::string name;
    std::string description;
    std::vector<std::string> domain;  // >= 2 distinct value labels
    std::vector<std::string> synonyms;

    Variable() = default;
    Variable(std::string name_, std::string description_, std::vector<std::string> domain_,
             std::vector<std::string> synonyms_ = {});

    std::string key() const { return norm_key(name); }

    // Canonical label for `raw` if it matches a domain label case-insensitively.
    std::optional<std::string> match_label(std::string_view raw) const;
};

enum class EdgeMark { Directed, Undirected };

struct Edge {
    std::string from;
    std::string to;
    EdgeMark mark = EdgeMark::Directed;
};

/// Directed graph over variable names. Cycles are permitted, self-loops are
/// not. An Undirected mark stores the pair once and reads as both
/// orientations.
class CausalGraph {
public:
    CausalGraph() = default;

    void add_node(const std::string& name);
    bool has_node(const std::string& name) const;
    // Stored (first-seen) casing for a registered name.
    const std::string& canonical_name(const std::string& name) const;
    // Node names in insertion order.
    const std::vector<std::string>& nodes() const { return node_names_; }

    void add_edge(const std::string& cause, const std::string& effect,
                  EdgeMark mark = EdgeMark::Directed);
    // Removes the exact directed pair: a Directed edge disappears; an
    // Undirected edge loses one orientation, leaving the other as Directed.
    // Removing an absent edge is a no-op and returns false.
    bool remove_edge(const std::string& cause, const std::string& effect);

    bool has_directed(const std::string& cause, const std::string& effect) const;
    // Stored edges, undirected pairs once.
    std::vector<Edge> edges() const;
    size_t edge_count() const { return marks_.size(); }

    // Every Directed edge once plus both orientations of each Undirected
    // edge, as canonical-name pairs, sorted.
    std::set<std::pair<std::string, std::string>> directed_edge_set() const;

    bool operator==(const CausalGraph& other) const;

private:
    std::vector<std::string> node_names_;           // stored casing
    std::map<std::string, size_t> index_;           // norm key -> index
    // key: (norm from, norm to); undirected edges keyed with the lesser key first
    std::map<std::pair<std::string, std::string>, EdgeMark> marks_;

    size_t node_index(const std::string& name) const;
};

struct EdgeDelta {
    std::set<std::pair<std::string, std::string>> add;
    std::set<std::pair<std::string, std::string>> remove;
};

std::string to_graph_json(const CausalGraph& g);
CausalGraph graph_from_json(const std::string& text);
std::string to_dot(const CausalGraph& g);

}  // namespace iris
