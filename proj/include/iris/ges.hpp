#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "iris/graph.hpp"
#include "iris/table.hpp"

namespace iris {

/// Decomposable BIC for discrete data with per-family caching. A family's
/// score is the multinomial log-likelihood of the node given its parents
/// minus (log n / 2) x free parameters, over rows complete for the family.
class DiscreteBicScorer {
public:
    explicit DiscreteBicScorer(const ObservationTable& table);

    double family_score(size_t node, const std::set<size_t>& parents) const;
    double graph_score(const std::vector<std::set<size_t>>& parent_sets) const;

    size_t n_vars() const { return n_; }

private:
    const ObservationTable& table_;
    size_t n_;
    std::vector<std::vector<size_t>> levels_;  // [col][row] domain index
    std::vector<std::vector<char>> present_;   // [col][row]
    mutable std::map<std::pair<size_t, std::set<size_t>>, double> cache_;
};

// Total discrete BIC of a DAG given as a CausalGraph over the table's
// variables (all edges must be Directed).
double discrete_bic(const ObservationTable& table, const CausalGraph& dag);

struct GESStep {
    bool insertion = true;
    std::string from, to;
    double gain = 0.0;
};

struct GESResult {
    CausalGraph graph;  // CPDAG of the selected DAG
    double score = 0.0;
    std::vector<std::set<size_t>> dag_parent_sets;
    std::vector<GESStep> trace;
};

// Score-based structure search with CPDAG conversion at the end. Small
// problems (n <= 4) are solved by exact enumeration; larger ones by greedy
// forward/backward/turning phases with ties broken lexicographically by
// (from, to) name.
GESResult run_ges(const ObservationTable& table);

}  // namespace iris
