#pragma once

#include <string>
#include <vector>

#include "iris/graph.hpp"

namespace iris {

struct GraphEvalReport {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    size_t n_predicted_edges = 0, n_true_edges = 0;
    double nhd = 0.0;
    double baseline_nhd = 0.0;
    double nhd_ratio = 0.0;
};

struct PRF1 {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Directed-edge precision/recall/F1 with node names compared
// case-insensitively; undirected edges count as both orientations.
PRF1 prf1(const CausalGraph& predicted, const CausalGraph& truth);

// Symmetric difference of directed edge sets over N^2, N = |node union|.
double nhd(const CausalGraph& predicted, const CausalGraph& truth);

// nhd divided by the worst-case NHD at the same edge counts,
// (|E_pred| + |E_true|) / N^2. Zero when both edge sets are empty.
double nhd_ratio(const CausalGraph& predicted, const CausalGraph& truth);

GraphEvalReport evaluate_graphs(const CausalGraph& predicted, const CausalGraph& truth);

std::string report_to_json(const GraphEvalReport& report);
// Aligned one-row table: P, R, F1, predicted edges, NHD ratio.
std::string report_to_table(const GraphEvalReport& report);

struct AblationTrial {
    std::string removed_variable;
    std::vector<std::string> proposed;
};

// Fraction of trials whose removed variable matches a proposed name
// (case-insensitive, trimmed).
double success_rate(const std::vector<AblationTrial>& trials);

}  // namespace iris
