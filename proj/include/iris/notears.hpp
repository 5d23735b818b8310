#pragma once

#include <string>
#include <vector>

#include "iris/graph.hpp"
#include "iris/table.hpp"

namespace iris {

struct WeightedAdjacency {
    size_t d = 0;
    std::vector<double> w;  // row-major, diagonal exactly 0
    std::vector<std::string> names;

    double& at(size_t i, size_t j) { return w[i * d + j]; }
    double at(size_t i, size_t j) const { return w[i * d + j]; }
};

// Smooth acyclicity measure h(W) = tr(exp(W .* W)) - d and its gradient
// exp(W .* W)^T .* 2W.
struct AcyclicityValue {
    double value = 0.0;
    std::vector<double> gradient;  // d x d row-major
};

AcyclicityValue notears_h(const WeightedAdjacency& w);

struct NotearsConfig {
    double lambda1 = 0.1;
    double h_tolerance = 1e-8;
    int max_outer = 100;
    double rho_init = 1.0;
    double rho_growth = 10.0;
    double edge_threshold = 0.3;
    int max_inner = 5000;
};

struct NotearsOuterStep {
    double rho = 0.0, alpha = 0.0, h = 0.0;
};

struct NotearsResult {
    WeightedAdjacency weights;
    CausalGraph graph;  // |w_ij| > edge_threshold, Directed
    bool converged = false;
    double final_h = 0.0;
    std::vector<NotearsOuterStep> trajectory;
};

// Minimizes (1/2n)||X - XW||_F^2 + lambda1 ||W||_1 subject to h(W) = 0 via an
// augmented Lagrangian with a proximal-gradient inner loop.
NotearsResult run_notears(const NumericMatrix& x, const NotearsConfig& config = {});

}  // namespace iris
