#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iris/ci_test.hpp"
#include "iris/graph.hpp"
#include "iris/table.hpp"

namespace iris {

struct PCResult {
    CausalGraph graph;  // CPDAG: oriented edges Directed, rest Undirected
    // Separating set found for each removed pair (recorded both ways).
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> separating_sets;
    size_t tests_run = 0;
};

// PC-stable: skeleton by CI tests with growing conditioning sets drawn from
// current adjacencies, then v-structure orientation and Meek closure.
PCResult run_pc(const ObservationTable& table, double significance);

}  // namespace iris
