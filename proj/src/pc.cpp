#include "iris/pc.hpp"

#include <algorithm>
#include <set>

#include "pattern.hpp"

namespace iris {

namespace {

// Next k-subset of {0..m-1} in lexicographic order; comb holds positions into
// a candidate list of size m.
bool next_subset(std::vector<size_t>& comb, size_t m) {
    const size_t k = comb.size();
    size_t i = k;
    while (i > 0) {
        --i;
        if (comb[i] < m - (k - i)) {
            ++comb[i];
            for (size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

PCResult run_pc(const ObservationTable& table, double significance) {
    const size_t n = table.n_cols();
    if (n < 2) throw InvalidArgument("run_pc: need at least two variables");
    const auto& vars = table.variables();

    PCResult result;
    for (const auto& v : vars) result.graph.add_node(v.name);

    std::vector<char> adj(n * n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j) adj[i * n + j] = 1;

    std::map<std::pair<size_t, size_t>, std::set<size_t>> sepset;

    for (size_t level = 0;; ++level) {
        // PC-stable: neighbor sets frozen per level.
        std::vector<std::vector<size_t>> neighbors(n);
        bool any_testable = false;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (i != j && adj[i * n + j]) neighbors[i].push_back(j);

        for (size_t i = 0; i < n; ++i)
            if (neighbors[i].size() >= level + 1) any_testable = true;
        if (!any_testable) break;

        for (size_t i = 0; i < n; ++i) {
            for (size_t j : neighbors[i]) {
                if (!adj[i * n + j]) continue;  // removed earlier this level
                std::vector<size_t> cands;
                for (size_t k : neighbors[i])
                    if (k != j) cands.push_back(k);
                if (cands.size() < level) continue;

                bool removed = false;
                if (level == 0) {
                    CITestResult t =
                        ci_test(table, vars[i].name, vars[j].name, {}, significance);
                    ++result.tests_run;
                    if (t.independent) {
                        sepset[{std::min(i, j), std::max(i, j)}] = {};
                        removed = true;
                    }
                } else {
                    std::vector<size_t> comb(level);
                    for (size_t c = 0; c < level; ++c) comb[c] = c;
                    do {
                        std::vector<std::string> z_names;
                        std::set<size_t> z_set;
                        for (size_t c : comb) {
                            z_names.push_back(vars[cands[c]].name);
                            z_set.insert(cands[c]);
                        }
                        CITestResult t =
                            ci_test(table, vars[i].name, vars[j].name, z_names, significance);
                        ++result.tests_run;
                        if (t.independent) {
                            sepset[{std::min(i, j), std::max(i, j)}] = z_set;
                            removed = true;
                            break;
                        }
                    } while (next_subset(comb, cands.size()));
                }
                if (removed) {
                    adj[i * n + j] = adj[j * n + i] = 0;
                }
            }
        }
    }

    // Orientation phase.
    detail::Pattern pattern(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (adj[i * n + j]) pattern.set_undirected(i, j);

    // V-structures: i - k - j with i,j nonadjacent and k outside sepset(i,j).
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i) {
            if (i == k || !pattern.adjacent(i, k)) continue;
            for (size_t j = i + 1; j < n; ++j) {
                if (j == k || !pattern.adjacent(j, k)) continue;
                if (pattern.adjacent(i, j)) continue;
                auto it = sepset.find({std::min(i, j), std::max(i, j)});
                if (it == sepset.end()) continue;
                if (it->second.count(k)) continue;
                pattern.orient(i, k);
                pattern.orient(j, k);
            }
        }

    detail::meek_closure(pattern);

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (pattern.dir(i, j))
                result.graph.add_edge(vars[i].name, vars[j].name, EdgeMark::Directed);
            else if (j > i && pattern.und(i, j))
                result.graph.add_edge(vars[i].name, vars[j].name, EdgeMark::Undirected);
        }

    for (const auto& [pair, z] : sepset) {
        std::vector<std::string> names;
        for (size_t c : z) names.push_back(vars[c].name);
        result.separating_sets[{vars[pair.first].name, vars[pair.second].name}] = names;
        result.separating_sets[{vars[pair.second].name, vars[pair.first].name}] = names;
    }
    return result;
}

}  // namespace iris
