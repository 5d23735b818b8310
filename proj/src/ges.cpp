#include "iris/ges.hpp"

#include <algorithm>

#include "pattern.hpp"

namespace iris {

namespace {

// Is there a directed path from src to dst? Used to keep candidates acyclic.
bool reachable(const std::vector<std::set<size_t>>& children, size_t src, size_t dst) {
    std::vector<size_t> stack{src};
    std::set<size_t> seen{src};
    while (!stack.empty()) {
        const size_t u = stack.back();
        stack.pop_back();
        if (u == dst) return true;
        for (size_t v : children[u])
            if (seen.insert(v).second) stack.push_back(v);
    }
    return false;
}

bool is_acyclic(const std::vector<std::set<size_t>>& parents) {
    const size_t n = parents.size();
    std::vector<size_t> indeg(n, 0);
    for (size_t i = 0; i < n; ++i) indeg[i] = parents[i].size();
    std::vector<std::set<size_t>> children(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t p : parents[i]) children[p].insert(i);
    std::vector<size_t> queue;
    for (size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(i);
    size_t visited = 0;
    while (!queue.empty()) {
        const size_t u = queue.back();
        queue.pop_back();
        ++visited;
        for (size_t v : children[u])
            if (--indeg[v] == 0) queue.push_back(v);
    }
    return visited == n;
}

struct Candidate {
    size_t from = 0, to = 0;
    double gain = 0.0;
    bool valid = false;
};

}  // namespace

GESResult run_ges(const ObservationTable& table) {
    const size_t n = table.n_cols();
    if (n < 2) throw InvalidArgument("run_ges: need at least two variables");
    const auto& vars = table.variables();
    DiscreteBicScorer scorer(table);

    std::vector<std::set<size_t>> parents(n);
    std::vector<std::set<size_t>> children(n);
    GESResult result;

    auto name_pair_less = [&](size_t f1, size_t t1, size_t f2, size_t t2) {
        return std::make_pair(norm_key(vars[f1].name), norm_key(vars[t1].name)) <
               std::make_pair(norm_key(vars[f2].name), norm_key(vars[t2].name));
    };
    constexpr double kGainEps = 1e-9;

    // Forward phase: best single-edge insertion until no positive gain.
    auto forward_phase = [&]() {
        bool changed = false;
        for (;;) {
            Candidate best;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    if (i == j || parents[j].count(i)) continue;
                    if (reachable(children, j, i)) continue;  // would create a cycle
                    std::set<size_t> with = parents[j];
                    with.insert(i);
                    const double gain =
                        scorer.family_score(j, with) - scorer.family_score(j, parents[j]);
                    if (gain <= kGainEps) continue;
                    if (!best.valid || gain > best.gain + kGainEps ||
                        (gain > best.gain - kGainEps && name_pair_less(i, j, best.from, best.to)))
                        best = {i, j, gain, true};
                }
            if (!best.valid) break;
            parents[best.to].insert(best.from);
            children[best.from].insert(best.to);
            if (!is_acyclic(parents)) throw InternalError("run_ges: forward step broke acyclicity");
            result.trace.push_back({true, vars[best.from].name, vars[best.to].name, best.gain});
            changed = true;
        }
        return changed;
    };

    // Backward phase: best single-edge deletion until no positive gain.
    auto backward_phase = [&]() {
        bool changed = false;
        for (;;) {
            Candidate best;
            for (size_t j = 0; j < n; ++j)
                for (size_t i : parents[j]) {
                    std::set<size_t> without = parents[j];
                    without.erase(i);
                    const double gain =
                        scorer.family_score(j, without) - scorer.family_score(j, parents[j]);
                    if (gain <= kGainEps) continue;
                    if (!best.valid || gain > best.gain + kGainEps ||
                        (gain > best.gain - kGainEps && name_pair_less(i, j, best.from, best.to)))
                        best = {i, j, gain, true};
                }
            if (!best.valid) break;
            parents[best.to].erase(best.from);
            children[best.from].erase(best.to);
            result.trace.push_back({false, vars[best.from].name, vars[best.to].name, best.gain});
            changed = true;
        }
        return changed;
    };

    // Turning phase: best single-edge reversal until no positive gain. Escapes
    // local optima where an edge was inserted in the wrong orientation.
    auto turning_phase = [&]() {
        bool changed = false;
        for (;;) {
            Candidate best;
            for (size_t j = 0; j < n; ++j)
                for (size_t i : parents[j]) {
                    // reversing i->j to j->i must not close a cycle via another path
                    children[i].erase(j);
                    const bool cycle = reachable(children, i, j);
                    children[i].insert(j);
                    if (cycle) continue;
                    std::set<size_t> pj = parents[j];
                    pj.erase(i);
                    std::set<size_t> pi = parents[i];
                    pi.insert(j);
                    const double gain = scorer.family_score(j, pj) + scorer.family_score(i, pi) -
                                        scorer.family_score(j, parents[j]) -
                                        scorer.family_score(i, parents[i]);
                    if (gain <= kGainEps) continue;
                    if (!best.valid || gain > best.gain + kGainEps ||
                        (gain > best.gain - kGainEps && name_pair_less(j, i, best.from, best.to)))
                        best = {j, i, gain, true};  // stored as the new edge direction
                }
            if (!best.valid) break;
            // best holds the new direction; the old edge ran best.to -> best.from
            parents[best.from].erase(best.to);
            children[best.to].erase(best.from);
            parents[best.to].insert(best.from);
            children[best.from].insert(best.to);
            if (!is_acyclic(parents)) throw InternalError("run_ges: turn step broke acyclicity");
            result.trace.push_back({false, vars[best.to].name, vars[best.from].name, 0.0});
            result.trace.push_back({true, vars[best.from].name, vars[best.to].name, best.gain});
            changed = true;
        }
        return changed;
    };

    if (n <= 4) {
        // Small search spaces are enumerated exactly: every pair is absent,
        // forward, or backward (3^(n(n-1)/2) candidates), acyclic ones scored.
        std::vector<std::pair<size_t, size_t>> pairs;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        size_t combos = 1;
        for (size_t p = 0; p < pairs.size(); ++p) combos *= 3;

        double best_score = 0.0;
        bool have_best = false;
        std::vector<std::set<size_t>> best_parents;
        for (size_t code = 0; code < combos; ++code) {
            std::vector<std::set<size_t>> cand(n);
            size_t c = code;
            for (const auto& [i, j] : pairs) {
                const size_t state = c % 3;
                c /= 3;
                if (state == 1) cand[j].insert(i);
                if (state == 2) cand[i].insert(j);
            }
            if (!is_acyclic(cand)) continue;
            const double score = scorer.graph_score(cand);
            if (!have_best || score > best_score + kGainEps) {
                have_best = true;
                best_score = score;
                best_parents = cand;
            }
        }
        parents = std::move(best_parents);
    } else {
        forward_phase();
        for (;;) {
            bool changed = backward_phase();
            changed = turning_phase() || changed;
            if (changed && forward_phase()) continue;
            if (!changed) break;
        }
    }

    result.score = scorer.graph_score(parents);
    result.dag_parent_sets = parents;

    // CPDAG of the selected DAG: keep v-structures directed, Meek closure,
    // everything else undirected.
    detail::Pattern pattern(n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i : parents[j]) pattern.set_undirected(i, j);
    auto dag_adjacent = [&](size_t a, size_t b) {
        return parents[a].count(b) || parents[b].count(a);
    };
    for (size_t k = 0; k < n; ++k) {
        std::vector<size_t> ps(parents[k].begin(), parents[k].end());
        for (size_t a = 0; a < ps.size(); ++a)
            for (size_t b = a + 1; b < ps.size(); ++b)
                if (!dag_adjacent(ps[a], ps[b])) {
                    pattern.orient(ps[a], k);
                    pattern.orient(ps[b], k);
                }
    }
    detail::meek_closure(pattern);

    for (const auto& v : vars) result.graph.add_node(v.name);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (pattern.dir(i, j))
                result.graph.add_edge(vars[i].name, vars[j].name, EdgeMark::Directed);
            else if (j > i && pattern.und(i, j))
                result.graph.add_edge(vars[i].name, vars[j].name, EdgeMark::Undirected);
        }
    return result;
}

}  // namespace iris
