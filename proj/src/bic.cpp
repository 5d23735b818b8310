#include <cmath>

#include "iris/ges.hpp"

namespace iris {

DiscreteBicScorer::DiscreteBicScorer(const ObservationTable& table)
    : table_(table), n_(table.n_cols()) {
    const size_t rows = table.n_rows();
    levels_.assign(n_, std::vector<size_t>(rows, 0));
    present_.assign(n_, std::vector<char>(rows, 0));
    for (size_t c = 0; c < n_; ++c) {
        const auto& domain = table.variables()[c].domain;
        std::map<std::string, size_t> index;
        for (size_t i = 0; i < domain.size(); ++i) index[norm_key(domain[i])] = i;
        for (size_t r = 0; r < rows; ++r) {
            const auto& cell = table.cell_at(r, c);
            if (!cell) continue;
            present_[c][r] = 1;
            levels_[c][r] = index.at(norm_key(*cell));
        }
    }
}

double DiscreteBicScorer::family_score(size_t node, const std::set<size_t>& parents) const {
    const auto key = std::make_pair(node, parents);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    const size_t node_card = table_.variables()[node].domain.size();
    size_t parent_card = 1;
    for (size_t p : parents) parent_card *= table_.variables()[p].domain.size();

    // counts[config][value] over rows complete for the family
    std::map<size_t, std::vector<double>> counts;
    size_t n_obs = 0;
    const size_t rows = table_.n_rows();
    for (size_t r = 0; r < rows; ++r) {
        if (!present_[node][r]) continue;
        bool ok = true;
        size_t config = 0;
        for (size_t p : parents) {
            if (!present_[p][r]) {
                ok = false;
                break;
            }
            config = config * table_.variables()[p].domain.size() + levels_[p][r];
        }
        if (!ok) continue;
        auto& bucket = counts[config];
        if (bucket.empty()) bucket.assign(node_card, 0.0);
        bucket[levels_[node][r]] += 1.0;
        ++n_obs;
    }
    if (n_obs == 0) throw InvalidArgument("discrete_bic: node family has zero complete rows");

    double ll = 0.0;
    for (const auto& [config, bucket] : counts) {
        double total = 0.0;
        for (double c : bucket) total += c;
        for (double c : bucket)
            if (c > 0) ll += c * std::log(c / total);
    }
    const double params = static_cast<double>((node_card - 1) * parent_card);
    const double score = ll - 0.5 * std::log(static_cast<double>(n_obs)) * params;
    cache_[key] = score;
    return score;
}

double DiscreteBicScorer::graph_score(const std::vector<std::set<size_t>>& parent_sets) const {
    double total = 0.0;
    for (size_t i = 0; i < n_; ++i) total += family_score(i, parent_sets[i]);
    return total;
}

double discrete_bic(const ObservationTable& table, const CausalGraph& dag) {
    const auto& vars = table.variables();
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < vars.size(); ++i) index[vars[i].key()] = i;

    std::vector<std::set<size_t>> parents(vars.size());
    for (const auto& e : dag.edges()) {
        if (e.mark != EdgeMark::Directed)
            throw InvalidArgument("discrete_bic: graph must be a DAG with directed edges only");
        parents[index.at(norm_key(e.to))].insert(index.at(norm_key(e.from)));
    }
    return DiscreteBicScorer(table).graph_score(parents);
}

}  // namespace iris
