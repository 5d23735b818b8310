#include "iris/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace iris {

namespace {

using EdgeSet = std::set<std::pair<std::string, std::string>>;

EdgeSet normalized_edges(const CausalGraph& g) {
    EdgeSet out;
    for (const auto& [from, to] : g.directed_edge_set())
        out.insert({norm_key(from), norm_key(to)});
    return out;
}

size_t node_union_size(const CausalGraph& a, const CausalGraph& b) {
    std::set<std::string> names;
    for (const auto& n : a.nodes()) names.insert(norm_key(n));
    for (const auto& n : b.nodes()) names.insert(norm_key(n));
    return names.size();
}

size_t intersection_size(const EdgeSet& a, const EdgeSet& b) {
    size_t n = 0;
    for (const auto& e : a)
        if (b.count(e)) ++n;
    return n;
}

}  // namespace

PRF1 prf1(const CausalGraph& predicted, const CausalGraph& truth) {
    const EdgeSet pred = normalized_edges(predicted);
    const EdgeSet gold = normalized_edges(truth);
    const size_t hit = intersection_size(pred, gold);

    PRF1 out;
    out.precision = pred.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(pred.size());
    out.recall = gold.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(gold.size());
    out.f1 = (out.precision + out.recall) > 0
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

double nhd(const CausalGraph& predicted, const CausalGraph& truth) {
    const EdgeSet pred = normalized_edges(predicted);
    const EdgeSet gold = normalized_edges(truth);
    const size_t n = node_union_size(predicted, truth);
    if (n == 0) return 0.0;
    const size_t hit = intersection_size(pred, gold);
    const size_t sym_diff = pred.size() + gold.size() - 2 * hit;
    return static_cast<double>(sym_diff) / static_cast<double>(n * n);
}

double nhd_ratio(const CausalGraph& predicted, const CausalGraph& truth) {
    const EdgeSet pred = normalized_edges(predicted);
    const EdgeSet gold = normalized_edges(truth);
    const size_t n = node_union_size(predicted, truth);
    if (pred.empty() && gold.empty()) return 0.0;
    if (pred.size() + gold.size() > n * n - n)
        throw InvalidArgument(
            "nhd_ratio: combined edge count exceeds the disjoint worst case (N^2 - N); the "
            "baseline bound does not apply");
    const double baseline =
        static_cast<double>(pred.size() + gold.size()) / static_cast<double>(n * n);
    return baseline > 0 ? nhd(predicted, truth) / baseline : 0.0;
}

GraphEvalReport evaluate_graphs(const CausalGraph& predicted, const CausalGraph& truth) {
    GraphEvalReport report;
    const PRF1 scores = prf1(predicted, truth);
    report.precision = scores.precision;
    report.recall = scores.recall;
    report.f1 = scores.f1;
    report.n_predicted_edges = normalized_edges(predicted).size();
    report.n_true_edges = normalized_edges(truth).size();
    report.nhd = nhd(predicted, truth);
    const size_t n = node_union_size(predicted, truth);
    report.baseline_nhd =
        n == 0 ? 0.0
               : static_cast<double>(report.n_predicted_edges + report.n_true_edges) /
                     static_cast<double>(n * n);
    report.nhd_ratio = report.baseline_nhd > 0 ? report.nhd / report.baseline_nhd : 0.0;
    return report;
}

std::string report_to_json(const GraphEvalReport& r) {
    nlohmann::ordered_json j{{"precision", r.precision},
                             {"recall", r.recall},
                             {"f1", r.f1},
                             {"n_predicted_edges", r.n_predicted_edges},
                             {"n_true_edges", r.n_true_edges},
                             {"nhd", r.nhd},
                             {"baseline_nhd", r.baseline_nhd},
                             {"nhd_ratio", r.nhd_ratio}};
    return j.dump(2) + "\n";
}

std::string report_to_table(const GraphEvalReport& r) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %-10s %-10s %-12s %-10s\n", "P", "R", "F1", "edges",
                  "NHD-ratio");
    out << buf;
    std::snprintf(buf, sizeof(buf), "%-10.2f %-10.2f %-10.2f %-12zu %-10.2f\n", r.precision,
                  r.recall, r.f1, r.n_predicted_edges, r.nhd_ratio);
    out << buf;
    return out.str();
}

double success_rate(const std::vector<AblationTrial>& trials) {
    if (trials.empty()) throw InvalidArgument("success_rate: no trials");
    size_t hits = 0;
    for (const auto& trial : trials) {
        const std::string target = norm_key(trial.removed_variable);
        for (const auto& name : trial.proposed)
            if (norm_key(name) == target) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / static_cast<double>(trials.size());
}

}  // namespace iris
