#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "swarmcluster/clustering.hpp"
#include "swarmcluster/matrix.hpp"

namespace swarmcluster {

namespace detail {

// Cluster-by-class agreement counts. Sparse ids are densified in ascending
// value order on both axes.
inline std::vector<std::vector<long long>> contingency_table(const std::vector<int>& assignments,
                                                             const std::vector<int>& labels) {
    if (assignments.empty()) throw std::invalid_argument("contingency_table: empty input");
    if (assignments.size() != labels.size())
        throw std::invalid_argument("contingency_table: length mismatch");
    std::map<int, std::size_t> row_id, col_id;
    for (int a : assignments) row_id.emplace(a, 0);
    for (int l : labels) col_id.emplace(l, 0);
    std::size_t r = 0, c = 0;
    for (auto& [k, v] : row_id) v = r++;
    for (auto& [k, v] : col_id) v = c++;
    std::vector<std::vector<long long>> table(row_id.size(),
                                              std::vector<long long>(col_id.size(), 0));
    for (std::size_t i = 0; i < assignments.size(); ++i)
        ++table[row_id[assignments[i]]][col_id[labels[i]]];
    return table;
}

// Hungarian algorithm (shortest augmenting paths with potentials) for the
// min-cost rectangular assignment with rows <= cols. O(rows^2 * cols).
inline long long min_cost_assignment(const std::vector<std::vector<long long>>& cost) {
    const std::size_t n = cost.size();
    const std::size_t m = cost[0].size();
    if (n > m) throw std::invalid_argument("min_cost_assignment: needs rows <= cols");
    constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

    std::vector<long long> u(n + 1, 0), v(m + 1, 0);
    std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<long long> min_slack(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            long long delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    long long total = 0;
    for (std::size_t j = 1; j <= m; ++j)
        if (match[j] != 0) total += cost[match[j] - 1][j - 1];
    return total;
}

// Max total agreement over one-to-one mappings between cluster and class
// ids (partial when the counts differ: every id on the smaller side is
// matched to a distinct id on the larger).
inline long long best_matching_agreement(const std::vector<std::vector<long long>>& table) {
    const std::size_t rows = table.size(), cols = table[0].size();
    long long top = 0;
    for (const auto& row : table)
        for (long long v : row) top = std::max(top, v);
    // Negate into a min-cost problem, orienting the smaller side as rows.
    std::vector<std::vector<long long>> cost(std::min(rows, cols),
                                             std::vector<long long>(std::max(rows, cols)));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (rows <= cols)
                cost[i][j] = top - table[i][j];
            else
                cost[j][i] = top - table[i][j];
        }
    const long long assigned = min_cost_assignment(cost);
    return static_cast<long long>(std::min(rows, cols)) * top - assigned;
}

}  // namespace detail

/// Misclassified fraction under the best one-to-one cluster/class mapping.
/// Defined for any cluster/class count: when they differ, the smaller side
/// is matched injectively into the larger.
inline double error_rate_matching(const std::vector<int>& assignments,
                                  const std::vector<int>& labels) {
    const auto table = detail::contingency_table(assignments, labels);
    const long long agree = detail::best_matching_agreement(table);
    return 1.0 - static_cast<double>(agree) / static_cast<double>(assignments.size());
}

/// Majority-class (purity) error: 1 - sum over clusters of the dominant
/// class count, over n.
inline double error_rate_purity(const std::vector<int>& assignments,
                                const std::vector<int>& labels) {
    const auto table = detail::contingency_table(assignments, labels);
    long long majority = 0;
    for (const auto& row : table) majority += *std::max_element(row.begin(), row.end());
    return 1.0 - static_cast<double>(majority) / static_cast<double>(assignments.size());
}

/// The reported error rate: optimal one-to-one matching when the number of
/// clusters equals the number of classes, purity otherwise.
inline double error_rate(const std::vector<int>& assignments, const std::vector<int>& labels) {
    const auto table = detail::contingency_table(assignments, labels);
    if (table.size() == table[0].size()) {
        const long long agree = detail::best_matching_agreement(table);
        return 1.0 - static_cast<double>(agree) / static_cast<double>(assignments.size());
    }
    return error_rate_purity(assignments, labels);
}

/// Smallest pairwise distance between centers; +infinity for k < 2 (callers
/// report that case as "not applicable").
inline double min_inter_cluster_distance(const CentroidSet& centers) {
    if (centers.k() < 2) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.k(); ++i)
        for (std::size_t j = i + 1; j < centers.k(); ++j)
            best = std::min(best, distance(centers.centers.row(i), centers.centers.row(j)));
    return best;
}

/// First trace index whose remaining improvement is within frac of the total
/// improvement; 0 when the trace never improves. The trace must be a
/// non-increasing best-so-far fitness sequence.
inline std::size_t convergence_iteration(const std::vector<double>& trace, double frac = 0.01) {
    if (trace.empty()) throw std::invalid_argument("convergence_iteration: empty trace");
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] > trace[i - 1])
            throw std::invalid_argument("convergence_iteration: trace increases at index " +
                                        std::to_string(i));
    const double first = trace.front(), last = trace.back();
    if (first == last) return 0;
    const double threshold = frac * (first - last);
    for (std::size_t t = 0; t < trace.size(); ++t)
        if (trace[t] - last <= threshold) return t;
    return trace.size() - 1;  // unreachable: the last entry always qualifies
}

/// One experiment run's worth of the comparison criteria.
struct RunMetrics {
    double sicd = 0.0;
    std::optional<double> error_rate_matching;  // absent when the dataset is unlabeled
    std::optional<double> error_rate_purity;
    std::size_t convergence_iteration = 0;
    std::optional<double> min_inter_cluster;  // absent for k = 1
    double wall_ms = 0.0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
};

inline RunMetrics compute_run_metrics(const ClusteringResult& run,
                                      const std::optional<std::vector<int>>& labels,
                                      double wall_ms, std::uint64_t seed) {
    RunMetrics m;
    m.sicd = run.sicd;
    m.k = run.k;
    m.seed = seed;
    m.wall_ms = wall_ms;
    if (labels) {
        m.error_rate_matching = error_rate_matching(run.assignments, *labels);
        m.error_rate_purity = error_rate_purity(run.assignments, *labels);
    }
    if (!run.trace.empty()) {
        std::vector<double> gbest;
        gbest.reserve(run.trace.size());
        for (const auto& rec : run.trace) gbest.push_back(rec.gbest_fitness);
        m.convergence_iteration = convergence_iteration(gbest);
    }
    if (run.k >= 2) m.min_inter_cluster = min_inter_cluster_distance(CentroidSet(run.centers));
    return m;
}

}  // namespace swarmcluster
