#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "swarmcluster/metrics.hpp"
#include "swarmcluster/rng.hpp"
#include "test_support.hpp"

using namespace swarmcluster;

namespace {

// Exhaustive best one-to-one matching for K = C, by trying all K!
// permutations of cluster -> class.
double matching_error_oracle(const std::vector<int>& assignments,
                             const std::vector<int>& labels, int k) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t agree = 0;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (perm[static_cast<std::size_t>(assignments[i])] == labels[i]) ++agree;
        best = std::max(best, agree);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return 1.0 - static_cast<double>(best) / static_cast<double>(assignments.size());
}

}  // namespace

TEST_CASE("error_rate on relabelings and near-relabelings") {
    const std::vector<int> labels = {0, 0, 1, 1};
    CHECK(error_rate({1, 1, 0, 0}, labels) == doctest::Approx(0.0));
    CHECK(error_rate({1, 0, 0, 0}, labels) == doctest::Approx(0.25));
    CHECK(error_rate(labels, labels) == doctest::Approx(0.0));
}

TEST_CASE("error_rate equals the exhaustive permutation oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(3));  // K = C in 2..4
        std::vector<int> labels(30), assignments(30);
        for (std::size_t i = 0; i < 30; ++i) {
            labels[i] = static_cast<int>(rng.below(k));
            assignments[i] = static_cast<int>(rng.below(k));
        }
        // force every id present on both sides so K = C exactly
        for (int c = 0; c < k; ++c) {
            labels[static_cast<std::size_t>(c)] = c;
            assignments[static_cast<std::size_t>(c) + 10] = c;
        }
        CHECK(error_rate(assignments, labels) ==
              doctest::Approx(matching_error_oracle(assignments, labels, k)));
        CHECK(error_rate_matching(assignments, labels) ==
              doctest::Approx(matching_error_oracle(assignments, labels, k)));
    }
}

TEST_CASE("hungarian matcher agrees with brute force on larger square tables") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 5 + static_cast<int>(rng.below(3));  // 5..7
        std::vector<int> labels(60), assignments(60);
        for (std::size_t i = 0; i < 60; ++i) {
            labels[i] = static_cast<int>(rng.below(k));
            assignments[i] = static_cast<int>(rng.below(k));
        }
        for (int c = 0; c < k; ++c) {
            labels[static_cast<std::size_t>(c)] = c;
            assignments[static_cast<std::size_t>(c) + 20] = c;
        }
        CHECK(error_rate_matching(assignments, labels) ==
              doctest::Approx(matching_error_oracle(assignments, labels, k)));
    }
}

TEST_CASE("purity fallback when K != C") {
    // two clusters over three classes: purity counts each cluster's majority
    const std::vector<int> labels = {0, 0, 1, 1, 2, 2};
    const std::vector<int> assignments = {0, 0, 0, 1, 1, 1};
    // cluster 0 majority = class 0 (2 of 3); cluster 1 majority = class 2 (2 of 3)
    CHECK(error_rate_purity(assignments, labels) == doctest::Approx(2.0 / 6.0));
    CHECK(error_rate(assignments, labels) == doctest::Approx(2.0 / 6.0));
    // matching variant still defined: injective 2-of-3 matching
    CHECK(error_rate_matching(assignments, labels) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("matching with more clusters than classes") {
    // K=3 over C=2: the two classes are matched injectively into clusters
    const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
    const std::vector<int> assignments = {0, 0, 1, 2, 2, 2};
    // best mapping: class 0 -> cluster 0 (2), class 1 -> cluster 2 (3)
    CHECK(error_rate_matching(assignments, labels) == doctest::Approx(1.0 / 6.0));
    // purity: clusters 0,1,2 majorities are 2,1,3
    CHECK(error_rate_purity(assignments, labels) == doctest::Approx(0.0));
    // dispatching op picks purity since K != C
    CHECK(error_rate(assignments, labels) == doctest::Approx(0.0));
}

TEST_CASE("rectangular matching agrees with exhaustive injection search") {
    Rng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 4, c = 2 + static_cast<int>(rng.below(2));  // 4 clusters, 2..3 classes
        std::vector<int> labels(40), assignments(40);
        for (std::size_t i = 0; i < 40; ++i) {
            labels[i] = static_cast<int>(rng.below(c));
            assignments[i] = static_cast<int>(rng.below(k));
        }
        for (int j = 0; j < k; ++j) assignments[static_cast<std::size_t>(j)] = j;
        for (int j = 0; j < c; ++j) labels[static_cast<std::size_t>(j) + 20] = j;
        // exhaustive: try every injective map class -> cluster
        std::vector<int> clusters(k);
        std::iota(clusters.begin(), clusters.end(), 0);
        std::size_t best = 0;
        std::vector<int> pick(c);
        std::function<void(int, unsigned)> search = [&](int depth, unsigned used) {
            if (depth == c) {
                std::size_t agree = 0;
                for (std::size_t i = 0; i < 40; ++i)
                    if (assignments[i] == pick[static_cast<std::size_t>(labels[i])]) ++agree;
                best = std::max(best, agree);
                return;
            }
            for (int j = 0; j < k; ++j) {
                if (used & (1u << j)) continue;
                pick[static_cast<std::size_t>(depth)] = j;
                search(depth + 1, used | (1u << j));
            }
        };
        search(0, 0);
        const double oracle = 1.0 - static_cast<double>(best) / 40.0;
        CHECK(error_rate_matching(assignments, labels) == doctest::Approx(oracle));
    }
}

TEST_CASE("error_rate invariances") {
    Rng rng(88);
    std::vector<int> labels(40), assignments(40);
    for (std::size_t i = 0; i < 40; ++i) {
        labels[i] = static_cast<int>(rng.below(3));
        assignments[i] = static_cast<int>(rng.below(3));
    }
    for (int c = 0; c < 3; ++c) {
        labels[static_cast<std::size_t>(c)] = c;
        assignments[static_cast<std::size_t>(c) + 5] = c;
    }
    const double base = error_rate(assignments, labels);

    SUBCASE("permuting cluster ids changes nothing") {
        const int perm[3] = {2, 0, 1};
        std::vector<int> renamed(assignments.size());
        for (std::size_t i = 0; i < assignments.size(); ++i)
            renamed[i] = perm[assignments[i]];
        CHECK(error_rate(renamed, labels) == doctest::Approx(base));
    }
    SUBCASE("flipping a correctly-matched point never lowers the error") {
        // start from a perfect assignment and flip points one at a time
        std::vector<int> perfect = labels;
        const double zero = error_rate(perfect, labels);
        CHECK(zero == doctest::Approx(0.0));
        for (std::size_t i = 0; i < perfect.size(); ++i) {
            std::vector<int> flipped = perfect;
            flipped[i] = (flipped[i] + 1) % 3;
            CHECK(error_rate(flipped, labels) >= zero);
        }
    }
}

TEST_CASE("error_rate input validation") {
    CHECK_THROWS_AS(error_rate({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(error_rate({0, 1}, {0}), std::invalid_argument);
}

TEST_CASE("min_inter_cluster_distance") {
    auto centers = [](std::initializer_list<std::vector<double>> rows) {
        return CentroidSet(testsupport::make_dataset(rows).points);
    };
    CHECK(min_inter_cluster_distance(centers({{0.0, 0.0}, {3.0, 4.0}})) == doctest::Approx(5.0));
    CHECK(min_inter_cluster_distance(centers({{0.0}, {1.0}, {5.0}})) == doctest::Approx(1.0));
    CHECK(min_inter_cluster_distance(centers({{2.0}, {2.0}})) == doctest::Approx(0.0));
    CHECK(min_inter_cluster_distance(centers({{1.0, 1.0}})) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("convergence_iteration") {
    CHECK(convergence_iteration({10, 5, 1, 1, 1}) == 2);
    CHECK(convergence_iteration({7, 7, 7}) == 0);
    CHECK(convergence_iteration({5}) == 0);

    SUBCASE("result is always inside the trace") {
        Rng rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> trace(1, rng.uniform(50, 100));
            for (int i = 0; i < 30; ++i)
                trace.push_back(trace.back() - rng.uniform01());  // strictly decreasing
            CHECK(convergence_iteration(trace) <= trace.size() - 1);
        }
    }
    SUBCASE("larger frac converges no later") {
        Rng rng(6);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> trace(1, rng.uniform(50, 100));
            for (int i = 0; i < 30; ++i) trace.push_back(trace.back() - rng.uniform01());
            CHECK(convergence_iteration(trace, 0.1) <= convergence_iteration(trace, 0.01));
            CHECK(convergence_iteration(trace, 0.5) <= convergence_iteration(trace, 0.1));
        }
    }
    SUBCASE("increasing trace is a contract violation") {
        CHECK_THROWS_AS(convergence_iteration({1.0, 2.0}), std::invalid_argument);
        CHECK_THROWS_AS(convergence_iteration({}), std::invalid_argument);
    }
}

TEST_CASE("compute_run_metrics assembles the criteria") {
    ClusteringResult run;
    run.centers = testsupport::make_dataset({{0.0, 0.0}, {3.0, 4.0}}).points;
    run.assignments = {0, 0, 1, 1};
    run.sicd = 1.5;
    run.k = 2;
    run.trace = {{1, 10.0, 0.9}, {2, 5.0, 0.8}, {3, 5.0, 0.7}};
    const std::vector<int> labels = {0, 0, 1, 1};
    const RunMetrics m = compute_run_metrics(run, labels, 12.5, 42);
    CHECK(m.sicd == 1.5);
    CHECK(m.k == 2);
    CHECK(m.seed == 42);
    CHECK(m.wall_ms == 12.5);
    REQUIRE(m.error_rate_matching.has_value());
    CHECK(*m.error_rate_matching == doctest::Approx(0.0));
    REQUIRE(m.min_inter_cluster.has_value());
    CHECK(*m.min_inter_cluster == doctest::Approx(5.0));
    CHECK(m.convergence_iteration == 1);

    SUBCASE("unlabeled data leaves error rates absent") {
        const RunMetrics u = compute_run_metrics(run, std::nullopt, 1.0, 1);
        CHECK(!u.error_rate_matching.has_value());
        CHECK(!u.error_rate_purity.has_value());
    }
}
