#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swarmcluster/dataset.hpp"
#include "swarmcluster/matrix.hpp"
#include "swarmcluster/pso.hpp"
#include "swarmcluster/subtractive.hpp"

namespace swarmcluster {

/// K cluster centers. Flattens to a length-K*d position vector (row-major)
/// and back without loss, which is the whole particle encoding.
struct CentroidSet {
    Matrix centers;

    CentroidSet() = default;
    explicit CentroidSet(Matrix m) : centers(std::move(m)) {}

    std::size_t k() const { return centers.rows; }
    std::size_t dim() const { return centers.cols; }

    std::vector<double> encode() const { return centers.data; }

    static CentroidSet decode(std::span<const double> position, std::size_t k, std::size_t d) {
        if (position.size() != k * d)
            throw std::invalid_argument("CentroidSet::decode: position length != k*d");
        Matrix m(k, d);
        m.data.assign(position.begin(), position.end());
        return CentroidSet(std::move(m));
    }
};

struct ClusteringParams {
    std::optional<std::size_t> k;  // absent: take k from subtractive seeding
    PsoParams pso;
    bool lloyd_refine = true;
    bool refine_gbest_only = false;  // refine just the best particle's pbest
    double seed_fraction = 0.0;      // fraction of swarm started at the seed centers;
                                     // 0 still seeds a single particle
    SubtractiveParams subtractive;
};

struct ClusteringResult {
    Matrix centers;                // in the feature units of the input dataset
    std::vector<int> assignments;  // nearest-center id per point, ties to lowest index
    double sicd = 0.0;
    std::vector<TraceRecord> trace;
    std::size_t k = 0;
    std::size_t iterations_run = 0;
    std::optional<SeedingResult> seed_info;
};

/// Map every point to its nearest center (Euclidean, ties to lowest index).
inline std::vector<int> assign_points(const Dataset& ds, const CentroidSet& centers) {
    if (centers.dim() != ds.dim())
        throw std::invalid_argument("assign_points: dimension mismatch");
    if (centers.k() == 0) throw std::invalid_argument("assign_points: no centers");
    std::vector<int> out(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::size_t best = 0;
        double best_d = squared_distance(ds.points.row(i), centers.centers.row(0));
        for (std::size_t j = 1; j < centers.k(); ++j) {
            const double d = squared_distance(ds.points.row(i), centers.centers.row(j));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        out[i] = static_cast<int>(best);
    }
    return out;
}

namespace detail {

// SICD of a flattened center set; avoids materializing a CentroidSet in the
// inner PSO loop.
inline double sicd_flat(const Dataset& ds, std::span<const double> flat, std::size_t k) {
    const std::size_t d = ds.dim();
    double total = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto point = ds.points.row(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j)
            best = std::min(best, squared_distance(point, flat.subspan(j * d, d)));
        total += std::sqrt(best);
    }
    return total;
}

}  // namespace detail

/// Sum over points of the (plain, not squared) Euclidean distance to the
/// nearest center — the clustering fitness.
inline double sicd_fitness(const Dataset& ds, const CentroidSet& centers) {
    if (centers.dim() != ds.dim())
        throw std::invalid_argument("sicd_fitness: dimension mismatch");
    if (centers.k() == 0) throw std::invalid_argument("sicd_fitness: no centers");
    return detail::sicd_flat(ds, centers.centers.data, centers.k());
}

/// One assign-then-recompute-means iteration. A center that attracts no
/// points keeps its old value, so k never shrinks.
inline CentroidSet lloyd_step(const Dataset& ds, const CentroidSet& centers) {
    const std::vector<int> assignment = assign_points(ds, centers);
    const std::size_t k = centers.k(), d = centers.dim();
    Matrix sums(k, d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto j = static_cast<std::size_t>(assignment[i]);
        ++counts[j];
        for (std::size_t c = 0; c < d; ++c) sums(j, c) += ds.points(i, c);
    }
    Matrix next(k, d);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < d; ++c)
            next(j, c) = counts[j] ? sums(j, c) / static_cast<double>(counts[j])
                                   : centers.centers(j, c);
    return CentroidSet(std::move(next));
}

namespace detail {

inline ClusteringResult finish_result(const Dataset& ds, CentroidSet centers,
                                      std::vector<TraceRecord> trace,
                                      std::size_t iterations_run) {
    ClusteringResult result;
    result.k = centers.k();
    result.assignments = assign_points(ds, centers);
    result.sicd = sicd_fitness(ds, centers);
    result.centers = std::move(centers.centers);
    result.trace = std::move(trace);
    result.iterations_run = iterations_run;
    return result;
}

}  // namespace detail

/// Lloyd's algorithm from k distinct data rows sampled uniformly. Stops when
/// the largest center displacement drops below tol or at max_iters. The
/// trace records the best SICD seen so far, one entry per iteration.
inline ClusteringResult kmeans(const Dataset& ds, std::size_t k, std::uint64_t seed,
                               std::size_t max_iters = 100, double tol = 1e-6) {
    ds.validate();
    if (k < 1 || k > ds.size())
        throw std::invalid_argument("kmeans: need 1 <= k <= n");

    // Partial Fisher-Yates for k distinct row indices.
    Rng rng(seed);
    std::vector<std::size_t> indices(ds.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(indices.size() - i);
        std::swap(indices[i], indices[j]);
    }

    Matrix init(k, ds.dim());
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < ds.dim(); ++c) init(r, c) = ds.points(indices[r], c);
    CentroidSet centers(std::move(init));

    std::vector<TraceRecord> trace;
    double best_sicd = sicd_fitness(ds, centers);
    std::size_t t = 0;
    while (t < max_iters) {
        CentroidSet next = lloyd_step(ds, centers);
        double moved = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            moved = std::max(moved, distance(centers.centers.row(j), next.centers.row(j)));
        centers = std::move(next);
        ++t;
        best_sicd = std::min(best_sicd, sicd_fitness(ds, centers));
        trace.push_back({t, best_sicd, std::nullopt});
        if (moved < tol) break;
    }
    return detail::finish_result(ds, std::move(centers), std::move(trace), t);
}

/// PSO over flattened center sets. The search box is the per-dimension data
/// range replicated k times; fitness is the SICD of the decoded centers.
/// When init_centers is given, a deterministic handful of particles (one by
/// default) starts there instead of at random positions. With lloyd_refine
/// on, every particle gets one Lloyd step per iteration and keeps the
/// refined position only when it strictly improves its fitness.
inline ClusteringResult pso_cluster(const Dataset& ds, std::size_t k,
                                    const ClusteringParams& params,
                                    const std::optional<CentroidSet>& init_centers,
                                    std::uint64_t seed) {
    ds.validate();
    if (k < 1) throw std::invalid_argument("pso_cluster: k must be >= 1");
    if (init_centers && init_centers->k() != k)
        throw std::invalid_argument("pso_cluster: init_centers k mismatch");
    if (init_centers && init_centers->dim() != ds.dim())
        throw std::invalid_argument("pso_cluster: init_centers dimension mismatch");

    const std::size_t d = ds.dim();
    const Bounds space = dataset_bounds(ds).tiled(k);
    const Objective objective = [&ds, k](std::span<const double> flat) {
        return detail::sicd_flat(ds, flat, k);
    };

    SwarmState state = init_swarm(objective, space, params.pso, seed);

    if (init_centers) {
        std::size_t n_seeded = 1;
        if (params.seed_fraction > 0.0)
            n_seeded = std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::llround(params.seed_fraction *
                                    static_cast<double>(params.pso.swarm_size))));
        n_seeded = std::min(n_seeded, state.particles.size());
        const std::vector<double> seeded = init_centers->encode();
        for (std::size_t i = 0; i < n_seeded; ++i) {
            auto& p = state.particles[i];
            p.position = seeded;
            p.fitness = objective(p.position);
            p.pbest_position = p.position;
            p.pbest_fitness = p.fitness;
        }
        state.gbest_fitness = std::numeric_limits<double>::infinity();
        for (const auto& p : state.particles) {
            if (p.pbest_fitness < state.gbest_fitness) {
                state.gbest_fitness = p.pbest_fitness;
                state.gbest_position = p.pbest_position;
            }
        }
    }

    auto refine_particle = [&](Particle& p) {
        const CentroidSet refined =
            lloyd_step(ds, CentroidSet::decode(p.position, k, d));
        const double refined_fitness = sicd_fitness(ds, refined);
        if (refined_fitness < p.fitness) {  // greedy acceptance
            p.position = refined.encode();
            p.fitness = refined_fitness;
            if (refined_fitness < p.pbest_fitness) {
                p.pbest_fitness = refined_fitness;
                p.pbest_position = p.position;
            }
        }
    };

    std::vector<TraceRecord> trace;
    while (state.iteration < params.pso.max_iters) {
        const double w = inertia_at(params.pso, state.iteration, params.pso.max_iters);
        step(state, objective, params.pso);

        if (params.lloyd_refine) {
            if (params.refine_gbest_only) {
                for (auto& p : state.particles) {
                    if (p.pbest_fitness == state.gbest_fitness) {
                        const CentroidSet refined =
                            lloyd_step(ds, CentroidSet::decode(p.pbest_position, k, d));
                        const double f = sicd_fitness(ds, refined);
                        if (f < p.pbest_fitness) {
                            p.pbest_position = refined.encode();
                            p.pbest_fitness = f;
                        }
                        break;
                    }
                }
            } else {
                for (auto& p : state.particles) refine_particle(p);
            }
            for (const auto& p : state.particles) {
                if (p.pbest_fitness < state.gbest_fitness) {
                    state.gbest_fitness = p.pbest_fitness;
                    state.gbest_position = p.pbest_position;
                }
            }
        }

        trace.push_back({state.iteration, state.gbest_fitness, w});
        if (detail::stalled(trace, params.pso)) break;
    }

    CentroidSet best = CentroidSet::decode(state.gbest_position, k, d);
    return detail::finish_result(ds, std::move(best), std::move(trace), state.iteration);
}

/// The full hybrid pipeline: min-max normalize, seed k and centers by
/// subtractive clustering, refine with the bounded PSO in normalized space,
/// then map the winning centers back to original units and recompute
/// assignments and SICD there.
inline ClusteringResult sc_br_apso(const Dataset& ds, const ClusteringParams& params,
                                   std::uint64_t seed) {
    ds.validate();
    if (params.k)
        throw std::invalid_argument("sc_br_apso: k is determined by seeding, not fixed");

    auto [normalized, norm_params] = min_max_normalize(ds);
    SeedingResult seeding = select_centers(normalized, params.subtractive);

    ClusteringResult pso_result =
        pso_cluster(normalized, seeding.k, params, CentroidSet(seeding.centers), seed);

    CentroidSet original_units(denormalize_centers(pso_result.centers, norm_params));
    ClusteringResult result = detail::finish_result(
        ds, std::move(original_units), std::move(pso_result.trace), pso_result.iterations_run);
    result.seed_info = std::move(seeding);
    return result;
}

}  // namespace swarmcluster
