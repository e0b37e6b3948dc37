#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "swarmcluster/bounds.hpp"
#include "swarmcluster/rng.hpp"

namespace swarmcluster {

using Objective = std::function<double(std::span<const double>)>;

enum class InertiaSchedule { exponential, linear };

/// What happens to a coordinate whose proposed move leaves the box:
/// revert          — put the coordinate back where it was, keep the velocity
/// revert_zero_vel — put it back and zero that velocity component
enum class BoundaryMode { revert, revert_zero_vel };

struct PsoParams {
    std::size_t swarm_size = 30;
    double c1 = 1.49445;
    double c2 = 1.49445;
    double w_max = 0.9;
    double w_min = 0.4;
    double v_max_factor = 0.5;  // velocity clamp as fraction of bound width
    std::size_t max_iters = 1000;
    std::size_t stall_window = 20;
    double stall_tol = 1e-6;
    InertiaSchedule inertia = InertiaSchedule::exponential;
    BoundaryMode boundary = BoundaryMode::revert;

    bool operator==(const PsoParams&) const = default;

    void validate() const {
        if (swarm_size < 2) throw std::invalid_argument("PsoParams: swarm_size must be >= 2");
        if (!(w_min > 0.0 && w_min <= w_max))
            throw std::invalid_argument("PsoParams: need 0 < w_min <= w_max");
        if (!(v_max_factor > 0.0 && v_max_factor <= 1.0))
            throw std::invalid_argument("PsoParams: need 0 < v_max_factor <= 1");
        if (max_iters < 1) throw std::invalid_argument("PsoParams: max_iters must be >= 1");
        if (stall_window < 1) throw std::invalid_argument("PsoParams: stall_window must be >= 1");
        if (!(c1 >= 0.0 && c2 >= 0.0))
            throw std::invalid_argument("PsoParams: c1, c2 must be >= 0");
        if (!(stall_tol >= 0.0)) throw std::invalid_argument("PsoParams: stall_tol must be >= 0");
    }
};

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> pbest_position;
    double pbest_fitness = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::infinity();  // at current position
};

struct SwarmState {
    std::vector<Particle> particles;
    std::vector<double> gbest_position;
    double gbest_fitness = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;
    Bounds bounds;
    Rng rng{0};
};

struct TraceRecord {
    std::size_t t = 0;       // completed-iterations counter, starts at 1
    double gbest_fitness = 0.0;
    std::optional<double> w; // inertia used during the iteration, when applicable
};

enum class StopReason { max_iters, stalled };

struct OptimizationResult {
    std::vector<double> best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    std::vector<TraceRecord> trace;
    std::size_t iterations_run = 0;
    StopReason stop_reason = StopReason::max_iters;
};

/// Inertia weight at iteration t of T. The exponential schedule
/// w_max * (w_min/w_max)^(t/T) hits both endpoints exactly.
inline double inertia_at(const PsoParams& params, std::size_t t, std::size_t T) {
    if (T < 1) throw std::invalid_argument("inertia_at: T must be >= 1");
    if (t > T) throw std::invalid_argument("inertia_at: t must be <= T");
    const double frac = static_cast<double>(t) / static_cast<double>(T);
    if (params.inertia == InertiaSchedule::linear)
        return params.w_max - (params.w_max - params.w_min) * frac;
    return params.w_max * std::pow(params.w_min / params.w_max, frac);
}

inline double velocity_limit(const Bounds& bounds, const PsoParams& params, std::size_t j) {
    return params.v_max_factor * bounds.width(j);
}

/// v' = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), with fresh per-dimension
/// uniforms r1, r2 in [0,1), then componentwise clamp to +-v_max.
inline std::vector<double> update_velocity(const Particle& p,
                                           const std::vector<double>& gbest_position, double w,
                                           const PsoParams& params, const Bounds& bounds,
                                           Rng& rng) {
    const std::size_t dim = p.position.size();
    if (gbest_position.size() != dim || p.velocity.size() != dim ||
        p.pbest_position.size() != dim || bounds.dim() != dim)
        throw std::invalid_argument("update_velocity: dimension mismatch");
    std::vector<double> v(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        double vj = w * p.velocity[j] + params.c1 * r1 * (p.pbest_position[j] - p.position[j]) +
                    params.c2 * r2 * (gbest_position[j] - p.position[j]);
        const double v_max = velocity_limit(bounds, params, j);
        if (vj > v_max) vj = v_max;
        if (vj < -v_max) vj = -v_max;
        v[j] = vj;
    }
    return v;
}

/// Boundary restriction: a coordinate that left the box goes back to its
/// pre-move value (position - velocity); in-bounds coordinates stay put.
/// The velocity is not touched. Requires the pre-move position to have been
/// inside the box. The revert is clamped because (x+v)-v can round one ulp
/// past a pre-move value sitting exactly on a bound.
inline std::vector<double> restrict_position(std::vector<double> position,
                                             const std::vector<double>& velocity,
                                             const Bounds& bounds) {
    if (position.size() != velocity.size() || position.size() != bounds.dim())
        throw std::invalid_argument("restrict_position: dimension mismatch");
    for (std::size_t j = 0; j < position.size(); ++j)
        if (position[j] < bounds.lower[j] || position[j] > bounds.upper[j])
            position[j] =
                std::clamp(position[j] - velocity[j], bounds.lower[j], bounds.upper[j]);
    return position;
}

namespace detail {

inline void check_finite_fitness(double fitness, std::size_t particle_index,
                                 const std::vector<double>& position) {
    if (std::isfinite(fitness)) return;
    std::ostringstream msg;
    msg << "objective returned non-finite value " << fitness << " for particle "
        << particle_index << " at position (";
    for (std::size_t j = 0; j < position.size(); ++j)
        msg << (j ? ", " : "") << position[j];
    msg << ")";
    throw std::runtime_error(msg.str());
}

}  // namespace detail

/// One synchronous swarm iteration. Randomness is drawn and positions are
/// moved first, particle by particle in index order; evaluations and the
/// pbest/gbest reductions follow in the same fixed order, so the result does
/// not depend on how evaluations are scheduled.
inline void step(SwarmState& state, const Objective& objective, const PsoParams& params) {
    const double w = inertia_at(params, state.iteration, params.max_iters);

    for (auto& p : state.particles) {
        std::vector<double> v =
            update_velocity(p, state.gbest_position, w, params, state.bounds, state.rng);
        std::vector<double> moved = p.position;
        for (std::size_t j = 0; j < moved.size(); ++j) moved[j] += v[j];
        std::vector<double> restricted = restrict_position(std::move(moved), v, state.bounds);
        if (params.boundary == BoundaryMode::revert_zero_vel)
            for (std::size_t j = 0; j < v.size(); ++j)
                if (restricted[j] != p.position[j] + v[j]) v[j] = 0.0;
        p.position = std::move(restricted);
        p.velocity = std::move(v);
    }

    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        auto& p = state.particles[i];
        p.fitness = objective(p.position);
        detail::check_finite_fitness(p.fitness, i, p.position);
    }

    for (auto& p : state.particles) {
        if (p.fitness < p.pbest_fitness) {
            p.pbest_fitness = p.fitness;
            p.pbest_position = p.position;
        }
    }
    for (const auto& p : state.particles) {
        if (p.pbest_fitness < state.gbest_fitness) {
            state.gbest_fitness = p.pbest_fitness;
            state.gbest_position = p.pbest_position;
        }
    }
    ++state.iteration;
}

/// Fresh swarm: positions uniform in the box, velocities uniform within the
/// clamp range, pbest/gbest from the initial evaluations.
inline SwarmState init_swarm(const Objective& objective, const Bounds& bounds,
                             const PsoParams& params, std::uint64_t seed) {
    bounds.validate();
    params.validate();
    SwarmState state;
    state.bounds = bounds;
    state.rng = Rng(seed);
    state.particles.resize(params.swarm_size);
    const std::size_t dim = bounds.dim();
    for (auto& p : state.particles) {
        p.position.resize(dim);
        p.velocity.resize(dim);
        for (std::size_t j = 0; j < dim; ++j)
            p.position[j] = state.rng.uniform(bounds.lower[j], bounds.upper[j]);
        for (std::size_t j = 0; j < dim; ++j) {
            const double v_max = velocity_limit(bounds, params, j);
            p.velocity[j] = state.rng.uniform(-v_max, v_max);
        }
    }
    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        auto& p = state.particles[i];
        p.fitness = objective(p.position);
        detail::check_finite_fitness(p.fitness, i, p.position);
        p.pbest_fitness = p.fitness;
        p.pbest_position = p.position;
    }
    for (const auto& p : state.particles) {
        if (p.pbest_fitness < state.gbest_fitness) {
            state.gbest_fitness = p.pbest_fitness;
            state.gbest_position = p.pbest_position;
        }
    }
    return state;
}

namespace detail {

// Stall rule: gbest improved by less than stall_tol across the last
// stall_window completed iterations. Needs stall_window+1 trace entries.
inline bool stalled(const std::vector<TraceRecord>& trace, const PsoParams& params) {
    if (trace.size() < params.stall_window + 1) return false;
    const double before = trace[trace.size() - 1 - params.stall_window].gbest_fitness;
    const double now = trace.back().gbest_fitness;
    return before - now < params.stall_tol;
}

}  // namespace detail

/// Run the bounded swarm search to max_iters or stall, whichever first.
inline OptimizationResult optimize(const Objective& objective, const Bounds& bounds,
                                   const PsoParams& params, std::uint64_t seed) {
    SwarmState state = init_swarm(objective, bounds, params, seed);
    OptimizationResult result;
    result.stop_reason = StopReason::max_iters;
    while (state.iteration < params.max_iters) {
        const double w = inertia_at(params, state.iteration, params.max_iters);
        step(state, objective, params);
        result.trace.push_back({state.iteration, state.gbest_fitness, w});
        if (detail::stalled(result.trace, params)) {
            result.stop_reason = StopReason::stalled;
            break;
        }
    }
    result.best_position = state.gbest_position;
    result.best_fitness = state.gbest_fitness;
    result.iterations_run = state.iteration;
    return result;
}

}  // namespace swarmcluster
