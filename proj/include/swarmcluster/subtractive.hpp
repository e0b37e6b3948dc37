#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmcluster/dataset.hpp"
#include "swarmcluster/matrix.hpp"

namespace swarmcluster {

/// Knobs for density-based center selection. Defaults follow the standard
/// squash-and-threshold scheme; ra wants per-dataset calibration (see the
/// sweep-ra harness command).
struct SubtractiveParams {
    double ra = 0.4;          // neighborhood radius, in normalized-feature units
    double rb_factor = 1.5;   // squash radius ratio rb/ra
    double eps_up = 0.5;      // accept when potential > eps_up * first potential
    double eps_down = 0.15;   // stop when potential < eps_down * first potential
    std::size_t k_max = 0;    // cap on accepted centers; 0 means n (no cap)

    // Denominator z of the (ra/z)^2 kernel width. 2 is the standard form;
    // kept configurable for experiments with other widths.
    double kernel_denominator = 2.0;

    bool operator==(const SubtractiveParams&) const = default;

    void validate() const {
        if (!(ra > 0.0)) throw std::invalid_argument("SubtractiveParams: ra must be > 0");
        if (!(rb_factor >= 1.0))
            throw std::invalid_argument("SubtractiveParams: rb_factor must be >= 1");
        if (!(eps_down > 0.0 && eps_down < eps_up && eps_up <= 1.0))
            throw std::invalid_argument(
                "SubtractiveParams: need 0 < eps_down < eps_up <= 1");
        if (!(kernel_denominator > 0.0))
            throw std::invalid_argument("SubtractiveParams: kernel_denominator must be > 0");
    }
};

enum class SelectionDecision { accepted, rejected, stopped };

struct SelectionLogEntry {
    std::size_t index;          // data point examined
    double potential;           // its potential at examination time
    SelectionDecision decision;
};

/// Output of the seeding stage: chosen centers (exact data rows), the
/// potential of the first pick, and the decision trail.
struct SeedingResult {
    Matrix centers;
    std::size_t k = 0;
    double first_potential = 0.0;
    std::vector<SelectionLogEntry> selection_log;
};

/// Density potential of every point: D_i = sum_j exp(-||x_i-x_j||^2 / (ra/z)^2).
/// The self term contributes 1, so 1 <= D_i <= n. O(n^2 d).
inline std::vector<double> compute_potentials(const Dataset& ds, double ra,
                                              double kernel_denominator = 2.0) {
    if (!(ra > 0.0)) throw std::invalid_argument("compute_potentials: ra must be > 0");
    const std::size_t n = ds.size();
    const double denom = ra / kernel_denominator;
    const double inv_width = 1.0 / (denom * denom);
    std::vector<double> potentials(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            sum += std::exp(-squared_distance(ds.points.row(i), ds.points.row(j)) * inv_width);
        potentials[i] = sum;
    }
    return potentials;
}

/// Squash potential around an accepted center:
/// D_i <- D_i - D_center * exp(-||x_i-x_center||^2 / (rb/z)^2).
/// The center's own potential drops to zero; entries may go negative.
inline std::vector<double> revise_potentials(std::vector<double> potentials,
                                             std::size_t center_index, double center_potential,
                                             const Dataset& ds, double rb,
                                             double kernel_denominator = 2.0) {
    if (!(rb > 0.0)) throw std::invalid_argument("revise_potentials: rb must be > 0");
    if (center_index >= ds.size())
        throw std::invalid_argument("revise_potentials: center index out of range");
    const double denom = rb / kernel_denominator;
    const double inv_width = 1.0 / (denom * denom);
    const auto center = ds.points.row(center_index);
    for (std::size_t i = 0; i < potentials.size(); ++i)
        potentials[i] -=
            center_potential * std::exp(-squared_distance(ds.points.row(i), center) * inv_width);
    return potentials;
}

namespace detail {

// Argmax with ties broken by lowest index.
inline std::size_t argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace detail

/// Pick cluster centers by iterated peak selection on a normalized dataset.
///
/// The highest-potential point is always accepted. Each later candidate
/// (the current argmax) is accepted outright above eps_up * first potential,
/// final below eps_down * first potential, and in between accepted only when
/// d_min/ra + D_c/first >= 1 (d_min = distance to the nearest accepted
/// center); otherwise its potential is zeroed and the search continues.
/// After every acceptance the potentials are squashed around the new center
/// with radius rb = rb_factor * ra. Always returns at least one center.
inline SeedingResult select_centers(const Dataset& ds, const SubtractiveParams& params) {
    params.validate();
    ds.validate();
    const std::size_t n = ds.size();
    const std::size_t cap = params.k_max == 0 ? n : std::min(params.k_max, n);
    const double rb = params.rb_factor * params.ra;

    std::vector<double> potentials =
        compute_potentials(ds, params.ra, params.kernel_denominator);

    SeedingResult result;
    std::vector<std::size_t> accepted;

    while (true) {
        const std::size_t candidate = detail::argmax(potentials);
        const double potential = potentials[candidate];

        if (accepted.empty()) {
            result.first_potential = potential;
        } else if (potential <= 0.0) {
            break;  // potentials exhausted
        } else if (potential > params.eps_up * result.first_potential) {
            // accepted outright
        } else if (potential < params.eps_down * result.first_potential) {
            result.selection_log.push_back({candidate, potential, SelectionDecision::stopped});
            break;
        } else {
            double d_min = std::numeric_limits<double>::infinity();
            for (std::size_t c : accepted)
                d_min = std::min(d_min, distance(ds.points.row(candidate), ds.points.row(c)));
            if (d_min / params.ra + potential / result.first_potential < 1.0) {
                result.selection_log.push_back(
                    {candidate, potential, SelectionDecision::rejected});
                potentials[candidate] = 0.0;
                continue;
            }
        }

        accepted.push_back(candidate);
        result.selection_log.push_back({candidate, potential, SelectionDecision::accepted});
        if (accepted.size() >= cap) break;
        potentials = revise_potentials(std::move(potentials), candidate, potential, ds, rb,
                                       params.kernel_denominator);
        if (potentials[detail::argmax(potentials)] <= 0.0) break;
    }

    result.k = accepted.size();
    result.centers = Matrix(result.k, ds.dim());
    for (std::size_t r = 0; r < result.k; ++r)
        for (std::size_t j = 0; j < ds.dim(); ++j)
            result.centers(r, j) = ds.points(accepted[r], j);
    return result;
}

}  // namespace swarmcluster
