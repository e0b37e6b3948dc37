#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace swarmcluster {

/// Axis-aligned search box. lower[j] <= upper[j] for every dimension.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return lower.size(); }

    void validate() const {
        if (lower.size() != upper.size())
            throw std::invalid_argument("Bounds: lower/upper size mismatch");
        if (lower.empty())
            throw std::invalid_argument("Bounds: empty");
        for (std::size_t j = 0; j < lower.size(); ++j)
            if (!(lower[j] <= upper[j]))
                throw std::invalid_argument("Bounds: lower > upper in dimension " +
                                            std::to_string(j));
    }

    bool contains(const std::vector<double>& x) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] < lower[j] || x[j] > upper[j]) return false;
        return true;
    }

    double width(std::size_t j) const { return upper[j] - lower[j]; }

    /// The same box repeated `times` over, for searches in stacked spaces.
    Bounds tiled(std::size_t times) const {
        Bounds out;
        out.lower.reserve(dim() * times);
        out.upper.reserve(dim() * times);
        for (std::size_t t = 0; t < times; ++t) {
            out.lower.insert(out.lower.end(), lower.begin(), lower.end());
            out.upper.insert(out.upper.end(), upper.begin(), upper.end());
        }
        return out;
    }
};

}  // namespace swarmcluster
