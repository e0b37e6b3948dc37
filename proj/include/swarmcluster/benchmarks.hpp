#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swarmcluster/bounds.hpp"
#include "swarmcluster/pso.hpp"

namespace swarmcluster {

/// A standard test objective with its canonical search box.
struct BenchmarkFunction {
    std::string name;
    Objective objective;
    Bounds bounds;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// The usual suspects for optimizer validation. All have a global minimum
/// of 0 (at the origin, except rosenbrock at all-ones).
inline BenchmarkFunction benchmark_objective(const std::string& name, std::size_t dim) {
    if (dim < 1) throw std::invalid_argument("benchmark_objective: dim must be >= 1");

    auto boxed = [dim](double half_width) {
        Bounds b;
        b.lower.assign(dim, -half_width);
        b.upper.assign(dim, half_width);
        return b;
    };

    if (name == "sphere") {
        return {name,
                [](std::span<const double> x) {
                    double s = 0.0;
                    for (double v : x) s += v * v;
                    return s;
                },
                boxed(5.12)};
    }
    if (name == "rosenbrock") {
        return {name,
                [](std::span<const double> x) {
                    double s = 0.0;
                    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                        const double a = x[i + 1] - x[i] * x[i];
                        const double b = 1.0 - x[i];
                        s += 100.0 * a * a + b * b;
                    }
                    return s;
                },
                boxed(2.048)};
    }
    if (name == "rastrigin") {
        return {name,
                [](std::span<const double> x) {
                    double s = 10.0 * static_cast<double>(x.size());
                    for (double v : x) s += v * v - 10.0 * std::cos(kTwoPi * v);
                    return s;
                },
                boxed(5.12)};
    }
    if (name == "griewank") {
        return {name,
                [](std::span<const double> x) {
                    double sum = 0.0, prod = 1.0;
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        sum += x[i] * x[i] / 4000.0;
                        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
                    }
                    return 1.0 + sum - prod;
                },
                boxed(600.0)};
    }
    if (name == "ackley") {
        return {name,
                [](std::span<const double> x) {
                    const double n = static_cast<double>(x.size());
                    double sum_sq = 0.0, sum_cos = 0.0;
                    for (double v : x) {
                        sum_sq += v * v;
                        sum_cos += std::cos(kTwoPi * v);
                    }
                    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / n)) -
                           std::exp(sum_cos / n) + 20.0 + std::numbers::e;
                },
                boxed(32.768)};
    }
    throw std::invalid_argument("benchmark_objective: unknown function '" + name + "'");
}

}  // namespace swarmcluster
