#pragma once

#include "rphd/types.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace rphd::metrics {

struct OspaParams {
    double cutoff = 100.0;  ///< c
    double order = 2.0;     ///< p

    void validate() const;
};

/// Minimum-cost assignment of every row of a rows x cols cost matrix
/// (rows <= cols, row-major) to a distinct column. Returns the column chosen
/// for each row. Exact, O(rows^2 * cols).
std::vector<std::size_t> solve_assignment(std::size_t rows, std::size_t cols, std::span<const double> cost);

/// OSPA from a precomputed |X| x |Y| matrix of base distances (before cutoff).
double ospa_from_distances(std::size_t m, std::size_t n, std::span<const double> distances, const OspaParams& params);

/// Exhaustive-enumeration OSPA, for testing. Throws std::invalid_argument if
/// max(m, n) exceeds 8.
double ospa_bruteforce_from_distances(std::size_t m, std::size_t n, std::span<const double> distances,
                                      const OspaParams& params);

namespace detail {

template <std::size_t N>
std::vector<double> distance_matrix(std::span<const std::array<double, N>> X, std::span<const std::array<double, N>> Y) {
    std::vector<double> out(X.size() * Y.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t j = 0; j < Y.size(); ++j) {
            double s = 0.0;
            for (std::size_t d = 0; d < N; ++d) {
                if (!std::isfinite(X[i][d]) || !std::isfinite(Y[j][d]))
                    throw std::invalid_argument("ospa: non-finite element");
                s += (X[i][d] - Y[j][d]) * (X[i][d] - Y[j][d]);
            }
            out[i * Y.size() + j] = std::sqrt(s);
        }
    }
    return out;
}

}  // namespace detail

/// Optimal sub-pattern assignment distance between two finite point sets.
template <std::size_t N>
double ospa(std::span<const std::array<double, N>> X, std::span<const std::array<double, N>> Y,
            const OspaParams& params) {
    return ospa_from_distances(X.size(), Y.size(), detail::distance_matrix<N>(X, Y), params);
}

template <std::size_t N>
double ospa(const std::vector<std::array<double, N>>& X, const std::vector<std::array<double, N>>& Y,
            const OspaParams& params) {
    return ospa<N>(std::span<const std::array<double, N>>(X), std::span<const std::array<double, N>>(Y), params);
}

template <std::size_t N>
double ospa_bruteforce(const std::vector<std::array<double, N>>& X, const std::vector<std::array<double, N>>& Y,
                       const OspaParams& params) {
    return ospa_bruteforce_from_distances(
        X.size(), Y.size(),
        detail::distance_matrix<N>(std::span<const std::array<double, N>>(X), std::span<const std::array<double, N>>(Y)),
        params);
}

using Position = std::array<double, 2>;

/// (px, py) of each state.
std::vector<Position> positions(std::span<const StateVector> states);

/// Fractional OSPA reduction of a roughened filter relative to the basic one.
double gain_ratio(double mean_ospa_basic, double mean_ospa_roughening);

}  // namespace rphd::metrics
