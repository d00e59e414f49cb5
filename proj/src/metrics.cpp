#include "rphd/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace rphd::metrics {

void OspaParams::validate() const {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw std::invalid_argument("ospa cutoff must be positive");
    if (!(order >= 1.0) || !std::isfinite(order)) throw std::invalid_argument("ospa order must be >= 1");
}

std::vector<std::size_t> solve_assignment(std::size_t rows, std::size_t cols, std::span<const double> cost) {
    if (rows > cols) throw std::invalid_argument("solve_assignment: rows must not exceed cols");
    if (cost.size() != rows * cols) throw std::invalid_argument("solve_assignment: cost size mismatch");
    if (rows == 0) return {};

    // Shortest augmenting path with row/column potentials; 1-based, column 0 is a sentinel.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
    std::vector<std::size_t> owner(cols + 1, 0), way(cols + 1, 0);
    for (std::size_t r = 1; r <= rows; ++r) {
        owner[0] = r;
        std::size_t col0 = 0;
        std::vector<double> minv(cols + 1, kInf);
        std::vector<bool> used(cols + 1, false);
        do {
            used[col0] = true;
            const std::size_t row0 = owner[col0];
            double delta = kInf;
            std::size_t col1 = 0;
            for (std::size_t c = 1; c <= cols; ++c) {
                if (used[c]) continue;
                const double reduced = cost[(row0 - 1) * cols + (c - 1)] - u[row0] - v[c];
                if (reduced < minv[c]) {
                    minv[c] = reduced;
                    way[c] = col0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for (std::size_t c = 0; c <= cols; ++c) {
                if (used[c]) {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
        } while (owner[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
        } while (col0 != 0);
    }

    std::vector<std::size_t> assignment(rows, 0);
    for (std::size_t c = 1; c <= cols; ++c)
        if (owner[c] != 0) assignment[owner[c] - 1] = c - 1;
    return assignment;
}

namespace {

// Orientation with small <= large; transposed when |X| > |Y|.
struct Oriented {
    std::size_t small;
    std::size_t large;
    bool transposed;
};

Oriented orient(std::size_t m, std::size_t n) {
    return m <= n ? Oriented{m, n, false} : Oriented{n, m, true};
}

double cut_cost(double distance, const OspaParams& params) {
    return std::pow(std::min(distance, params.cutoff), params.order);
}

}  // namespace

double ospa_from_distances(std::size_t m, std::size_t n, std::span<const double> distances, const OspaParams& params) {
    params.validate();
    if (distances.size() != m * n) throw std::invalid_argument("ospa: distance matrix size mismatch");
    if (m == 0 && n == 0) return 0.0;
    if (m == 0 || n == 0) return params.cutoff;

    const Oriented o = orient(m, n);
    std::vector<double> cost(o.small * o.large);
    for (std::size_t i = 0; i < o.small; ++i)
        for (std::size_t j = 0; j < o.large; ++j)
            cost[i * o.large + j] = cut_cost(o.transposed ? distances[j * n + i] : distances[i * n + j], params);

    const auto assignment = solve_assignment(o.small, o.large, cost);
    // summed in sorted order so that swapping equal-sized arguments is bitwise symmetric
    std::vector<double> chosen(o.small);
    for (std::size_t i = 0; i < o.small; ++i) chosen[i] = cost[i * o.large + assignment[i]];
    std::sort(chosen.begin(), chosen.end());
    double total = 0.0;
    for (double c : chosen) total += c;
    total += std::pow(params.cutoff, params.order) * static_cast<double>(o.large - o.small);
    return std::pow(total / static_cast<double>(o.large), 1.0 / params.order);
}

double ospa_bruteforce_from_distances(std::size_t m, std::size_t n, std::span<const double> distances,
                                      const OspaParams& params) {
    params.validate();
    if (std::max(m, n) > 8) throw std::invalid_argument("ospa_bruteforce: at most 8 elements per set");
    if (distances.size() != m * n) throw std::invalid_argument("ospa: distance matrix size mismatch");
    if (m == 0 && n == 0) return 0.0;
    if (m == 0 || n == 0) return params.cutoff;

    const Oriented o = orient(m, n);
    auto dist = [&](std::size_t i, std::size_t j) {
        return o.transposed ? distances[j * n + i] : distances[i * n + j];
    };
    // Every permutation of the larger set; its first `small` entries form an injection.
    std::vector<std::size_t> perm(o.large);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < o.small; ++i) s += cut_cost(dist(i, perm[i]), params);
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double total = best + std::pow(params.cutoff, params.order) * static_cast<double>(o.large - o.small);
    return std::pow(total / static_cast<double>(o.large), 1.0 / params.order);
}

std::vector<Position> positions(std::span<const StateVector> states) {
    std::vector<Position> out;
    out.reserve(states.size());
    for (const StateVector& s : states) out.push_back({s[kPx], s[kPy]});
    return out;
}

double gain_ratio(double mean_ospa_basic, double mean_ospa_roughening) {
    if (!(mean_ospa_basic > 0.0) || !std::isfinite(mean_ospa_basic))
        throw std::invalid_argument("gain_ratio: basic mean OSPA must be positive");
    return (mean_ospa_basic - mean_ospa_roughening) / mean_ospa_basic;
}

}  // namespace rphd::metrics
