#include "rphd/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rphd {

double total_mass(std::span<const Particle> particles) {
    double sum = 0.0;
    double carry = 0.0;
    for (const Particle& p : particles) {
        const double v = p.weight;
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

void settle_mass(std::span<Particle> particles, double target) {
    if (particles.empty()) return;
    auto largest = std::max_element(particles.begin(), particles.end(),
                                    [](const Particle& a, const Particle& b) { return a.weight < b.weight; });
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double current = total_mass(particles);
        if (current == target) return;
        double adjusted = largest->weight + (target - current);
        if (adjusted == largest->weight)
            adjusted = std::nextafter(largest->weight, target > current ? std::numeric_limits<double>::infinity() : 0.0);
        largest->weight = std::max(adjusted, 0.0);
    }

    // Bisection on the largest weight between a value whose total falls short
    // of the target and one whose total exceeds it.
    const auto total_with = [&](double w) {
        largest->weight = w;
        return total_mass(particles);
    };
    double lo = largest->weight;
    double hi = largest->weight;
    double step = std::max(std::abs(target - total_with(lo)), std::numeric_limits<double>::denorm_min());
    while (lo > 0.0 && total_with(lo) > target) {
        lo = std::max(lo - step, 0.0);
        step *= 2.0;
    }
    step = std::max(std::abs(target - total_with(hi)), std::numeric_limits<double>::denorm_min());
    while (total_with(hi) < target) {
        hi += step;
        step *= 2.0;
    }
    while (true) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) break;
        const double t = total_with(mid);
        if (t == target) return;
        (t < target ? lo : hi) = mid;
    }
    const double t_lo = total_with(lo);
    const double t_hi = total_with(hi);
    largest->weight = std::abs(t_hi - target) < std::abs(t_lo - target) ? hi : lo;
}

long long round_half_up(double value) {
    const double base = std::floor(value);
    return static_cast<long long>(base) + (value - base >= 0.5 ? 1 : 0);
}

}  // namespace rphd
