#include "rphd/table_format.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace rphd {

namespace {

std::string format_with(double value, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

double parse_real(const std::string& token) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw std::invalid_argument("particle snapshot: bad number '" + token + "'");
    return v;
}

}  // namespace

std::string format_real(double value) { return format_with(value, 6); }

void write_particles(std::ostream& os, const ParticleSet& set) {
    os << "step\tpx\tvx\tpy\tvy\tweight\n";
    for (const Particle& p : set.particles) {
        os << set.step;
        for (double v : p.state) os << '\t' << format_with(v, 17);
        os << '\t' << format_with(p.weight, 17) << '\n';
    }
}

ParticleSet read_particles(std::istream& is) {
    ParticleSet set;
    std::string line;
    if (!std::getline(is, line)) return set;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        if (!(row >> token)) continue;
        const int step = static_cast<int>(parse_real(token));
        if (first) {
            set.step = step;
            first = false;
        } else if (step != set.step) {
            throw std::invalid_argument("particle snapshot: mixed step indices");
        }
        Particle p;
        for (double& v : p.state) {
            if (!(row >> token)) throw std::invalid_argument("particle snapshot: short row");
            v = parse_real(token);
        }
        if (!(row >> token)) throw std::invalid_argument("particle snapshot: short row");
        p.weight = parse_real(token);
        set.particles.push_back(p);
    }
    set.survivor_count = set.particles.size();
    return set;
}

}  // namespace rphd
