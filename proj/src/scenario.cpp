#include "rphd/scenario.hpp"

#include "rphd/table_format.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

namespace rphd::scenario {

void ScenarioConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("scenario.steps must be >= 1");
    for (const TargetSpec& t : targets) {
        if (!(1 <= t.birth_step && t.birth_step <= t.death_step && t.death_step <= steps))
            throw std::invalid_argument("scenario target window must satisfy 1 <= birth <= death <= steps");
        if (t.initial && !is_finite(*t.initial)) throw std::invalid_argument("scenario target initial state must be finite");
    }
}

ScenarioConfig four_target_preset() {
    ScenarioConfig config;
    config.steps = 40;
    config.targets = {{1, 40, std::nullopt}, {1, 28, std::nullopt}, {8, 40, std::nullopt}, {15, 40, std::nullopt}};
    return config;
}

std::vector<StateVector> GroundTruth::states_at(int step) const {
    std::vector<StateVector> out;
    if (step < 1 || step > static_cast<int>(steps.size())) return out;
    for (const TruthRecord& r : steps[static_cast<std::size_t>(step - 1)]) out.push_back(r.state);
    return out;
}

std::uint64_t ScanData::hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const Scan& scan : scans) {
        const std::uint64_t count = scan.size();
        feed(&count, sizeof count);
        for (const Measurement& z : scan) feed(z.data(), sizeof(double) * z.size());
    }
    return h;
}

GroundTruth generate_truth(const ScenarioConfig& config, const models::ModelSet& models, Rng& rng) {
    config.validate();
    GroundTruth truth;
    truth.steps.resize(static_cast<std::size_t>(config.steps));
    for (std::size_t id = 0; id < config.targets.size(); ++id) {
        const TargetSpec& t = config.targets[id];
        // the initial draw happens for every target so that fixing one does not shift the others
        StateVector state = models::birth_sample(models.birth, rng);
        if (t.initial) state = *t.initial;
        for (int k = t.birth_step; k <= t.death_step; ++k) {
            if (k > t.birth_step) state = models::propagate(state, models.motion, {}, rng);
            truth.steps[static_cast<std::size_t>(k - 1)].push_back({static_cast<int>(id), state});
        }
    }
    return truth;
}

Scan generate_scan(std::span<const TruthRecord> alive, const models::ModelSet& models, ScenarioStreams& streams) {
    Scan scan;
    for (const TruthRecord& r : alive)
        if (streams.detection.bernoulli(models.detection.p_detect))
            scan.push_back(models::measure(r.state, models.measurement, streams.noise));
    auto clutter = models::clutter_sample(models.clutter, streams.clutter);
    scan.insert(scan.end(), clutter.begin(), clutter.end());
    std::shuffle(scan.begin(), scan.end(), streams.shuffle.engine());
    return scan;
}

ScanData generate_scans(const GroundTruth& truth, const models::ModelSet& models, ScenarioStreams& streams) {
    ScanData data;
    data.scans.reserve(truth.steps.size());
    for (const auto& alive : truth.steps) data.scans.push_back(generate_scan(alive, models, streams));
    return data;
}

void write_truth(std::ostream& os, const GroundTruth& truth) {
    os << "step\tid\tpx\tvx\tpy\tvy\n";
    for (std::size_t k = 0; k < truth.steps.size(); ++k) {
        for (const TruthRecord& r : truth.steps[k]) {
            os << (k + 1) << '\t' << r.id;
            for (double v : r.state) os << '\t' << format_real(v);
            os << '\n';
        }
    }
}

void write_scans(std::ostream& os, const ScanData& scans) {
    os << "step\tzx\tzy\n";
    for (std::size_t k = 0; k < scans.scans.size(); ++k)
        for (const Measurement& z : scans.scans[k])
            os << (k + 1) << '\t' << format_real(z[0]) << '\t' << format_real(z[1]) << '\n';
}

}  // namespace rphd::scenario
