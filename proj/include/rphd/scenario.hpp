#pragma once

#include "rphd/models.hpp"
#include "rphd/random.hpp"
#include "rphd/types.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace rphd::scenario {

/// One scripted target: alive on steps [birth_step, death_step]. The initial
/// state is drawn from the birth density unless fixed.
struct TargetSpec {
    int birth_step = 1;
    int death_step = 40;
    std::optional<StateVector> initial;
};

struct ScenarioConfig {
    int steps = 40;
    std::vector<TargetSpec> targets;

    void validate() const;
};

/// Four targets born at steps 1, 1, 8, 15 and dying at 40, 28, 40, 40.
ScenarioConfig four_target_preset();

struct TruthRecord {
    int id = 0;
    StateVector state{};
};

/// Alive targets per step; `steps[k - 1]` holds step k.
struct GroundTruth {
    std::vector<std::vector<TruthRecord>> steps;

    [[nodiscard]] std::vector<StateVector> states_at(int step) const;
};

using Scan = std::vector<Measurement>;

/// Unlabelled measurements per step; `scans[k - 1]` holds step k.
struct ScanData {
    std::vector<Scan> scans;

    /// FNV-1a over the raw bytes of every measurement, in order.
    [[nodiscard]] std::uint64_t hash() const noexcept;
};

struct ScenarioStreams {
    Rng truth;
    Rng detection;
    Rng noise;
    Rng clutter;
    Rng shuffle;

    explicit ScenarioStreams(std::uint64_t base)
        : truth(base, Stream::Truth),
          detection(base, Stream::Detection),
          noise(base, Stream::MeasurementNoise),
          clutter(base, Stream::Clutter),
          shuffle(base, Stream::Shuffle) {}
};

/// Scripted births and deaths; motion per the model's dynamics with process noise.
GroundTruth generate_truth(const ScenarioConfig& config, const models::ModelSet& models, Rng& rng);

/// Detections (probability p_D, Gaussian noise) plus Poisson clutter, shuffled.
Scan generate_scan(std::span<const TruthRecord> alive, const models::ModelSet& models, ScenarioStreams& streams);

ScanData generate_scans(const GroundTruth& truth, const models::ModelSet& models, ScenarioStreams& streams);

/// Column text: `step id px vx py vy`.
void write_truth(std::ostream& os, const GroundTruth& truth);
/// Column text: `step zx zy`.
void write_scans(std::ostream& os, const ScanData& scans);

}  // namespace rphd::scenario
