#include <gtest/gtest.h>

#include "rphd/random.hpp"
#include "rphd/scenario.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace rphd;
using namespace rphd::scenario;

namespace {

models::ModelSet noise_free() {
    models::ModelSet m;
    m.motion.sigma_v1 = 0.0;
    m.motion.sigma_v2 = 0.0;
    return m;
}

}  // namespace

TEST(Truth, NoiseFreeTrajectory) {
    ScenarioConfig config;
    config.steps = 10;
    config.targets = {{1, 10, StateVector{0.0, 3.0, 0.0, -3.0}}};
    Rng rng(1);
    const GroundTruth truth = generate_truth(config, noise_free(), rng);
    ASSERT_EQ(truth.steps.size(), 10u);
    for (int k = 1; k <= 10; ++k) {
        ASSERT_EQ(truth.steps[k - 1].size(), 1u);
        const StateVector& x = truth.steps[k - 1][0].state;
        EXPECT_DOUBLE_EQ(x[kPx], 3.0 * (k - 1));
        EXPECT_DOUBLE_EQ(x[kPy], -3.0 * (k - 1));
        EXPECT_EQ(x[kVx], 3.0);
    }
}

TEST(Truth, FourTargetWindows) {
    const ScenarioConfig config = four_target_preset();
    ASSERT_EQ(config.targets.size(), 4u);
    Rng rng(2);
    const GroundTruth truth = generate_truth(config, {}, rng);
    const int birth[4] = {1, 1, 8, 15};
    const int death[4] = {40, 28, 40, 40};
    for (int k = 1; k <= 40; ++k) {
        std::vector<int> ids;
        for (const TruthRecord& r : truth.steps[k - 1]) ids.push_back(r.id);
        std::vector<int> expected;
        for (int t = 0; t < 4; ++t)
            if (k >= birth[t] && k <= death[t]) expected.push_back(t);
        EXPECT_EQ(ids, expected) << "step " << k;
    }
}

TEST(Truth, InitialStatesFollowBirthDensity) {
    ScenarioConfig config;
    config.steps = 1;
    config.targets = {{1, 1, std::nullopt}};
    models::ModelSet models;
    Rng rng(3);
    const int n = 100;
    StateVector sum{};
    for (int i = 0; i < n; ++i) {
        const GroundTruth t = generate_truth(config, models, rng);
        for (std::size_t d = 0; d < kStateDim; ++d) sum[d] += t.steps[0][0].state[d];
    }
    for (std::size_t d = 0; d < kStateDim; ++d)
        EXPECT_NEAR(sum[d] / n, models.birth.mean[d], 3.0 * std::sqrt(models.birth.cov_diag[d] / n));
}

TEST(Truth, FixingOneTargetKeepsOthers) {
    ScenarioConfig a = four_target_preset();
    ScenarioConfig b = a;
    b.targets[1].initial = StateVector{1.0, 1.0, 1.0, 1.0};
    Rng ra(4), rb(4);
    const GroundTruth ta = generate_truth(a, {}, ra), tb = generate_truth(b, {}, rb);
    EXPECT_EQ(ta.steps[20][0].state, tb.steps[20][0].state);
    EXPECT_EQ(ta.steps[20][2].state, tb.steps[20][2].state);
    EXPECT_NE(ta.steps[20][1].state, tb.steps[20][1].state);
}

TEST(Scan, PerfectDetectionNoClutter) {
    models::ModelSet models;
    models.detection.p_detect = 1.0;
    models.clutter.rate = 0.0;
    ScenarioStreams streams(5);
    const std::vector<TruthRecord> alive{{0, {10.0, 0.0, -20.0, 0.0}}};
    double sx = 0.0, sxx = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const Scan z = generate_scan(alive, models, streams);
        ASSERT_EQ(z.size(), 1u);
        sx += z[0][0] - 10.0;
        sxx += (z[0][0] - 10.0) * (z[0][0] - 10.0);
    }
    EXPECT_NEAR(sx / n, 0.0, 4.0 * 2.5 / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(sxx / n), 2.5, 0.05);
}

TEST(Scan, ClutterOnlyWithoutDetection) {
    models::ModelSet models;
    models.detection.p_detect = 0.0;
    ScenarioStreams streams(6);
    const std::vector<TruthRecord> alive{{0, {}}, {1, {}}};
    double count = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) count += static_cast<double>(generate_scan(alive, models, streams).size());
    EXPECT_NEAR(count / n, 10.0, 0.2);
}

TEST(Scan, EmptyTruthNoClutterIsEmpty) {
    models::ModelSet models;
    models.clutter.rate = 0.0;
    ScenarioStreams streams(7);
    EXPECT_TRUE(generate_scan({}, models, streams).empty());
}

TEST(Scan, DetectionFrequency) {
    models::ModelSet models;
    models.clutter.rate = 0.0;
    ScenarioStreams streams(8);
    const std::vector<TruthRecord> alive{{0, {}}};
    double hits = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) hits += static_cast<double>(generate_scan(alive, models, streams).size());
    EXPECT_NEAR(hits / n, 0.95, 4.0 * std::sqrt(0.95 * 0.05 / n));
}

TEST(Scans, DeterministicGivenSeed) {
    const ScenarioConfig config = four_target_preset();
    Rng ra(9), rb(9);
    const GroundTruth ta = generate_truth(config, {}, ra), tb = generate_truth(config, {}, rb);
    ScenarioStreams sa(10), sb(10);
    const ScanData da = generate_scans(ta, {}, sa), db = generate_scans(tb, {}, sb);
    EXPECT_EQ(da.hash(), db.hash());
    EXPECT_EQ(da.scans, db.scans);
    ScenarioStreams sc(11);
    EXPECT_NE(generate_scans(ta, {}, sc).hash(), da.hash());
}

TEST(Writers, ColumnText) {
    ScenarioConfig config;
    config.steps = 2;
    config.targets = {{1, 2, StateVector{1.0, 2.0, 3.0, 4.0}}};
    Rng rng(1);
    const GroundTruth truth = generate_truth(config, noise_free(), rng);
    std::ostringstream os;
    write_truth(os, truth);
    EXPECT_EQ(os.str(), "step\tid\tpx\tvx\tpy\tvy\n1\t0\t1\t2\t3\t4\n2\t0\t3\t2\t7\t4\n");
    ScanData scans;
    scans.scans = {{{1.5, -2.0}}, {}};
    std::ostringstream zs;
    write_scans(zs, scans);
    EXPECT_EQ(zs.str(), "step\tzx\tzy\n1\t1.5\t-2\n");
}

TEST(ScenarioConfig, Validation) {
    ScenarioConfig c = four_target_preset();
    EXPECT_NO_THROW(c.validate());
    c.targets[0].death_step = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = four_target_preset();
    c.steps = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}
