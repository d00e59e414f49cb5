#include <gtest/gtest.h>

#include "rphd/config.hpp"

#include <stdexcept>

using namespace rphd;
using config::ConfigError;

TEST(Preset, BenchmarkValues) {
    const harness::RunConfig c = config::preset("paper-np200");
    EXPECT_EQ(c.trials, 100);
    EXPECT_EQ(c.scenario.steps, 40);
    EXPECT_EQ(c.filter.particles_per_target, 200);
    EXPECT_EQ(c.models.motion.sigma_v1, 1.0);
    EXPECT_EQ(c.models.motion.sigma_v2, 0.1);
    EXPECT_EQ(c.models.measurement.sigma_w1, 2.5);
    EXPECT_EQ(c.models.clutter.rate, 10.0);
    EXPECT_EQ(c.models.detection.p_survive, 0.95);
    EXPECT_EQ(c.models.detection.p_detect, 0.95);
    EXPECT_EQ(c.ospa.cutoff, 100.0);
    EXPECT_EQ(c.ospa.order, 2.0);
    ASSERT_EQ(c.variants.size(), 3u);
    EXPECT_EQ(c.variants[0].roughening.mode, roughening::Mode::None);
    EXPECT_EQ(c.variants[1].roughening.mode, roughening::Mode::Separate);
    EXPECT_EQ(c.variants[2].roughening.mode, roughening::Mode::Direct);
    EXPECT_EQ(c.variants[1].roughening.jitter_std, (StateVector{0.0, 0.4, 0.0, 0.4}));
    EXPECT_EQ(config::preset("paper-np1000").filter.particles_per_target, 1000);
    EXPECT_THROW(config::preset("paper-np5"), ConfigError);
}

TEST(Parse, CommentsAndOverrides) {
    const auto c = config::parse(
        "# comment\n"
        "run.trials = 7   # trailing\n"
        "\n"
        "filter.particles_per_target=321\n"
        "scenario.targets = 1:10, 3:12\n"
        "scenario.steps = 12\n");
    EXPECT_EQ(c.trials, 7);
    EXPECT_EQ(c.filter.particles_per_target, 321);
    ASSERT_EQ(c.scenario.targets.size(), 2u);
    EXPECT_EQ(c.scenario.targets[1].birth_step, 3);
    EXPECT_EQ(c.scenario.targets[1].death_step, 12);
}

TEST(Parse, PresetAppliedFirst) {
    const auto c = config::parse("filter.particles_per_target = 50\npreset = paper-np1000\n");
    EXPECT_EQ(c.filter.particles_per_target, 50);
}

TEST(Parse, VariantKeys) {
    const auto c = config::parse(
        "roughening.variants = basic, gordon\n"
        "roughening.gordon.mode = separate\n"
        "roughening.gordon.gordon_k = 0.2\n"
        "roughening.gordon.selective_threshold = 0.5\n"
        "roughening.gordon.overlapped_only = true\n");
    ASSERT_EQ(c.variants.size(), 2u);
    const auto& r = c.variants[1].roughening;
    EXPECT_EQ(r.mode, roughening::Mode::Separate);
    ASSERT_TRUE(r.gordon.has_value());
    EXPECT_EQ(r.gordon->K, 0.2);
    EXPECT_EQ(r.jitter_std, StateVector{});
    EXPECT_EQ(*r.selective_threshold, 0.5);
    EXPECT_TRUE(r.overlapped_only);
}

TEST(Parse, JitterStdShorthand) {
    const auto c = config::parse("roughening.separate.jitter_std = 0.8\nroughening.direct.jitter_std = 0,1,0,2\n");
    EXPECT_EQ(c.variants[1].roughening.jitter_std, (StateVector{0.0, 0.8, 0.0, 0.8}));
    EXPECT_EQ(c.variants[2].roughening.jitter_std, (StateVector{0.0, 1.0, 0.0, 2.0}));
}

TEST(Parse, Errors) {
    EXPECT_THROW(config::parse("no.such.key = 1\n"), ConfigError);
    EXPECT_THROW(config::parse("run.trials = many\n"), ConfigError);
    EXPECT_THROW(config::parse("run.trials\n"), ConfigError);
    EXPECT_THROW(config::parse("detection.p_detect = 1.5\n"), ConfigError);
    EXPECT_THROW(config::parse("run.trials = 0\n"), ConfigError);
    EXPECT_THROW(config::parse("roughening.variants = separate\n"), ConfigError);
    EXPECT_THROW(config::parse("roughening.separate.mode = wobble\n"), ConfigError);
}

TEST(ToText, RoundTrip) {
    harness::RunConfig c = config::parse(
        "run.master_seed = 18446744073709551615\n"
        "motion.sigma_v1 = 0.1234567890123456789\n"
        "scenario.initial.2 = 1.5,-2,3e-7,4\n"
        "sweep.deltas = 0,0.05,1.7\n"
        "resample.scheme = multinomial\n"
        "ospa.full_state = true\n"
        "roughening.variants = basic,separate,direct,g\n"
        "roughening.g.mode = direct\n"
        "roughening.g.gordon_k = 0.3\n"
        "roughening.g.gordon_exponent = positive\n"
        "roughening.direct.cap_to_measurement = false\n");
    const std::string text = config::to_text(c);
    const harness::RunConfig d = config::parse(text);
    EXPECT_EQ(config::to_text(d), text);
    EXPECT_EQ(d.master_seed, 18446744073709551615ULL);
    EXPECT_EQ(d.models.motion.sigma_v1, c.models.motion.sigma_v1);
    EXPECT_EQ(*d.scenario.targets[2].initial, (StateVector{1.5, -2.0, 3e-7, 4.0}));
    EXPECT_EQ(d.filter.scheme, resampling::Scheme::Multinomial);
    EXPECT_TRUE(d.ospa_full_state);
    EXPECT_EQ(d.variants[3].roughening.gordon->exponent, roughening::GordonExponent::Positive);
    EXPECT_FALSE(d.variants[2].roughening.cap_to_measurement);
}
