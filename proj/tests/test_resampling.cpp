#include <gtest/gtest.h>

#include "rphd/random.hpp"
#include "rphd/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace rphd;
using namespace rphd::resampling;

namespace {

ParticleSet random_set(Rng& rng, std::size_t n) {
    ParticleSet set;
    set.particles.resize(n);
    for (std::size_t i = 0; i < n; ++i) set.particles[i] = {{static_cast<double>(i), 0.0, 0.0, 0.0}, rng.uniform() * 0.02};
    set.survivor_count = n;
    return set;
}

}  // namespace

TEST(TargetCount, BudgetFollowsRoundedMass) {
    const ResampleConfig config{Scheme::Systematic, 200, 100};
    EXPECT_EQ(target_count(3.2, config), 600u);
    EXPECT_EQ(target_count(0.3, config), 100u);
    EXPECT_EQ(target_count(0.0, config), 100u);
    EXPECT_EQ(target_count(2.5, config), 600u);
}

TEST(Resample, UniformWeightsCopyEachOnce) {
    ParticleSet set;
    for (int i = 0; i < 4; ++i) set.particles.push_back({{double(i), 0.0, 0.0, 0.0}, 0.5});
    Rng rng(4);
    const ParticleSet out = resample(set, {Scheme::Systematic, 2, 1}, rng);
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(out.ancestry, (std::vector<std::size_t>{0, 1, 2, 3}));
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(out.particles[i].weight, 0.5);
        EXPECT_EQ(out.particles[i].state, set.particles[i].state);
    }
}

TEST(Resample, MultinomialCopiesAreUnbiased) {
    const std::vector<double> w{0.9 * 1.7, 0.1 * 1.7};
    Rng rng(99);
    const int reps = 100000;
    double copies = 0.0;
    for (int r = 0; r < reps; ++r)
        for (std::size_t a : multinomial_indices(w, 10, rng)) copies += a == 0 ? 1.0 : 0.0;
    EXPECT_NEAR(copies / reps, 9.0, 0.09);
}

TEST(Resample, SystematicCopyCountsWithinFloorCeil) {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const ParticleSet set = random_set(rng, 1 + rng.index(300));
        const double mass = total_mass(set);
        const ParticleSet out = resample(set, {Scheme::Systematic, 100, 50}, rng);
        std::vector<std::size_t> copies(set.size(), 0);
        for (std::size_t a : out.ancestry) ++copies[a];
        for (std::size_t j = 0; j < set.size(); ++j) {
            const double expect = static_cast<double>(out.size()) * set.particles[j].weight / mass;
            ASSERT_GE(static_cast<double>(copies[j]), std::floor(expect - 1e-9));
            ASSERT_LE(static_cast<double>(copies[j]), std::ceil(expect + 1e-9));
        }
        ASSERT_TRUE(std::is_sorted(out.ancestry.begin(), out.ancestry.end()));
    }
}

TEST(Resample, MassPreservedExactlyForBothSchemes) {
    Rng rng(5);
    for (Scheme scheme : {Scheme::Systematic, Scheme::Multinomial}) {
        for (int trial = 0; trial < 300; ++trial) {
            const ParticleSet set = random_set(rng, 1 + rng.index(500));
            const ParticleSet out = resample(set, {scheme, 50, 25}, rng);
            ASSERT_EQ(total_mass(out), total_mass(set));
            ASSERT_EQ(out.size(), target_count(total_mass(set), {scheme, 50, 25}));
            ASSERT_EQ(out.survivor_count, out.size());
            ASSERT_EQ(out.ancestry.size(), out.size());
        }
    }
}

TEST(Resample, ZeroMassThrows) {
    ParticleSet set;
    set.particles.push_back({{}, 0.0});
    Rng rng(1);
    EXPECT_THROW(resample(set, {}, rng), std::domain_error);
    EXPECT_THROW(resample(ParticleSet{}, {}, rng), std::domain_error);
}

TEST(Resample, ZeroWeightParticlesNeverSelected) {
    ParticleSet set;
    set.particles = {{{0.0, 0, 0, 0}, 0.0}, {{1.0, 0, 0, 0}, 1.0}, {{2.0, 0, 0, 0}, 0.0}};
    Rng rng(8);
    for (Scheme scheme : {Scheme::Systematic, Scheme::Multinomial}) {
        const ParticleSet out = resample(set, {scheme, 20, 10}, rng);
        for (std::size_t a : out.ancestry) EXPECT_EQ(a, 1u);
    }
}

TEST(Scheme, ParseRoundTrip) {
    EXPECT_EQ(parse_scheme(to_string(Scheme::Systematic)), Scheme::Systematic);
    EXPECT_EQ(parse_scheme(to_string(Scheme::Multinomial)), Scheme::Multinomial);
    EXPECT_THROW(parse_scheme("stratified-ish"), std::invalid_argument);
}
