#include <gtest/gtest.h>

#include "rphd/random.hpp"
#include "rphd/types.hpp"

#include <set>
#include <vector>

using namespace rphd;

TEST(CompensatedSum, RecoversCancelledTerms) {
    const std::vector<double> v{1e16, 1.0, -1e16, 1.0};
    EXPECT_EQ(compensated_sum(v), 2.0);
}

TEST(CompensatedSum, MatchesLongDoubleOnManySmallTerms) {
    Rng rng(3);
    std::vector<double> v(100000);
    long double exact = 0.0L;
    for (double& x : v) {
        x = rng.uniform() * 1e-3;
        exact += x;
    }
    EXPECT_NEAR(compensated_sum(v), static_cast<double>(exact), 1e-15);
}

TEST(RoundHalfUp, Boundaries) {
    EXPECT_EQ(round_half_up(3.6), 4);
    EXPECT_EQ(round_half_up(0.4), 0);
    EXPECT_EQ(round_half_up(2.5), 3);
    EXPECT_EQ(round_half_up(0.0), 0);
    EXPECT_EQ(round_half_up(2.4999999), 2);
}

TEST(SettleMass, HitsTargetExactly) {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Particle> ps(1 + rng.index(300));
        for (Particle& p : ps) p.weight = rng.uniform() * 0.01;
        const double target = total_mass(ps) * (1.0 + (rng.uniform() - 0.5) * 1e-12);
        settle_mass(ps, target);
        ASSERT_EQ(total_mass(ps), target);
        for (const Particle& p : ps) ASSERT_GE(p.weight, 0.0);
    }
}

TEST(SettleMass, EmptyIsNoop) {
    std::vector<Particle> ps;
    settle_mass(ps, 1.0);
    EXPECT_TRUE(ps.empty());
}

TEST(DeriveSeed, DistinctAcrossStreamsAndBases) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t base = 0; base < 50; ++base)
        for (auto s : {Stream::Truth, Stream::Detection, Stream::MeasurementNoise, Stream::Clutter, Stream::Shuffle,
                       Stream::Propagation, Stream::Birth, Stream::Resampling, Stream::Jitter, Stream::Extraction})
            seen.insert(derive_seed(base, s));
    EXPECT_EQ(seen.size(), 500u);
}

TEST(Rng, SameSeedSameSequence) {
    Rng a(42, Stream::Jitter), b(42, Stream::Jitter);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(a.normal(), b.normal());
        ASSERT_EQ(a.uniform(), b.uniform());
        ASSERT_EQ(a.poisson(3.0), b.poisson(3.0));
    }
}

TEST(Rng, UniformStaysInUnitInterval) {
    Rng rng(5);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}
