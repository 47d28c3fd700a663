#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "dcsk/chaos.hpp"

using namespace dcsk;

TEST(Chebyshev, MatchesTripleAngleIdentity)
{
    for (int i = 0; i <= 200; ++i) {
        const double t = std::numbers::pi * i / 200.0;
        EXPECT_NEAR(chebyshev_next(std::cos(t)), std::cos(3 * t), 1e-13);
    }
}

TEST(Chebyshev, KnownValues)
{
    EXPECT_DOUBLE_EQ(chebyshev_next(1.0), 1.0);
    EXPECT_DOUBLE_EQ(chebyshev_next(0.0), 0.0);
    EXPECT_NEAR(chebyshev_next(0.3), -0.792, 1e-15);
    EXPECT_THROW(chebyshev_next(1.5), ContractError);
}

TEST(Chebyshev, InvariantMoments)
{
    Engine e(11);
    double m2 = 0.0;
    double m4 = 0.0;
    long n = 0;
    while (n < 1000000) {
        for (double x : generate_reference(50, e)) {
            m2 += x * x;
            m4 += x * x * x * x;
            ++n;
        }
    }
    EXPECT_NEAR(m2 / n, 0.5, 0.005);
    EXPECT_NEAR(m4 / n, 0.375, 0.00375);
}

TEST(Chebyshev, LongOrbitStaysInsideOpenInterval)
{
    Engine e(5);
    const auto chips = generate_reference(200000, e);
    double m2 = 0.0;
    for (double x : chips) {
        ASSERT_LT(std::abs(x), 1.0);
        m2 += x * x;
    }
    EXPECT_NEAR(m2 / chips.size(), 0.5, 0.01);
}

TEST(Chebyshev, DefaultStrideRemovesAdjacentFourthOrderCorrelation)
{
    Engine e(21);
    double mixed_stride1 = 0.0;
    double mixed_stride2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto a = generate_reference(2, e, 1);
        mixed_stride1 += a[0] * a[0] * a[0] * a[1];
        const auto b = generate_reference(2, e, 2);
        mixed_stride2 += b[0] * b[0] * b[0] * b[1];
    }
    EXPECT_NEAR(mixed_stride1 / n, 0.125, 0.005);
    EXPECT_NEAR(mixed_stride2 / n, 0.0, 0.005);
}

TEST(Waveform, Validation)
{
    EXPECT_TRUE(WaveformParams::is_valid(40, 20));
    EXPECT_TRUE(WaveformParams::is_valid(40, 40));
    EXPECT_FALSE(WaveformParams::is_valid(40, 7));
    EXPECT_FALSE(WaveformParams::is_valid(40, 0));
    EXPECT_FALSE(WaveformParams::is_valid(20, 40));
    EXPECT_THROW((void)WaveformParams::make(40, 7), ContractError);
    const auto w = WaveformParams::make(40, 8);
    EXPECT_EQ(w.zeta(), 5);
    EXPECT_EQ(w.frame_length(), 48);
    EXPECT_TRUE(WaveformParams::make(40, 40).is_classical());
}

TEST(Frame, LayoutIsReferenceThenModulatedReplicas)
{
    const std::vector<double> ref{0.3, -0.792};
    const auto frame = build_frame(WaveformParams{4, 2}, -1, ref);
    const std::vector<double> expected{0.3, -0.792, -0.3, 0.792, -0.3, 0.792};
    EXPECT_EQ(std::vector<double>(frame.chips().begin(), frame.chips().end()), expected);
    EXPECT_EQ(frame.data_block(1)[0], -0.3);
    EXPECT_THROW((void)frame.data_block(2), ContractError);
    EXPECT_THROW(build_frame(WaveformParams{4, 2}, 0, ref), ContractError);
    EXPECT_THROW(build_frame(WaveformParams{4, 1}, 1, ref), ContractError);
}

TEST(Frame, ClassicalDcskHasOneReplica)
{
    Engine e(1);
    const auto ref = generate_reference(8, e);
    const auto frame = build_frame(WaveformParams{8, 8}, 1, ref);
    EXPECT_EQ(frame.chips().size(), 16U);
    for (std::size_t k = 0; k < 8; ++k) {
        EXPECT_EQ(frame.chips()[k], frame.chips()[k + 8]);
    }
}

TEST(Frame, BitEnergy)
{
    const TransmitConfig tx{2.0, 0.5, 0.5};
    EXPECT_DOUBLE_EQ(bit_energy(tx, WaveformParams{40, 20}), 2.0 * 0.5 * 60 * 0.5);
}
