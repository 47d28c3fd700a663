#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dcsk/analytics.hpp"
#include "dcsk/planning.hpp"
#include "dcsk/simulator.hpp"

using namespace dcsk;

namespace {

SystemConfig awgn_config(int m, int phi, double gamma0_db)
{
    SystemConfig c;
    c.channel_model = ChannelModel::Awgn;
    c.waveform = {40, phi};
    c.ris = partition(100, m, CommonPhase{0.0});
    c.gamma0_db = gamma0_db;
    c.sim.trials = 20000;
    c.sim.seed = 7;
    return c;
}

std::vector<double> re(const std::vector<Complex>& v)
{
    std::vector<double> out;
    for (auto z : v) {
        out.push_back(z.real());
    }
    return out;
}

}  // namespace

TEST(Receive, IdentityChannelReturnsFrame)
{
    const auto frame = build_frame(WaveformParams{4, 2}, 1, std::vector<double>{0.3, -0.792});
    const std::vector<double> zero(6, 0.0);
    const auto gain = composite_gain_awgn(std::vector<double>{0.0}, 1.0);
    const auto y = received_symbol_at_rx(frame, gain, zero);
    EXPECT_EQ(re(y), std::vector<double>(frame.chips().begin(), frame.chips().end()));
}

TEST(Receive, TwoAlignedElementsDoubleTheChips)
{
    const auto frame = build_frame(WaveformParams{4, 2}, -1, std::vector<double>{0.3, -0.792});
    const std::vector<double> zero(6, 0.0);
    const auto y =
        received_symbol_at_rx(frame, ChannelRealization::unit(2), std::vector<double>{0.0, 0.0}, 1.0, zero);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_NEAR(y[k].real(), 2 * frame.chips()[k], 1e-15);
        EXPECT_NEAR(y[k].imag(), 0.0, 1e-15);
    }
}

TEST(Receive, ZeroFrameIsPureNoise)
{
    const std::vector<double> chips(6, 0.0);
    const std::vector<double> noise{0.1, -0.2, 0.3, 0.0, 0.5, -0.6};
    std::vector<Complex> y;
    received_symbol_at_rx(chips, Complex{0.0, 2.0}, noise, y);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_NEAR(std::abs(y[k]), std::abs(noise[k]), 1e-15);
    }
}

TEST(Decision, HandComputedStatistic)
{
    const WaveformParams p{4, 2};
    const std::vector<double> zero(6, 0.0);
    const auto gain = composite_gain_awgn(std::vector<double>{0.0}, 1.0);
    const double expected = 2 * (0.3 * 0.3 + 0.792 * 0.792);
    const auto up = received_symbol_at_rx(build_frame(p, 1, std::vector<double>{0.3, -0.792}), gain, zero);
    EXPECT_NEAR(decision_statistic(up, p), expected, 1e-12);
    EXPECT_NEAR(expected, 1.4345, 1e-4);
    const auto down = received_symbol_at_rx(build_frame(p, -1, std::vector<double>{0.3, -0.792}), gain, zero);
    EXPECT_NEAR(decision_statistic(down, p), -expected, 1e-12);
    EXPECT_EQ(decision_statistic(std::vector<Complex>(6), p), 0.0);
    EXPECT_THROW(decision_statistic(std::vector<Complex>(5), p), ContractError);
}

TEST(Decision, SignDetector)
{
    EXPECT_EQ(detect_bit(1.43), 1);
    EXPECT_EQ(detect_bit(-0.002), -1);
    EXPECT_EQ(detect_bit(0.0), 1);
}

TEST(Ber, NoiselessLinkNeverErrs)
{
    for (int m : {1, 3}) {
        auto c = awgn_config(m, 8, 300.0);
        c.sim.trials = 5000;
        EXPECT_EQ(simulate_ber(c).errors, 0U);
    }
    auto c = awgn_config(2, 8, 300.0);
    c.channel_model = ChannelModel::Nakagami;
    c.ris.phase_error = UniformRandom{};
    c.sim.trials = 5000;
    EXPECT_EQ(simulate_ber(c).ber, 0.0);
}

TEST(Ber, StandardErrorInvariant)
{
    const auto est = simulate_ber(awgn_config(2, 20, 4.0));
    EXPECT_EQ(est.trials_run, 20000U);
    EXPECT_DOUBLE_EQ(est.std_error, std::sqrt(est.ber * (1 - est.ber) / 20000.0));
    EXPECT_DOUBLE_EQ(est.ber, static_cast<double>(est.errors) / 20000.0);
}

TEST(Ber, DeterministicAcrossThreadCounts)
{
    auto c = awgn_config(2, 10, 4.0);
    c.sim.batch_size = 1000;
    c.sim.threads = 1;
    const auto a = simulate_ber(c);
    c.sim.threads = 5;
    const auto b = simulate_ber(c);
    EXPECT_EQ(a.errors, b.errors);

    c.channel_model = ChannelModel::Nakagami;
    c.ris.phase_error = UniformRandom{};
    c.sim.threads = 1;
    const auto h1 = simulate_harvest(c);
    c.sim.threads = 3;
    const auto h3 = simulate_harvest(c);
    EXPECT_EQ(h1.p_harv_watts, h3.p_harv_watts);
    EXPECT_EQ(h1.per_element_vout, h3.per_element_vout);
}

TEST(Ber, SimulatedPhiTwoExceedsAnalytic)
{
    auto c = awgn_config(2, 2, 4.0);
    c.sim.trials = 200000;
    const auto est = simulate_ber(c);
    EXPECT_GT(est.ber, analytics::ber_awgn(c.waveform, db_to_linear(4.0), std::vector<double>{0, 0}));
}

TEST(Ber, ClassicalDcskCloseToTheory)
{
    // For phi = beta the Gaussian approximation is accurate.
    auto c = awgn_config(1, 40, 7.0);
    c.sim.trials = 200000;
    const auto est = simulate_ber(c);
    const double theory = analytics::conditional_ber(1.0, c.waveform, db_to_linear(7.0));
    EXPECT_NEAR(est.ber, theory, 4 * est.std_error);
}

TEST(Ber, FadingSimulationTracksSemiAnalyticAverage)
{
    SystemConfig c;
    c.waveform = {40, 40};
    c.ris = partition(100, 2, CommonPhase{0.0});
    c.gamma0_db = 4.0;
    c.sim.trials = 100000;
    c.sim.seed = 3;
    const auto est = simulate_ber(c);
    const auto lambdas = analytics::sample_lambdas(c, 100000);
    double s = 0.0;
    double s2 = 0.0;
    for (double l : lambdas) {
        const double b = analytics::conditional_ber(l, c.waveform, db_to_linear(4.0));
        s += b;
        s2 += b * b;
    }
    const double mean = s / lambdas.size();
    const double se = std::sqrt((s2 / lambdas.size() - mean * mean) / lambdas.size());
    EXPECT_NEAR(est.ber, mean, 3 * std::hypot(est.std_error, se));
}

TEST(DecisionMoments, MeanAndVarianceMatchClosedForm)
{
    auto c = awgn_config(2, 10, 4.0);
    c.sim.trials = 100000;
    const auto emp = simulate_decision_moments(c, 1, NoiseMask{});
    const auto th = analytics::decision_moments(c.waveform, delta_of(c), noise_n0(c), 4.0, 0.5, 1);
    EXPECT_NEAR(emp.mean / th.mean, 1.0, 0.01);
    EXPECT_NEAR(emp.noise_variance / th.variance(), 1.0, 0.03);
}

TEST(DecisionMoments, ReferenceNoiseTermScalesWithZetaSquared)
{
    auto c = awgn_config(1, 4, 4.0);
    c.sim.trials = 100000;
    const auto emp = simulate_decision_moments(c, 1, NoiseMask{true, true, false});
    const auto th = analytics::decision_moments(c.waveform, delta_of(c), noise_n0(c), 1.0, 0.5, 1);
    EXPECT_NEAR(emp.noise_variance / th.reference_noise_var, 1.0, 0.03);
}

TEST(Correlator, Sums)
{
    EXPECT_DOUBLE_EQ(analog_correlate(std::vector<double>{0.5, -0.5, 0.25}), 0.25);
    EXPECT_DOUBLE_EQ(analog_correlate(std::vector<double>(5, 0.0)), 0.0);
    const std::vector<double> ref{0.3, -0.792};
    const auto frame = build_frame(WaveformParams{4, 2}, 1, ref);
    EXPECT_NEAR(analog_correlate(frame.chips()), 3 * (0.3 - 0.792), 1e-15);
    EXPECT_THROW(analog_correlate(std::vector<Complex>(5), WaveformParams{4, 2}), ContractError);
}

TEST(Rectifier, DcVoltage)
{
    EXPECT_DOUBLE_EQ(ehu_dc_voltage(2.0, 123.0, EhCircuitParams{1.0, 0.0, 1.0}), 2.0);
    EXPECT_DOUBLE_EQ(ehu_dc_voltage(0.0, 3.0, EhCircuitParams{0.0, 1.0, 1.0}), 3.0);
    EXPECT_NEAR(ehu_dc_voltage(1e-6, 1e-12, EhCircuitParams{}), 9.259e-4, 1e-7);
}

TEST(Harvest, NoAbsorbingElementsHarvestNothing)
{
    SystemConfig c;
    c.ris = partition(10, 10);
    c.sim.trials = 100;
    const auto h = simulate_harvest(c);
    EXPECT_EQ(h.p_harv_watts, 0.0);
    EXPECT_TRUE(h.per_element_vout.empty());
}

TEST(Harvest, PowerIsSumOfSquaredVoltagesOverLoad)
{
    SystemConfig c;
    c.ris = partition(100, 90);
    c.sim.trials = 2000;
    const auto h = simulate_harvest(c);
    ASSERT_EQ(h.per_element_vout.size(), 10U);
    double s = 0.0;
    for (double v : h.per_element_vout) {
        s += v * v;
    }
    EXPECT_DOUBLE_EQ(h.p_harv_watts, s / c.eh.r_load);
}

TEST(Harvest, RoughlyLinearInK)
{
    SystemConfig c;
    c.waveform = {40, 10};
    c.profile.omega_sr = {1.0};
    c.sim.trials = 100000;
    c.ris = partition(100, 90);
    const double p10 = simulate_harvest(c).p_harv_watts;
    c.ris = partition(100, 80);
    const double p20 = simulate_harvest(c).p_harv_watts;
    EXPECT_NEAR(p20 / p10, 2.0, 0.1);
}

TEST(Harvest, ComplexPhaseModeHarvestsLess)
{
    SystemConfig c;
    c.ris = partition(100, 90);
    c.waveform = {40, 10};
    c.sim.trials = 20000;
    const double coherent = simulate_harvest(c).p_harv_watts;
    c.sim.harvest_mode = HarvestMode::ComplexPhase;
    EXPECT_LT(simulate_harvest(c).p_harv_watts, coherent);
}

TEST(Harvest, ChipSumMoments)
{
    const WaveformParams p{40, 20};
    Engine e(12);
    double s2 = 0.0;
    double s4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const auto frame = build_frame(p, random_bit(e), generate_reference(p.phi, e));
        const double s = analog_correlate(frame.chips());
        s2 += s * s;
        s4 += s * s * s * s;
    }
    EXPECT_NEAR(s2 / n / analytics::chip_sum_moment2(p), 1.0, 0.02);
    EXPECT_NEAR(s4 / n / analytics::chip_sum_moment4(p), 1.0, 0.04);
}
