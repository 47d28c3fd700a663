#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dcsk/fading.hpp"
#include "oracles.hpp"

using namespace dcsk;

TEST(Nakagami, MomentExamples)
{
    EXPECT_DOUBLE_EQ(nakagami_moment(1, 1, 2), 1.0);
    EXPECT_NEAR(nakagami_moment(2, 1, 4), 1.5, 1e-14);
    EXPECT_NEAR(nakagami_moment(1, 1, 1), std::sqrt(std::numbers::pi) / 2, 1e-14);
    EXPECT_DOUBLE_EQ(nakagami_moment(3, 0.4, 0), 1.0);
}

TEST(Nakagami, MomentsAgreeWithQuadrature)
{
    for (double m : {1.0, 2.5, 4.0}) {
        for (double omega : {0.2, 0.8}) {
            for (int n : {1, 2, 3, 4}) {
                const double q = oracle::nakagami_moment_quadrature(m, omega, n);
                EXPECT_NEAR(nakagami_moment(m, omega, n) / q, 1.0, 1e-6) << m << ' ' << omega << ' ' << n;
            }
        }
    }
}

TEST(Nakagami, SampleMoments)
{
    Engine e(1);
    NakagamiSampler s(1.0, 1.0);
    double m1 = 0.0;
    double m2 = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double a = s(e);
        m1 += a;
        m2 += a * a;
    }
    EXPECT_NEAR(m2 / n, 1.0, 0.01);
    EXPECT_NEAR(m1 / n, 0.8862, 0.008862);
}

TEST(Nakagami, HigherShapeMeansLessPowerVariance)
{
    const auto power_variance = [](double m) {
        Engine e(2);
        NakagamiSampler s(m, 1.0);
        double sum = 0.0;
        double sum2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double p = std::pow(s(e), 2);
            sum += p;
            sum2 += p * p;
        }
        return sum2 / n - std::pow(sum / n, 2);
    };
    EXPECT_LT(power_variance(4.0), power_variance(1.0));
}

TEST(Nakagami, KolmogorovSmirnov)
{
    for (double m : {1.0, 2.0, 4.0}) {
        for (double omega : {0.2, 0.8}) {
            Engine e(static_cast<std::uint64_t>(m * 10 + omega * 100));
            NakagamiSampler s(m, omega);
            std::vector<double> sample(100000);
            for (auto& x : sample) {
                x = s(e);
            }
            const double d = oracle::ks_statistic(sample, [&](double x) { return oracle::nakagami_cdf(x, m, omega); });
            EXPECT_LT(d, oracle::ks_critical_001(sample.size())) << m << ' ' << omega;
        }
    }
}

TEST(Nakagami, RejectsBadParameters)
{
    EXPECT_THROW(NakagamiSampler(1.0, 0.0), ContractError);
    EXPECT_THROW(NakagamiSampler(0.4, 1.0), ContractError);
    EXPECT_NO_THROW(NakagamiSampler(0.5, 1.0));
}

TEST(Nakagami, LargeShapeConcentrates)
{
    Engine e(4);
    NakagamiSampler s(1e6, 0.8);
    double sum = 0.0;
    double sum2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double a = s(e);
        sum += a;
        sum2 += a * a;
    }
    const double sd = std::sqrt(sum2 / n - std::pow(sum / n, 2));
    EXPECT_LT(sd, 1e-2 * std::sqrt(0.8));
    EXPECT_NEAR(sum / n, std::sqrt(0.8), 1e-3);
}

TEST(PathLoss, Examples)
{
    const double c0 = std::pow(10.0, -3.53);
    EXPECT_DOUBLE_EQ(path_loss(c0, 1.0, 3.0), c0);
    EXPECT_NEAR(path_loss(c0, 10.0, 3.0) / std::pow(10.0, -6.53), 1.0, 1e-12);
    EXPECT_NEAR(path_loss(c0, 8.0, 3.0), c0 / 512, 1e-20);
    EXPECT_THROW(path_loss(c0, 0.0, 3.0), ContractError);
}

TEST(Profile, Validation)
{
    EXPECT_TRUE(ChannelProfile{}.violations().empty());
    ChannelProfile bad;
    bad.omega_sr = {0.7, 0.2};
    bad.m_r = 0.1;
    bad.omega_rd = {};
    const auto v = bad.violations();
    EXPECT_EQ(v.size(), 3U);
}

TEST(Realization, PerTapPowerIsPreserved)
{
    Engine e(8);
    ChannelProfile p;
    LinkSampler sampler(p);
    ChannelRealization r;
    double sr0 = 0.0;
    double sr1 = 0.0;
    double rd0 = 0.0;
    double rd1 = 0.0;
    const int draws = 10000;
    const int n = 100;
    for (int d = 0; d < draws; ++d) {
        sampler.sample(n, e, r);
        ASSERT_EQ(r.l_sr, 2);
        ASSERT_EQ(r.n, n);
        for (int m = 0; m < n; ++m) {
            sr0 += std::pow(r.alpha_at(0, m), 2);
            sr1 += std::pow(r.alpha_at(1, m), 2);
            rd0 += std::pow(r.beta_at(m, 0), 2);
            rd1 += std::pow(r.beta_at(m, 1), 2);
        }
    }
    const double total = static_cast<double>(draws) * n;
    EXPECT_NEAR(sr0 / total, 0.8, 0.016);
    EXPECT_NEAR(sr1 / total, 0.2, 0.004);
    EXPECT_NEAR(rd0 / total, 0.8, 0.016);
    EXPECT_NEAR(rd1 / total, 0.2, 0.004);
}

TEST(Realization, ElementsAreUncorrelated)
{
    Engine e(9);
    ChannelProfile p;
    p.omega_sr = {1.0};
    p.omega_rd = {1.0};
    p.m_s = p.m_r = 1.0;
    LinkSampler sampler(p);
    ChannelRealization r;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        sampler.sample(2, e, r);
        const double x = std::pow(r.alpha_at(0, 0), 2);
        const double y = std::pow(r.alpha_at(0, 1), 2);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double rho = cov / std::sqrt((sxx / n - std::pow(sx / n, 2)) * (syy / n - std::pow(sy / n, 2)));
    EXPECT_LT(std::abs(rho), 0.02);
}

TEST(Realization, PhasesAreUniform)
{
    Engine e(10);
    const auto r = sample_link_realization(ChannelProfile{}, 50000, e);
    double c = 0.0;
    double s = 0.0;
    for (double t : r.theta_h) {
        ASSERT_GE(t, 0.0);
        ASSERT_LT(t, 2 * std::numbers::pi);
        c += std::cos(t);
        s += std::sin(t);
    }
    EXPECT_LT(std::abs(c) / r.theta_h.size(), 0.01);
    EXPECT_LT(std::abs(s) / r.theta_h.size(), 0.01);
}

TEST(Realization, UnitFixture)
{
    const auto r = ChannelRealization::unit(3);
    EXPECT_EQ(r.alpha_at(0, 2), 1.0);
    EXPECT_EQ(r.beta_at(2, 0), 1.0);
}

TEST(Geometry, CompositeScales)
{
    LinkGeometry g{1.0, 1.0, 1.0, 3.0, 3.0};
    EXPECT_DOUBLE_EQ(composite_delta(4.0, g), 2.0);
    EXPECT_DOUBLE_EQ(source_link_gain(4.0, g), 4.0);
    g.d_rd = 2.0;
    EXPECT_DOUBLE_EQ(composite_delta(4.0, g), std::sqrt(4.0 / 8.0));
}
