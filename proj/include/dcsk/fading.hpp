#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace dcsk {

/// Statistical description of both hops: Nakagami shapes and per-tap mean
/// powers. Every element of the surface shares these statistics.
struct ChannelProfile
{
    double m_s = 4.0;
    double m_r = 4.0;
    std::vector<double> omega_sr{0.8, 0.2};
    std::vector<double> omega_rd{0.8, 0.2};

    [[nodiscard]] int l_sr() const noexcept { return static_cast<int>(omega_sr.size()); }
    [[nodiscard]] int l_rd() const noexcept { return static_cast<int>(omega_rd.size()); }

    /// Empty when valid; otherwise one message per violated invariant.
    [[nodiscard]] std::vector<std::string> violations() const
    {
        std::vector<std::string> out;
        const auto check_taps = [&](const std::vector<double>& taps, const char* name) {
            if (taps.empty()) {
                out.push_back(std::string(name) + " must have at least one tap");
                return;
            }
            for (double w : taps) {
                if (!(w > 0.0)) {
                    out.push_back(std::string(name) + " tap powers must be > 0");
                    break;
                }
            }
            const double total = std::accumulate(taps.begin(), taps.end(), 0.0);
            if (std::abs(total - 1.0) > 1e-12) {
                out.push_back(std::string(name) + " tap powers must sum to 1");
            }
        };
        if (!(m_s >= 0.5)) {
            out.emplace_back("m_s must be >= 0.5");
        }
        if (!(m_r >= 0.5)) {
            out.emplace_back("m_r must be >= 0.5");
        }
        check_taps(omega_sr, "omega_sr");
        check_taps(omega_rd, "omega_rd");
        return out;
    }

    friend bool operator==(const ChannelProfile&, const ChannelProfile&) = default;
};

/// Large-scale attenuation of both hops.
struct LinkGeometry
{
    double c0 = std::pow(10.0, -3.53);
    double d_sr = 8.0;
    double d_rd = 10.0;
    double alpha_sr = 3.0;
    double alpha_rd = 3.0;

    friend bool operator==(const LinkGeometry&, const LinkGeometry&) = default;
};

inline double path_loss(double c0, double d, double alpha_exp)
{
    require(d > 0.0, "path_loss requires d > 0");
    return c0 * std::pow(d, -alpha_exp);
}

/// P_t * C0 * d_sr^-alpha_sr: received power factor at a surface element.
inline double source_link_gain(double p_t, const LinkGeometry& g)
{
    return p_t * path_loss(g.c0, g.d_sr, g.alpha_sr);
}

/// delta = sqrt(P_t C0^2 d_sr^-alpha_sr d_rd^-alpha_rd), the end-to-end
/// amplitude scale through the surface.
inline double composite_delta(double p_t, const LinkGeometry& g)
{
    return std::sqrt(p_t * path_loss(g.c0, g.d_sr, g.alpha_sr) * path_loss(g.c0, g.d_rd, g.alpha_rd));
}

/// One draw of every tap of both hops for `n` elements.
/// alpha/theta_h are [l_sr x n], beta/theta_g are [n x l_rd], row-major.
struct ChannelRealization
{
    int l_sr = 0;
    int n = 0;
    int l_rd = 0;
    std::vector<double> alpha;
    std::vector<double> theta_h;
    std::vector<double> beta;
    std::vector<double> theta_g;

    [[nodiscard]] double alpha_at(int p, int elem) const noexcept { return alpha[idx_sr(p, elem)]; }
    [[nodiscard]] double theta_h_at(int p, int elem) const noexcept { return theta_h[idx_sr(p, elem)]; }
    [[nodiscard]] double beta_at(int elem, int q) const noexcept { return beta[idx_rd(elem, q)]; }
    [[nodiscard]] double theta_g_at(int elem, int q) const noexcept { return theta_g[idx_rd(elem, q)]; }

    /// Unit-amplitude single-tap channel: the AWGN fixture.
    [[nodiscard]] static ChannelRealization unit(int n_elements)
    {
        const auto count = static_cast<std::size_t>(n_elements);
        return ChannelRealization{1, n_elements, 1, std::vector<double>(count, 1.0), std::vector<double>(count, 0.0),
                                  std::vector<double>(count, 1.0), std::vector<double>(count, 0.0)};
    }

  private:
    [[nodiscard]] std::size_t idx_sr(int p, int elem) const noexcept
    {
        return static_cast<std::size_t>(p) * static_cast<std::size_t>(n) + static_cast<std::size_t>(elem);
    }
    [[nodiscard]] std::size_t idx_rd(int elem, int q) const noexcept
    {
        return static_cast<std::size_t>(elem) * static_cast<std::size_t>(l_rd) + static_cast<std::size_t>(q);
    }
};

/// Nakagami-m amplitude as the square root of a Gamma(m, omega/m) variate.
class NakagamiSampler
{
  public:
    NakagamiSampler(double m, double omega) : gamma_(check(m, omega), omega / m) {}

    double operator()(Engine& engine) { return std::sqrt(gamma_(engine)); }

  private:
    static double check(double m, double omega)
    {
        require(m >= 0.5, "Nakagami shape must be >= 0.5");
        require(omega > 0.0, "Nakagami omega must be > 0");
        return m;
    }

    std::gamma_distribution<double> gamma_;
};

inline double sample_nakagami(double m, double omega, Engine& engine)
{
    NakagamiSampler sampler(m, omega);
    return sampler(engine);
}

/// E{alpha^n} = Gamma(m + n/2) / Gamma(m) * (omega/m)^(n/2).
inline double nakagami_moment(double m, double omega, int n)
{
    require(m > 0.0 && omega > 0.0 && n >= 0, "nakagami_moment requires m > 0, omega > 0, n >= 0");
    const double half_n = 0.5 * static_cast<double>(n);
    return std::exp(std::lgamma(m + half_n) - std::lgamma(m)) * std::pow(omega / m, half_n);
}

/// Reusable samplers for one profile; amortizes distribution setup across
/// the millions of draws a Monte Carlo run makes.
class LinkSampler
{
  public:
    explicit LinkSampler(const ChannelProfile& profile)
    {
        for (double w : profile.omega_sr) {
            sr_.emplace_back(profile.m_s, w);
        }
        for (double w : profile.omega_rd) {
            rd_.emplace_back(profile.m_r, w);
        }
    }

    /// Fills `out` for `n_elements` elements, reusing its storage.
    void sample(int n_elements, Engine& engine, ChannelRealization& out)
    {
        require(n_elements >= 1, "realization needs at least one element");
        out.l_sr = static_cast<int>(sr_.size());
        out.l_rd = static_cast<int>(rd_.size());
        out.n = n_elements;
        const auto n_sr = sr_.size() * static_cast<std::size_t>(n_elements);
        const auto n_rd = rd_.size() * static_cast<std::size_t>(n_elements);
        out.alpha.resize(n_sr);
        out.theta_h.resize(n_sr);
        out.beta.resize(n_rd);
        out.theta_g.resize(n_rd);
        std::size_t i = 0;
        for (auto& tap : sr_) {
            for (int e = 0; e < n_elements; ++e, ++i) {
                out.alpha[i] = tap(engine);
                out.theta_h[i] = uniform_phase(engine);
            }
        }
        i = 0;
        for (int e = 0; e < n_elements; ++e) {
            for (auto& tap : rd_) {
                out.beta[i] = tap(engine);
                out.theta_g[i] = uniform_phase(engine);
                ++i;
            }
        }
    }

    /// Only the source-hop amplitudes of one element (harvesting path).
    template <class Out>
    void sample_source_taps(Engine& engine, Out&& emit)
    {
        for (auto& tap : sr_) {
            emit(tap(engine), uniform_phase(engine));
        }
    }

  private:
    std::vector<NakagamiSampler> sr_;
    std::vector<NakagamiSampler> rd_;
};

inline ChannelRealization sample_link_realization(const ChannelProfile& profile, int n_elements, Engine& engine)
{
    LinkSampler sampler(profile);
    ChannelRealization out;
    sampler.sample(n_elements, engine, out);
    return out;
}

}  // namespace dcsk
