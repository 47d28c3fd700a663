#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "analytics.hpp"
#include "chaos.hpp"
#include "error.hpp"
#include "fading.hpp"
#include "random.hpp"
#include "ris.hpp"
#include "system.hpp"

namespace dcsk {

using Complex = std::complex<double>;

struct BerEstimate
{
    double ber = 0.0;
    double std_error = 0.0;
    std::uint64_t trials_run = 0;
    std::uint64_t errors = 0;
};

struct HarvestEstimate
{
    double p_harv_watts = 0.0;
    std::vector<double> per_element_vout;
    std::uint64_t symbols_used = 0;
};

/// Composite receive gain for an AWGN surface: delta * sum_m e^{j theta_m}.
inline Complex composite_gain_awgn(std::span<const double> theta, double delta)
{
    Complex sum{};
    for (double t : theta) {
        sum += std::polar(1.0, t);
    }
    return delta * sum;
}

/// Composite receive gain through a faded surface. Under PathResolved
/// combining the magnitude is delta * sqrt(Lambda), i.e. per-path energies
/// add as when path delays decorrelate the chips; the phase is that of the
/// coherent sum. Under Coherent combining all paths superpose.
inline Complex composite_gain(std::span<const double> theta, const ChannelRealization& r, int m_it, double delta,
                              Combining combining)
{
    const Complex coherent = coherent_channel_sum(theta, r, m_it);
    if (combining == Combining::Coherent) {
        return delta * coherent;
    }
    const double magnitude = delta * std::sqrt(lambda_fading(theta, r, m_it));
    return std::polar(magnitude, std::arg(coherent));
}

/// Received chips y_k = gain * s_k + e^{j arg(gain)} w_k.
///
/// w is real Gaussian with variance N0/2 per chip, expressed in the phase
/// reference of the composite channel. Surface-side noise is not modelled,
/// and all path delays are zero.
inline void received_symbol_at_rx(std::span<const double> frame_chips, Complex gain, std::span<const double> noise,
                                  std::vector<Complex>& out)
{
    require(noise.empty() || noise.size() == frame_chips.size(), "noise length must match the frame");
    const Complex noise_phase = std::abs(gain) > 0.0 ? gain / std::abs(gain) : Complex{1.0, 0.0};
    out.resize(frame_chips.size());
    for (std::size_t k = 0; k < frame_chips.size(); ++k) {
        out[k] = gain * frame_chips[k] + (noise.empty() ? Complex{} : noise_phase * noise[k]);
    }
}

inline std::vector<Complex> received_symbol_at_rx(const ChaoticFrame& frame, Complex gain,
                                                  std::span<const double> noise)
{
    std::vector<Complex> out;
    received_symbol_at_rx(frame.chips(), gain, noise, out);
    return out;
}

inline std::vector<Complex> received_symbol_at_rx(const ChaoticFrame& frame, const ChannelRealization& r,
                                                  std::span<const double> theta, double delta,
                                                  std::span<const double> noise,
                                                  Combining combining = Combining::PathResolved)
{
    return received_symbol_at_rx(frame, composite_gain(theta, r, static_cast<int>(theta.size()), delta, combining),
                                 noise);
}

/// lambda = Re sum_b sum_z data(b, z) conj(ref(z)); the single received
/// reference segment is reused by all zeta partial correlations.
inline double decision_statistic(std::span<const Complex> received, const WaveformParams& params)
{
    require(received.size() == static_cast<std::size_t>(params.frame_length()),
            "received length must equal phi + beta");
    const auto phi = static_cast<std::size_t>(params.phi);
    const auto ref = received.first(phi);
    double lambda = 0.0;
    for (int b = 0; b < params.zeta(); ++b) {
        const auto block = received.subspan(phi * (static_cast<std::size_t>(b) + 1), phi);
        for (std::size_t z = 0; z < phi; ++z) {
            lambda += block[z].real() * ref[z].real() + block[z].imag() * ref[z].imag();
        }
    }
    return lambda;
}

/// Hard decision; a zero statistic decides +1.
inline int detect_bit(double lambda) noexcept
{
    return lambda >= 0.0 ? 1 : -1;
}

namespace detail {

/// Per-trial working storage for the receive chain.
struct ReceiveScratch
{
    std::vector<double> theta;
    std::vector<double> noise;
    std::vector<Complex> received;
    ChannelRealization realization;
};

inline Complex draw_gain(const SystemConfig& c, double delta, Engine& engine, LinkSampler* sampler,
                         ReceiveScratch& s)
{
    const int m = c.ris.m_it;
    if (m == 0) {
        return {};
    }
    phase_error_sample(c.ris.phase_error, m, engine, s.theta);
    if (c.channel_model == ChannelModel::Awgn) {
        return composite_gain_awgn(s.theta, delta);
    }
    sampler->sample(m, engine, s.realization);
    return composite_gain(s.theta, s.realization, m, delta, c.sim.combining);
}

}  // namespace detail

/// Monte Carlo BER of the configured link. Trials run in fixed batches with
/// one RNG substream each, so the estimate is identical for any thread count.
inline BerEstimate simulate_ber(const SystemConfig& config)
{
    ensure_valid(config);
    const double delta = delta_of(config);
    const double sigma = std::sqrt(noise_n0(config) / 2.0);
    const auto params = config.waveform;
    const auto chips = static_cast<std::size_t>(params.frame_length());

    auto counts = run_batches<std::uint64_t>(
        config.sim.trials, config.sim.batch_size, config.sim.threads, [&](std::uint64_t batch, std::uint64_t n) {
            Engine engine = make_engine(config.sim.seed, Stream::Ber, batch);
            std::normal_distribution<double> gauss(0.0, sigma);
            std::optional<LinkSampler> sampler;
            if (config.channel_model == ChannelModel::Nakagami) {
                sampler.emplace(config.profile);
            }
            detail::ReceiveScratch s;
            s.noise.resize(chips);
            std::uint64_t errors = 0;
            for (std::uint64_t t = 0; t < n; ++t) {
                const int bit = random_bit(engine);
                const Complex gain = detail::draw_gain(config, delta, engine, sampler ? &*sampler : nullptr, s);
                const auto reference = generate_reference(params.phi, engine, config.chip_stride);
                const auto frame = build_frame(params, bit, reference);
                for (auto& w : s.noise) {
                    w = gauss(engine);
                }
                received_symbol_at_rx(frame.chips(), gain, s.noise, s.received);
                if (detect_bit(decision_statistic(s.received, params)) != bit) {
                    ++errors;
                }
            }
            return errors;
        });

    BerEstimate out;
    for (auto e : counts) {
        out.errors += e;
    }
    out.trials_run = config.sim.trials;
    out.ber = static_cast<double>(out.errors) / static_cast<double>(out.trials_run);
    out.std_error = std::sqrt(out.ber * (1.0 - out.ber) / static_cast<double>(out.trials_run));
    return out;
}

/// Which parts of the received symbol are present; used to isolate the
/// terms of the decision-statistic variance.
struct NoiseMask
{
    bool signal = true;
    bool reference_noise = true;
    bool data_noise = true;
};

struct DecisionStatisticSample
{
    double mean = 0.0;
    double variance = 0.0;
    /// Variance of lambda minus its chip-conditional signal term
    /// zeta * |gain|^2 * d * sum(ref^2). Removes the spread caused by the
    /// random chip energy and leaves only the noise-driven part.
    double noise_variance = 0.0;
    std::uint64_t trials = 0;
};

/// Empirical moments of the decision statistic for a fixed transmitted bit.
inline DecisionStatisticSample simulate_decision_moments(const SystemConfig& config, int bit, NoiseMask mask)
{
    ensure_valid(config);
    require(bit == 1 || bit == -1, "bit must be +1 or -1");
    const double delta = delta_of(config);
    const double sigma = std::sqrt(noise_n0(config) / 2.0);
    const auto params = config.waveform;
    const auto phi = static_cast<std::size_t>(params.phi);
    const auto chips = static_cast<std::size_t>(params.frame_length());

    struct Sums
    {
        double s1 = 0, s2 = 0, r1 = 0, r2 = 0;
    };
    auto parts = run_batches<Sums>(
        config.sim.trials, config.sim.batch_size, config.sim.threads, [&](std::uint64_t batch, std::uint64_t n) {
            Engine engine = make_engine(config.sim.seed, Stream::DecisionMoments, batch);
            std::normal_distribution<double> gauss(0.0, sigma);
            std::optional<LinkSampler> sampler;
            if (config.channel_model == ChannelModel::Nakagami) {
                sampler.emplace(config.profile);
            }
            detail::ReceiveScratch s;
            s.noise.resize(chips);
            Sums acc;
            for (std::uint64_t t = 0; t < n; ++t) {
                Complex gain = detail::draw_gain(config, delta, engine, sampler ? &*sampler : nullptr, s);
                const auto reference = generate_reference(params.phi, engine, config.chip_stride);
                const auto frame = build_frame(params, bit, reference);
                for (std::size_t k = 0; k < chips; ++k) {
                    const double w = gauss(engine);
                    const bool keep = k < phi ? mask.reference_noise : mask.data_noise;
                    s.noise[k] = keep ? w : 0.0;
                }
                // The phase of the noise follows the channel even when the
                // signal itself is switched off.
                const Complex noise_phase = std::abs(gain) > 0.0 ? gain / std::abs(gain) : Complex{1.0, 0.0};
                const Complex applied = mask.signal ? gain : Complex{};
                s.received.resize(chips);
                for (std::size_t k = 0; k < chips; ++k) {
                    s.received[k] = applied * frame.chips()[k] + noise_phase * s.noise[k];
                }
                const double lambda = decision_statistic(s.received, params);
                double energy = 0.0;
                for (double x : reference) {
                    energy += x * x;
                }
                const double signal_term = params.zeta() * std::norm(applied) * bit * energy;
                acc.s1 += lambda;
                acc.s2 += lambda * lambda;
                acc.r1 += lambda - signal_term;
                acc.r2 += (lambda - signal_term) * (lambda - signal_term);
            }
            return acc;
        });

    Sums total;
    for (const auto& p : parts) {
        total.s1 += p.s1;
        total.s2 += p.s2;
        total.r1 += p.r1;
        total.r2 += p.r2;
    }
    const double n = static_cast<double>(config.sim.trials);
    DecisionStatisticSample out;
    out.trials = config.sim.trials;
    out.mean = total.s1 / n;
    out.variance = (total.s2 - n * out.mean * out.mean) / (n - 1.0);
    const double rmean = total.r1 / n;
    out.noise_variance = (total.r2 - n * rmean * rmean) / (n - 1.0);
    return out;
}

/// Output of an ideal delay-and-sum correlator over one symbol.
inline Complex analog_correlate(std::span<const Complex> received_eh, const WaveformParams& params)
{
    require(received_eh.size() == static_cast<std::size_t>(params.frame_length()),
            "correlator input must span phi + beta chips");
    Complex sum{};
    for (const auto& y : received_eh) {
        sum += y;
    }
    return sum;
}

inline double analog_correlate(std::span<const double> received_eh)
{
    double sum = 0.0;
    for (double y : received_eh) {
        sum += y;
    }
    return sum;
}

/// v_out = nu1 E{|y|^2} + nu2 E{|y|^4}.
inline double ehu_dc_voltage(double second_moment, double fourth_moment, const EhCircuitParams& eh)
{
    require(second_moment >= 0.0 && fourth_moment >= 0.0, "moments must be >= 0");
    return eh.nu1 * second_moment + eh.nu2 * fourth_moment;
}

/// Monte Carlo harvested DC power over the K absorbing elements. Each symbol
/// draws a fresh frame and fresh source-hop taps for every element; the
/// correlator output moments are averaged per element, rectified, and the DC
/// outputs combined as sum v^2 / R_L.
inline HarvestEstimate simulate_harvest(const SystemConfig& config)
{
    ensure_valid(config);
    const int k_eh = config.ris.k_eh();
    HarvestEstimate out;
    out.symbols_used = config.sim.trials;
    if (k_eh <= 0) {
        return out;
    }
    const auto params = config.waveform;
    const double amplitude = std::sqrt(source_link_gain(config.tx.p_t, config.geometry));
    const auto k = static_cast<std::size_t>(k_eh);

    struct Sums
    {
        std::vector<double> m2;
        std::vector<double> m4;
    };
    auto parts = run_batches<Sums>(
        config.sim.trials, config.sim.batch_size, config.sim.threads, [&](std::uint64_t batch, std::uint64_t n) {
            Engine engine = make_engine(config.sim.seed, Stream::Harvest, batch);
            std::optional<LinkSampler> sampler;
            if (config.channel_model == ChannelModel::Nakagami) {
                sampler.emplace(config.profile);
            }
            Sums acc{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
            for (std::uint64_t t = 0; t < n; ++t) {
                const int bit = random_bit(engine);
                const auto reference = generate_reference(params.phi, engine, config.chip_stride);
                const auto frame = build_frame(params, bit, reference);
                const double s = analog_correlate(frame.chips());
                for (std::size_t i = 0; i < k; ++i) {
                    double h = 1.0;
                    if (sampler) {
                        if (config.sim.harvest_mode == HarvestMode::AmplitudeCoherent) {
                            double sum = 0.0;
                            sampler->sample_source_taps(engine, [&](double a, double) { sum += a; });
                            h = sum;
                        } else {
                            Complex sum{};
                            sampler->sample_source_taps(engine, [&](double a, double th) { sum += std::polar(a, th); });
                            h = std::abs(sum);
                        }
                    }
                    const double y = amplitude * h * s;
                    const double y2 = y * y;
                    acc.m2[i] += y2;
                    acc.m4[i] += y2 * y2;
                }
            }
            return acc;
        });

    std::vector<double> m2(k, 0.0);
    std::vector<double> m4(k, 0.0);
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < k; ++i) {
            m2[i] += p.m2[i];
            m4[i] += p.m4[i];
        }
    }
    const double n = static_cast<double>(config.sim.trials);
    out.per_element_vout.resize(k);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double v = ehu_dc_voltage(m2[i] / n, m4[i] / n, config.eh);
        out.per_element_vout[i] = v;
        total += v * v;
    }
    out.p_harv_watts = total / config.eh.r_load;
    return out;
}

}  // namespace dcsk
