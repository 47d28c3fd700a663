#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <cstdint>
#include <optional>
#include <vector>

#include "analytics.hpp"
#include "random.hpp"
#include "ris.hpp"
#include "system.hpp"

namespace dcsk::analytics {

/// Lambda draws for the configured surface and channel. The i-th draw is the
/// same for every waveform, so curves evaluated over one sample are
/// comparable point by point.
inline std::vector<double> sample_lambdas(const SystemConfig& config, std::uint64_t draws)
{
    require(draws >= 1, "need at least one channel draw");
    const int m = config.ris.m_it;
    if (m == 0) {
        return std::vector<double>(draws, 0.0);
    }
    auto parts = run_batches<std::vector<double>>(
        draws, config.sim.batch_size, config.sim.threads, [&](std::uint64_t batch, std::uint64_t n) {
            Engine engine = make_engine(config.sim.seed, Stream::SemiAnalytic, batch);
            std::optional<LinkSampler> sampler;
            if (config.channel_model == ChannelModel::Nakagami) {
                sampler.emplace(config.profile);
            }
            std::vector<double> theta;
            ChannelRealization r;
            std::vector<double> out;
            out.reserve(n);
            for (std::uint64_t t = 0; t < n; ++t) {
                phase_error_sample(config.ris.phase_error, m, engine, theta);
                if (sampler) {
                    sampler->sample(m, engine, r);
                    out.push_back(lambda_fading(theta, r, m));
                } else {
                    out.push_back(lambda_awgn(theta));
                }
            }
            return out;
        });
    std::vector<double> lambdas;
    lambdas.reserve(draws);
    for (auto& p : parts) {
        lambdas.insert(lambdas.end(), p.begin(), p.end());
    }
    return lambdas;
}

/// Mean of BER(Lambda) over an empirical Lambda sample.
inline double average_conditional_ber(const std::vector<double>& lambdas, const WaveformParams& params,
                                      double gamma0_linear)
{
    double sum = 0.0;
    for (double l : lambdas) {
        sum += conditional_ber(l, params, gamma0_linear);
    }
    return sum / static_cast<double>(lambdas.size());
}

/// Average BER over the Lambda distribution, evaluated as a Monte Carlo
/// average of the conditional BER over channel draws.
inline double ber_fading_semi_analytic(const SystemConfig& config, std::uint64_t channel_draws)
{
    ensure_valid(config);
    return average_conditional_ber(sample_lambdas(config, channel_draws), config.waveform, operating_gamma0(config));
}

/// SNR per bit at reference length phi. With a fixed gamma0 this is constant;
/// with a fixed N0 it grows with the symbol energy.
inline double gamma0_at(const SystemConfig& config, int phi)
{
    if (config.gamma0_db) {
        return db_to_linear(*config.gamma0_db);
    }
    WaveformParams w{config.waveform.beta, phi};
    return gamma0(config.tx, config.geometry, w, config.n0);
}

/// Deterministic Lambda for the configured phase model (AWGN evaluator).
/// Random phases use their mean, M.
inline double representative_lambda(const SystemConfig& config)
{
    const int m = config.ris.m_it;
    if (m == 0) {
        return 0.0;
    }
    if (!is_deterministic(config.ris.phase_error)) {
        return static_cast<double>(m);
    }
    Engine unused(0);
    return lambda_awgn(phase_error_sample(config.ris.phase_error, m, unused));
}

struct RegionPoint
{
    int phi = 0;
    int zeta = 0;
    double sr = 0.0;
    double p_harv_watts = 0.0;
    bool feasible = false;
};

struct RegionReport
{
    std::vector<RegionPoint> points;  ///< divisors of beta in [1, phi_min]
    double phi_min_real = 0.0;
    int phi_min_divisor = 0;
    double lambda_ref = 0.0;
    std::optional<int> phi_a;  ///< smallest grid phi meeting the BER target
    std::optional<int> phi_b;  ///< largest divisor >= phi_min meeting the BER target
    std::optional<int> feasible_low;
    std::optional<int> feasible_high;
    double power_threshold = 0.0;

    [[nodiscard]] bool any_feasible() const noexcept { return feasible_low.has_value(); }
};

namespace detail {

/// Minimizing reference length. With a fixed N0, gamma0 depends on phi
/// itself, so iterate phi <- phi_min(beta, gamma0(phi), Lambda) from phi =
/// beta; the map is monotone and bounded, and converges in a few steps.
inline double self_consistent_phi_min(const SystemConfig& config, double lambda)
{
    const double beta = config.waveform.beta;
    if (config.gamma0_db) {
        return phi_min(beta, db_to_linear(*config.gamma0_db), lambda);
    }
    const WaveformParams w{config.waveform.beta, config.waveform.beta};
    const double per_chip = gamma0(config.tx, config.geometry, w, config.n0) / static_cast<double>(w.frame_length());
    double phi = beta;
    for (int it = 0; it < 200; ++it) {
        const double next = phi_min(beta, per_chip * (beta + phi), lambda);
        if (std::abs(next - phi) < 1e-12 * beta) {
            return next;
        }
        phi = next;
    }
    return phi;
}

}  // namespace detail

/// Success-rate / harvested-power trade-off for the configured (M, K) split
/// over reference lengths phi in [1, phi_min] dividing beta.
inline RegionReport sr_pharv_region(const SystemConfig& config, double ber0)
{
    ensure_valid(config);
    require(ber0 > 0.0 && ber0 < 0.5, "BER target must lie in (0, 1/2)");
    const int beta = config.waveform.beta;
    const int m = config.ris.m_it;
    const int k = config.ris.k_eh();

    std::vector<double> lambdas;
    RegionReport report;
    if (config.sim.ber_evaluator == BerEvaluator::SemiAnalytic) {
        lambdas = sample_lambdas(config, config.sim.trials);
        double sum = 0.0;
        for (double l : lambdas) {
            sum += l;
        }
        report.lambda_ref = sum / static_cast<double>(lambdas.size());
    } else {
        report.lambda_ref = representative_lambda(config);
    }

    const auto ber_at = [&](int phi) {
        const WaveformParams w{beta, phi};
        const double g = gamma0_at(config, phi);
        if (lambdas.empty()) {
            return conditional_ber(report.lambda_ref, w, g);
        }
        return average_conditional_ber(lambdas, w, g);
    };

    report.phi_min_real = report.lambda_ref > 0.0 ? detail::self_consistent_phi_min(config, report.lambda_ref) : 1.0;
    report.phi_min_divisor = phi_feasible(beta, report.phi_min_real);
    report.power_threshold = power_requirement(config.budget, m);

    for (int phi : divisors(beta)) {
        const bool in_grid = static_cast<double>(phi) <= report.phi_min_real || phi == 1;
        const double ber = ber_at(phi);
        if (!in_grid) {
            if (ber <= ber0) {
                report.phi_b = phi;
            }
            continue;
        }
        const WaveformParams w{beta, phi};
        RegionPoint point;
        point.phi = phi;
        point.zeta = w.zeta();
        point.sr = 1.0 - ber;
        point.p_harv_watts =
            p_harv_analytic(k, upsilon(w, config.profile, config.eh, config.geometry, config.tx), config.eh.r_load);
        const bool meets_ber = ber <= ber0;
        point.feasible = meets_ber && point.p_harv_watts >= report.power_threshold;
        if (meets_ber && !report.phi_a) {
            report.phi_a = phi;
        }
        if (point.feasible) {
            if (!report.feasible_low) {
                report.feasible_low = phi;
            }
            report.feasible_high = phi;
        }
        report.points.push_back(point);
    }
    return report;
}

struct PartitionEntry
{
    int m_it = 0;
    int k_eh = 0;
    std::optional<std::int64_t> k_min;
    double ber = 0.5;
    bool feasible = false;
};

struct PartitionPlan
{
    std::vector<PartitionEntry> entries;  ///< one per M in [0, N]

    [[nodiscard]] std::vector<PartitionEntry> feasible() const
    {
        std::vector<PartitionEntry> out;
        std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                     [](const PartitionEntry& e) { return e.feasible; });
        return out;
    }
};

struct PlanOptions
{
    /// Evaluate BER(M) with the configured phase model and evaluator instead
    /// of the best case Lambda = M^2.
    bool use_configured_phase = false;
};

/// For every split M + K = N of the surface: the minimum harvesting count
/// K_min, the BER reached with M reflecting elements, and whether both the
/// BER target and K_min <= N - M hold.
inline PartitionPlan plan_partition(const SystemConfig& config, double ber0, PlanOptions options = {})
{
    ensure_valid(config);
    require(ber0 > 0.0 && ber0 <= 0.5, "BER target must lie in (0, 1/2]");
    const auto& w = config.waveform;
    const double ups = upsilon(w, config.profile, config.eh, config.geometry, config.tx);
    const double g = operating_gamma0(config);

    PartitionPlan plan;
    for (int m = 0; m <= config.ris.n_total; ++m) {
        PartitionEntry e;
        e.m_it = m;
        e.k_eh = config.ris.n_total - m;
        e.k_min = k_min(energy_requirement(config.budget, m), ups, config.eh.r_load);
        if (m == 0) {
            e.ber = 0.5;
        } else if (options.use_configured_phase) {
            SystemConfig at_m = config;
            at_m.ris.m_it = m;
            if (auto* ev = std::get_if<ExplicitVector>(&at_m.ris.phase_error); ev) {
                ev->theta.resize(static_cast<std::size_t>(m), 0.0);
            }
            if (config.sim.ber_evaluator == BerEvaluator::SemiAnalytic) {
                e.ber = average_conditional_ber(sample_lambdas(at_m, config.sim.trials), w, g);
            } else {
                e.ber = conditional_ber(representative_lambda(at_m), w, g);
            }
        } else {
            e.ber = conditional_ber(static_cast<double>(m) * m, w, g);
        }
        e.feasible = e.ber <= ber0 && e.k_min.has_value() && *e.k_min <= e.k_eh;
        plan.entries.push_back(e);
    }
    return plan;
}

}  // namespace dcsk::analytics
