#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analytics.hpp"
#include "chaos.hpp"
#include "fading.hpp"
#include "ris.hpp"

namespace dcsk {

enum class ChannelModel { Awgn, Nakagami };

/// How the Monte Carlo harvester combines source-hop taps at an element.
enum class HarvestMode {
    AmplitudeCoherent,  ///< H = sum_p alpha_p (the closed-form assumption)
    ComplexPhase,       ///< H = |sum_p alpha_p e^{j theta_p}|
};

/// How the receiver sees the multipath gain.
enum class Combining {
    PathResolved,  ///< per-path energies add: |gain|^2 = Lambda
    Coherent,      ///< all paths superpose in one chip: gain = sum of paths
};

/// BER evaluator for the region and partition planners.
enum class BerEvaluator { Awgn, SemiAnalytic };

struct SimulationSettings
{
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;  ///< 0: hardware concurrency
    std::uint64_t batch_size = 10000;
    HarvestMode harvest_mode = HarvestMode::AmplitudeCoherent;
    Combining combining = Combining::PathResolved;
    BerEvaluator ber_evaluator = BerEvaluator::Awgn;

    friend bool operator==(const SimulationSettings&, const SimulationSettings&) = default;
};

/// Full description of one experiment point.
struct SystemConfig
{
    WaveformParams waveform{40, 20};
    int chip_stride = kDefaultChipStride;
    TransmitConfig tx{};
    LinkGeometry geometry{};
    ChannelModel channel_model = ChannelModel::Nakagami;
    ChannelProfile profile{};
    RisPartition ris{};
    EhCircuitParams eh{};
    PowerBudget budget{};
    std::optional<double> gamma0_db = 4.0;  ///< when set, N0 is back-solved from it
    double n0 = 1e-12;                      ///< used only when gamma0_db is unset
    SimulationSettings sim{};

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Every violated invariant, in a stable order.
inline std::vector<std::string> validate(const SystemConfig& c)
{
    std::vector<std::string> out;
    if (!WaveformParams::is_valid(c.waveform.beta, c.waveform.phi)) {
        out.push_back("waveform: need beta >= phi >= 1 and phi dividing beta (beta=" + std::to_string(c.waveform.beta) +
                      ", phi=" + std::to_string(c.waveform.phi) + ")");
    }
    if (c.chip_stride < 1) {
        out.emplace_back("waveform.chip_stride must be >= 1");
    }
    if (!(c.tx.p_t > 0.0)) {
        out.emplace_back("tx.p_t must be > 0");
    }
    if (!(c.tx.t_c > 0.0)) {
        out.emplace_back("tx.t_c must be > 0");
    }
    if (!(c.tx.chip_second_moment > 0.0)) {
        out.emplace_back("tx.chip_second_moment must be > 0");
    }
    const auto& g = c.geometry;
    if (!(g.c0 > 0.0) || !(g.d_sr > 0.0) || !(g.d_rd > 0.0) || !(g.alpha_sr > 0.0) || !(g.alpha_rd > 0.0)) {
        out.emplace_back("geometry: c0, distances and exponents must be > 0");
    }
    for (auto& v : c.profile.violations()) {
        out.push_back("channel: " + v);
    }
    if (c.ris.n_total < 0 || c.ris.m_it < 0 || c.ris.m_it > c.ris.n_total) {
        out.emplace_back("ris: need 0 <= M <= N");
    }
    if (const auto* e = std::get_if<ExplicitVector>(&c.ris.phase_error); e && static_cast<int>(e->theta.size()) != c.ris.m_it) {
        out.emplace_back("ris.phase_error: explicit vector length must equal M");
    }
    if (!(c.eh.nu1 >= 0.0) || !(c.eh.nu2 >= 0.0) || !(c.eh.r_load > 0.0)) {
        out.emplace_back("eh: need nu1, nu2 >= 0 and r_load > 0");
    }
    if (!(c.budget.p_inf >= 0.0) || !(c.budget.p_cont >= 0.0) || !(c.budget.t_horizon > 0.0)) {
        out.emplace_back("budget: need p_inf, p_cont >= 0 and t > 0");
    }
    if (c.gamma0_db && !std::isfinite(*c.gamma0_db)) {
        out.emplace_back("noise.gamma0_db must be finite");
    }
    if (!c.gamma0_db && !(c.n0 > 0.0)) {
        out.emplace_back("noise.n0 must be > 0");
    }
    if (c.sim.trials < 1) {
        out.emplace_back("sim.trials must be >= 1");
    }
    if (c.sim.batch_size < 1) {
        out.emplace_back("sim.batch_size must be >= 1");
    }
    return out;
}

inline void ensure_valid(const SystemConfig& c)
{
    if (auto v = validate(c); !v.empty()) {
        throw ConfigError(std::move(v));
    }
}

/// End-to-end amplitude scale delta.
inline double delta_of(const SystemConfig& c)
{
    return composite_delta(c.tx.p_t, c.geometry);
}

/// N0 in force: back-solved from gamma0_db when set, else the explicit value.
inline double noise_n0(const SystemConfig& c)
{
    if (c.gamma0_db) {
        return analytics::n0_for_gamma0(c.tx, c.geometry, c.waveform, db_to_linear(*c.gamma0_db));
    }
    return c.n0;
}

/// Operating SNR per bit (linear) of the configured waveform.
inline double operating_gamma0(const SystemConfig& c)
{
    if (c.gamma0_db) {
        return db_to_linear(*c.gamma0_db);
    }
    return analytics::gamma0(c.tx, c.geometry, c.waveform, c.n0);
}

}  // namespace dcsk
