#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "error.hpp"
#include "fading.hpp"
#include "random.hpp"

namespace dcsk {

/// Every IT element sees the same residual phase.
struct CommonPhase
{
    double theta = 0.0;
    friend bool operator==(const CommonPhase&, const CommonPhase&) = default;
};

/// Residual phases alternate 0, pi/2, 0, pi/2, ... so neighbouring elements
/// are in quadrature. For M <= 2 this gives Lambda = M exactly.
struct OrthogonalPairs
{
    friend bool operator==(const OrthogonalPairs&, const OrthogonalPairs&) = default;
};

/// Independent uniform phases on [0, 2*pi): no phase control at all.
struct UniformRandom
{
    friend bool operator==(const UniformRandom&, const UniformRandom&) = default;
};

struct ExplicitVector
{
    std::vector<double> theta;
    friend bool operator==(const ExplicitVector&, const ExplicitVector&) = default;
};

using PhaseErrorModel = std::variant<CommonPhase, OrthogonalPairs, UniformRandom, ExplicitVector>;

/// Elements [0, m_it) reflect toward the receiver; [m_it, n_total) absorb and
/// harvest.
struct RisPartition
{
    int n_total = 100;
    int m_it = 70;
    PhaseErrorModel phase_error = CommonPhase{};

    [[nodiscard]] int k_eh() const noexcept { return n_total - m_it; }

    /// Reflection coefficient of element `index`: e^{j theta} on the IT
    /// section, zero (fully absorbing) on the EH section.
    [[nodiscard]] std::complex<double> reflection(int index, double theta) const
    {
        require(index >= 0 && index < n_total, "element index out of range");
        return index < m_it ? std::polar(1.0, theta) : std::complex<double>{};
    }

    friend bool operator==(const RisPartition&, const RisPartition&) = default;
};

inline RisPartition partition(int n_total, int m_it, PhaseErrorModel model = CommonPhase{})
{
    require(n_total >= 0 && m_it >= 0 && m_it <= n_total, "partition requires 0 <= M <= N");
    return RisPartition{n_total, m_it, std::move(model)};
}

/// Fills `out` with M residual phases under `model`.
inline void phase_error_sample(const PhaseErrorModel& model, int m_it, Engine& engine, std::vector<double>& out)
{
    require(m_it >= 1, "phase errors need at least one IT element");
    const auto m = static_cast<std::size_t>(m_it);
    out.resize(m);
    std::visit(
        [&](const auto& mdl) {
            using T = std::decay_t<decltype(mdl)>;
            if constexpr (std::is_same_v<T, CommonPhase>) {
                std::fill(out.begin(), out.end(), mdl.theta);
            } else if constexpr (std::is_same_v<T, OrthogonalPairs>) {
                for (std::size_t i = 0; i < m; ++i) {
                    out[i] = (i % 2 == 0) ? 0.0 : 0.5 * std::numbers::pi;
                }
            } else if constexpr (std::is_same_v<T, UniformRandom>) {
                for (auto& t : out) {
                    t = uniform_phase(engine);
                }
            } else {
                require(mdl.theta.size() == m, "explicit phase vector length must equal M");
                std::copy(mdl.theta.begin(), mdl.theta.end(), out.begin());
            }
        },
        model);
}

inline std::vector<double> phase_error_sample(const PhaseErrorModel& model, int m_it, Engine& engine)
{
    std::vector<double> out;
    phase_error_sample(model, m_it, engine, out);
    return out;
}

/// True when the model never consumes randomness.
inline bool is_deterministic(const PhaseErrorModel& model) noexcept
{
    return !std::holds_alternative<UniformRandom>(model);
}

/// Lambda = |sum_m e^{j theta_m}|^2, in [0, M^2].
inline double lambda_awgn(std::span<const double> theta)
{
    require(!theta.empty(), "lambda_awgn needs at least one phase");
    std::complex<double> sum{};
    for (double t : theta) {
        sum += std::polar(1.0, t);
    }
    return std::norm(sum);
}

/// Lambda = sum_p sum_q |sum_{m<M} e^{j theta_m} alpha_{p,m} beta_{m,q}|^2.
/// theta absorbs both hop phases, so only amplitudes are read.
inline double lambda_fading(std::span<const double> theta, const ChannelRealization& r, int m_it)
{
    require(m_it >= 1 && static_cast<int>(theta.size()) == m_it, "theta length must equal M");
    require(r.n >= m_it, "realization does not cover M elements");
    double lambda = 0.0;
    for (int p = 0; p < r.l_sr; ++p) {
        for (int q = 0; q < r.l_rd; ++q) {
            std::complex<double> sum{};
            for (int m = 0; m < m_it; ++m) {
                sum += std::polar(r.alpha_at(p, m) * r.beta_at(m, q), theta[static_cast<std::size_t>(m)]);
            }
            lambda += std::norm(sum);
        }
    }
    return lambda;
}

/// sum_p sum_q sum_m e^{j theta_m} alpha_{p,m} beta_{m,q}: the gain seen when
/// all paths arrive at the same instant and add coherently.
inline std::complex<double> coherent_channel_sum(std::span<const double> theta, const ChannelRealization& r,
                                                 int m_it)
{
    require(m_it >= 1 && static_cast<int>(theta.size()) == m_it, "theta length must equal M");
    require(r.n >= m_it, "realization does not cover M elements");
    std::complex<double> sum{};
    for (int m = 0; m < m_it; ++m) {
        double a = 0.0;
        for (int p = 0; p < r.l_sr; ++p) {
            a += r.alpha_at(p, m);
        }
        double b = 0.0;
        for (int q = 0; q < r.l_rd; ++q) {
            b += r.beta_at(m, q);
        }
        sum += std::polar(a * b, theta[static_cast<std::size_t>(m)]);
    }
    return sum;
}

/// Consumption of the surface: M reflecting elements plus the controller.
struct PowerBudget
{
    double p_inf = 2e-6;     ///< per IT element [W]
    double p_cont = 50e-3;   ///< controller [W]
    double t_horizon = 1.0;  ///< [s]

    friend bool operator==(const PowerBudget&, const PowerBudget&) = default;
};

/// M * P_inf + P_cont [W].
inline double power_requirement(const PowerBudget& budget, int m_it)
{
    require(m_it >= 0, "M must be >= 0");
    return static_cast<double>(m_it) * budget.p_inf + budget.p_cont;
}

/// E_req = T (M * P_inf + P_cont) [J].
inline double energy_requirement(const PowerBudget& budget, int m_it)
{
    return budget.t_horizon * power_requirement(budget, m_it);
}

}  // namespace dcsk
