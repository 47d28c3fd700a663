#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chaos.hpp"
#include "error.hpp"
#include "fading.hpp"
#include "ris.hpp"

namespace dcsk {

/// Rectifier model v_out = nu1 E{|y|^2} + nu2 E{|y|^4} into a load R_L.
struct EhCircuitParams
{
    double nu1 = 0.9207e3;
    double nu2 = 0.0052e9;
    double r_load = 5000.0;

    friend bool operator==(const EhCircuitParams&, const EhCircuitParams&) = default;
};

inline double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

inline double dbm_to_watts(double dbm) noexcept
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

}  // namespace dcsk

namespace dcsk::analytics {

/// Per-link rectifier coefficients mu1 = nu1 P_t C0 d_sr^-a and
/// mu2 = nu2 (P_t C0 d_sr^-a)^2.
struct HarvestCoefficients
{
    double mu1;
    double mu2;
};

inline HarvestCoefficients harvest_coefficients(const EhCircuitParams& eh, const TransmitConfig& tx,
                                                const LinkGeometry& geometry)
{
    const double g = source_link_gain(tx.p_t, geometry);
    return {eh.nu1 * g, eh.nu2 * g * g};
}

/// gamma0 = E_b C0^2 d_sr^-a_sr d_rd^-a_rd / N0.
inline double gamma0(const TransmitConfig& tx, const LinkGeometry& geometry, const WaveformParams& params, double n0)
{
    require(n0 > 0.0, "gamma0 requires N0 > 0");
    return bit_energy(tx, params) * path_loss(geometry.c0, geometry.d_sr, geometry.alpha_sr) *
           path_loss(geometry.c0, geometry.d_rd, geometry.alpha_rd) / n0;
}

/// Inverse of gamma0(): the N0 that yields the requested SNR per bit.
inline double n0_for_gamma0(const TransmitConfig& tx, const LinkGeometry& geometry, const WaveformParams& params,
                            double gamma0_linear)
{
    require(gamma0_linear > 0.0, "gamma0 must be > 0");
    return bit_energy(tx, params) * path_loss(geometry.c0, geometry.d_sr, geometry.alpha_sr) *
           path_loss(geometry.c0, geometry.d_rd, geometry.alpha_rd) / gamma0_linear;
}

/// Psi(phi) = (1+zeta)^2 / (gamma0 zeta Lambda) + (beta+phi)^2 / (2 beta gamma0^2 Lambda^2)
/// with zeta = beta/phi, for real-valued phi in (0, beta].
inline double psi(double beta, double phi, double gamma0, double lambda)
{
    const double zeta = beta / phi;
    return (1.0 + zeta) * (1.0 + zeta) / (gamma0 * zeta * lambda) +
           (beta + phi) * (beta + phi) / (2.0 * beta * gamma0 * gamma0 * lambda * lambda);
}

/// Gaussian-approximation BER conditioned on Lambda, for real-valued phi.
inline double conditional_ber_continuous(double beta, double phi, double gamma0, double lambda)
{
    require(gamma0 > 0.0, "conditional BER requires gamma0 > 0");
    if (!(lambda > 0.0)) {
        return 0.5;
    }
    return 0.5 * std::erfc(1.0 / std::sqrt(psi(beta, phi, gamma0, lambda)));
}

/// BER(Lambda) = 1/2 erfc(Psi^{-1/2}). Lambda <= 0 means no signal: 1/2.
inline double conditional_ber(double lambda, const WaveformParams& params, double gamma0)
{
    return conditional_ber_continuous(params.beta, params.phi, gamma0, lambda);
}

/// AWGN BER with Lambda = |sum e^{j theta}|^2.
inline double ber_awgn(const WaveformParams& params, double gamma0, std::span<const double> theta)
{
    return conditional_ber(lambda_awgn(theta), params, gamma0);
}

/// The unique minimizer of Psi on (0, inf):
/// (gamma0 Lambda / 2)(sqrt(1 + 4 beta / (gamma0 Lambda)) - 1).
inline double phi_min(double beta, double gamma0, double lambda)
{
    require(beta > 0.0 && gamma0 > 0.0 && lambda > 0.0, "phi_min requires positive arguments");
    const double g = gamma0 * lambda;
    // Rationalized form; avoids cancellation when g >> beta.
    return 2.0 * beta / (std::sqrt(1.0 + 4.0 * beta / g) + 1.0);
}

/// dPsi/dphi and d2Psi/dphi2 in closed form (beta fixed, zeta = beta/phi).
inline double psi_first_derivative(double beta, double phi, double gamma0, double lambda)
{
    // Psi = (beta+phi)^2/(gamma0 Lambda beta) * (1/phi + 1/(2 gamma0 Lambda))
    const double g = gamma0 * lambda;
    const double s = beta + phi;
    return (2.0 * s / (g * beta)) * (1.0 / phi + 1.0 / (2.0 * g)) - s * s / (g * beta * phi * phi);
}

inline double psi_second_derivative(double beta, double phi, double gamma0, double lambda)
{
    const double g = gamma0 * lambda;
    return 1.0 / (beta * g * g) + 2.0 * beta / (phi * phi * phi * g);
}

/// Divisors of beta in increasing order.
inline std::vector<int> divisors(int beta)
{
    require(beta >= 1, "divisors requires beta >= 1");
    std::vector<int> low;
    std::vector<int> high;
    for (int d = 1; d * d <= beta; ++d) {
        if (beta % d == 0) {
            low.push_back(d);
            if (d != beta / d) {
                high.push_back(beta / d);
            }
        }
    }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

/// Divisor of beta closest to phi_real; ties go to the smaller divisor.
inline int phi_feasible(int beta, double phi_real)
{
    require(phi_real > 0.0, "phi_feasible requires phi > 0");
    int best = 1;
    double best_gap = std::abs(phi_real - 1.0);
    for (int d : divisors(beta)) {
        const double gap = std::abs(phi_real - static_cast<double>(d));
        if (gap < best_gap) {
            best = d;
            best_gap = gap;
        }
    }
    return best;
}

/// Mean and variance of the decision statistic given Lambda, split by term.
struct DecisionMoments
{
    double mean = 0.0;                  ///< zeta phi delta^2 E{x^2} Lambda d
    double reference_noise_var = 0.0;   ///< zeta^2 phi delta^2 (N0/2) E{x^2} Lambda
    double data_noise_var = 0.0;        ///< zeta phi delta^2 (N0/2) E{x^2} Lambda
    double noise_product_var = 0.0;     ///< zeta phi N0^2 / 4

    [[nodiscard]] double variance() const noexcept
    {
        return reference_noise_var + data_noise_var + noise_product_var;
    }
};

inline DecisionMoments decision_moments(const WaveformParams& params, double delta, double n0, double lambda,
                                        double chip_second_moment, int bit = 1)
{
    const double zeta = params.zeta();
    const double phi = params.phi;
    const double signal = delta * delta * chip_second_moment * lambda;
    return DecisionMoments{
        zeta * phi * signal * bit,
        zeta * zeta * phi * signal * 0.5 * n0,
        zeta * phi * signal * 0.5 * n0,
        zeta * phi * n0 * n0 * 0.25,
    };
}

/// Same moments written through gamma0:
/// mean = beta/(beta+phi) gamma0 N0 Lambda,
/// var  = beta N0^2 / 2 (Lambda gamma0 (zeta+1)/(beta+phi) + 1/2).
inline DecisionMoments decision_moments_snr_form(const WaveformParams& params, double gamma0, double n0,
                                                 double lambda)
{
    const double beta = params.beta;
    const double phi = params.phi;
    const double zeta = params.zeta();
    DecisionMoments out;
    out.mean = beta / (beta + phi) * gamma0 * n0 * lambda;
    const double total = beta * n0 * n0 / 2.0 * (lambda * gamma0 * (zeta + 1.0) / (beta + phi) + 0.5);
    out.noise_product_var = beta * n0 * n0 / 4.0;
    // Split the signal-by-noise part in the ratio zeta : 1.
    const double cross = total - out.noise_product_var;
    out.reference_noise_var = cross * zeta / (zeta + 1.0);
    out.data_noise_var = cross / (zeta + 1.0);
    return out;
}

/// All tuples of `l` nonnegative integers summing to `total`, in
/// lexicographically decreasing order.
inline std::vector<std::vector<int>> compositions(int l, int total = 4)
{
    require(l >= 1 && total >= 0, "compositions requires l >= 1, total >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(l), 0);
    auto recurse = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == l - 1) {
            current[static_cast<std::size_t>(pos)] = remaining;
            out.push_back(current);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            current[static_cast<std::size_t>(pos)] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    recurse(recurse, 0, total);
    return out;
}

/// E{S^2} for S the sum of all chips of a frame: phi (1 + zeta^2) / 2.
inline double chip_sum_moment2(const WaveformParams& params) noexcept
{
    const double zeta = params.zeta();
    return params.phi * (1.0 + zeta * zeta) / 2.0;
}

/// E{S^4} = (3 phi / 8)(1 + 6 zeta^2 + zeta^4)(2 phi - 1).
inline double chip_sum_moment4(const WaveformParams& params) noexcept
{
    const double zeta = params.zeta();
    const double z2 = zeta * zeta;
    const double phi = params.phi;
    return 3.0 * phi / 8.0 * (1.0 + 6.0 * z2 + z2 * z2) * (2.0 * phi - 1.0);
}

namespace detail {

inline double gamma_half_ratio(double m)
{
    return std::exp(std::lgamma(m + 0.5) - std::lgamma(m));
}

/// sum over unordered tap pairs p1 < p2 of sqrt(Omega_p1 Omega_p2).
inline double cross_tap_sum(std::span<const double> omega)
{
    double s = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        for (std::size_t j = i + 1; j < omega.size(); ++j) {
            s += std::sqrt(omega[i] * omega[j]);
        }
    }
    return s;
}

inline double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

}  // namespace detail

/// E{H^2}, H = sum_p alpha_p over the source-hop taps.
inline double h_moment2(const ChannelProfile& profile)
{
    const double m = profile.m_s;
    const double ratio = detail::gamma_half_ratio(m);
    double sum_omega = 0.0;
    for (double w : profile.omega_sr) {
        sum_omega += w;
    }
    return sum_omega + 2.0 / m * ratio * ratio * detail::cross_tap_sum(profile.omega_sr);
}

/// E{H^4} by the multinomial expansion over compositions of 4.
inline double h_moment4(const ChannelProfile& profile)
{
    double total = 0.0;
    for (const auto& k : compositions(profile.l_sr(), 4)) {
        double term = 24.0;
        for (std::size_t p = 0; p < k.size(); ++p) {
            term *= nakagami_moment(profile.m_s, profile.omega_sr[p], k[p]) / detail::factorial(k[p]);
        }
        total += term;
    }
    return total;
}

/// Upsilon: the squared per-element DC voltage, assembled term by term from
/// the waveform, channel and rectifier constants.
inline double upsilon(const WaveformParams& params, const ChannelProfile& profile, const EhCircuitParams& eh,
                      const LinkGeometry& geometry, const TransmitConfig& tx)
{
    const auto [mu1, mu2] = harvest_coefficients(eh, tx, geometry);
    const double m = profile.m_s;
    const double phi = params.phi;
    const double zeta = params.zeta();
    const double z2 = zeta * zeta;
    const double ratio = detail::gamma_half_ratio(m);

    const double linear = mu1 * phi * (1.0 + z2) * (0.5 + ratio * ratio / m * detail::cross_tap_sum(profile.omega_sr));

    double multinomial = 0.0;
    for (const auto& k : compositions(profile.l_sr(), 4)) {
        double term = 1.0;
        for (std::size_t p = 0; p < k.size(); ++p) {
            const double kp = k[p];
            term *= std::exp(std::lgamma(m + kp / 2.0) - std::lgamma(m)) * std::pow(profile.omega_sr[p] / m, kp / 2.0) /
                    detail::factorial(k[p]);
        }
        multinomial += term;
    }
    const double quartic = 9.0 * mu2 * phi * (1.0 + 6.0 * z2 + z2 * z2) * (2.0 * phi - 1.0) * multinomial;

    const double v = linear + quartic;
    return v * v;
}

/// P_harv = K Upsilon / R_L.
inline double p_harv_analytic(int k_eh, double upsilon_value, double r_load)
{
    require(k_eh >= 0, "K must be >= 0");
    require(r_load > 0.0, "R_L must be > 0");
    return static_cast<double>(k_eh) * upsilon_value / r_load;
}

/// Flat-fading (single source tap) harvested power in closed form.
inline double p_harv_flat(int k_eh, const WaveformParams& params, const EhCircuitParams& eh, double m_s,
                          const LinkGeometry& geometry, const TransmitConfig& tx)
{
    require(k_eh >= 0, "K must be >= 0");
    const auto [mu1, mu2] = harvest_coefficients(eh, tx, geometry);
    const double phi = params.phi;
    const double zeta = params.zeta();
    const double z2 = zeta * zeta;
    const double bracket = mu1 * phi * (1.0 + z2) / 2.0 +
                           3.0 / 8.0 * mu2 * phi * (1.0 + 6.0 * z2 + z2 * z2) * (2.0 * phi - 1.0) * ((m_s + 1.0) / m_s);
    return static_cast<double>(k_eh) / eh.r_load * bracket * bracket;
}

/// Smallest EH element count with K Upsilon / R_L >= E_req, i.e.
/// ceil(R_L E_req / Upsilon). Empty when Upsilon is zero (no amount of
/// elements suffices). Feasibility against N - M is the caller's check.
inline std::optional<std::int64_t> k_min(double e_req, double upsilon_value, double r_load)
{
    require(e_req >= 0.0 && r_load > 0.0 && upsilon_value >= 0.0, "k_min requires nonnegative inputs");
    if (e_req == 0.0) {
        return 0;
    }
    if (upsilon_value == 0.0) {
        return std::nullopt;
    }
    const double bound = r_load * e_req / upsilon_value;
    if (!std::isfinite(bound) || bound > 9.0e18) {
        return std::nullopt;
    }
    // Absorb rounding in an exactly-integral ratio.
    const double rounded = std::nearbyint(bound);
    if (std::abs(bound - rounded) <= 1e-12 * std::max(1.0, bound)) {
        return static_cast<std::int64_t>(rounded);
    }
    return static_cast<std::int64_t>(std::ceil(bound));
}

}  // namespace dcsk::analytics
