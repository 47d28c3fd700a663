#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace dcsk {

/// Shape of one SR-DCSK symbol: a reference of `phi` chips followed by
/// zeta = beta / phi modulated replicas. zeta == 1 is classical DCSK.
struct WaveformParams
{
    int beta = 40;  ///< spreading factor (chips in the data part)
    int phi = 20;   ///< reference length (chips)

    [[nodiscard]] static bool is_valid(int beta, int phi) noexcept
    {
        return beta >= 1 && phi >= 1 && phi <= beta && beta % phi == 0;
    }

    [[nodiscard]] static WaveformParams make(int beta, int phi)
    {
        require(is_valid(beta, phi), "waveform requires beta >= phi >= 1 and phi | beta");
        return WaveformParams{beta, phi};
    }

    [[nodiscard]] int zeta() const noexcept { return beta / phi; }
    [[nodiscard]] int frame_length() const noexcept { return phi + beta; }
    [[nodiscard]] bool is_classical() const noexcept { return phi == beta; }

    friend bool operator==(const WaveformParams&, const WaveformParams&) = default;
};

/// Transmit-side constants entering the bit energy.
struct TransmitConfig
{
    double p_t = 1.0;                 ///< transmit power [W]
    double t_c = 1.0;                 ///< chip duration [s]
    double chip_second_moment = 0.5;  ///< E{x^2} under the Chebyshev invariant density

    friend bool operator==(const TransmitConfig&, const TransmitConfig&) = default;
};

/// One transmitted symbol: [reference | bit*reference repeated zeta times].
class ChaoticFrame
{
  public:
    ChaoticFrame(WaveformParams params, int bit, std::vector<double> chips)
        : params_(params), bit_(bit), chips_(std::move(chips))
    {
    }

    [[nodiscard]] const WaveformParams& params() const noexcept { return params_; }
    [[nodiscard]] int bit() const noexcept { return bit_; }
    [[nodiscard]] std::span<const double> chips() const noexcept { return chips_; }
    [[nodiscard]] std::span<const double> reference() const noexcept
    {
        return std::span<const double>(chips_).first(static_cast<std::size_t>(params_.phi));
    }
    /// Data block b in [0, zeta).
    [[nodiscard]] std::span<const double> data_block(int b) const
    {
        require(b >= 0 && b < params_.zeta(), "data block index out of range");
        const auto phi = static_cast<std::size_t>(params_.phi);
        return std::span<const double>(chips_).subspan(phi * (static_cast<std::size_t>(b) + 1), phi);
    }

  private:
    WaveformParams params_;
    int bit_;
    std::vector<double> chips_;
};

/// One step of the Chebyshev map T3(x) = 4x^3 - 3x.
inline double chebyshev_next(double x)
{
    require(std::isfinite(x) && std::abs(x) <= 1.0, "chebyshev_next requires |x| <= 1");
    return x * (4.0 * x * x - 3.0);
}

/// Draw from the invariant density 1/(pi*sqrt(1-x^2)); never returns -1, 0 or 1.
inline double invariant_chip(Engine& engine)
{
    for (;;) {
        const double x = std::cos(std::numbers::pi * uniform_open01(engine));
        if (x != 0.0 && std::abs(x) < 1.0) {
            return x;
        }
    }
}

/// Default number of map iterations between consecutive emitted chips.
/// Consecutive Chebyshev iterates satisfy E{x_k^3 x_(k+1)} = 1/8; with a
/// stride of 2 (the degree-9 map) all mixed moments up to fourth order vanish.
inline constexpr int kDefaultChipStride = 2;

/// Chaotic reference of `phi` chips. x0 is drawn from the invariant density
/// and chips are taken immediately, with no burn-in. If rounding ever drives
/// the orbit onto a fixed point or outside (-1, 1), it restarts from a fresh
/// invariant draw.
inline std::vector<double> generate_reference(int phi, Engine& engine, int stride = kDefaultChipStride)
{
    require(phi >= 1, "generate_reference requires phi >= 1");
    require(stride >= 1, "chip stride must be >= 1");
    std::vector<double> chips(static_cast<std::size_t>(phi));
    double x = invariant_chip(engine);
    for (auto& chip : chips) {
        chip = x;
        for (int s = 0; s < stride; ++s) {
            x = x * (4.0 * x * x - 3.0);
        }
        if (!(std::abs(x) < 1.0) || x == 0.0) {
            x = invariant_chip(engine);
        }
    }
    return chips;
}

inline ChaoticFrame build_frame(const WaveformParams& params, int bit, std::span<const double> reference)
{
    require(bit == 1 || bit == -1, "bit must be +1 or -1");
    require(reference.size() == static_cast<std::size_t>(params.phi), "reference length must equal phi");
    std::vector<double> chips;
    chips.reserve(static_cast<std::size_t>(params.frame_length()));
    chips.insert(chips.end(), reference.begin(), reference.end());
    for (int b = 0; b < params.zeta(); ++b) {
        for (double x : reference) {
            chips.push_back(bit * x);
        }
    }
    return ChaoticFrame(params, bit, std::move(chips));
}

/// E_b = P_t * T_c * (beta + phi) * E{x^2}.
inline double bit_energy(const TransmitConfig& tx, const WaveformParams& params) noexcept
{
    return tx.p_t * tx.t_c * static_cast<double>(params.frame_length()) * tx.chip_second_moment;
}

}  // namespace dcsk
