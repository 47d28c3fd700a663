#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "analytics.hpp"
#include "config_io.hpp"
#include "planning.hpp"
#include "random.hpp"
#include "simulator.hpp"
#include "system.hpp"

namespace dcsk {

enum class PresetId { Fig2, Fig3, Fig4, Fig5, Fig6, Fig7, Custom };

inline PresetId parse_preset_id(std::string_view name)
{
    static constexpr std::pair<std::string_view, PresetId> names[] = {
        {"fig2", PresetId::Fig2}, {"fig3", PresetId::Fig3}, {"fig4", PresetId::Fig4},   {"fig5", PresetId::Fig5},
        {"fig6", PresetId::Fig6}, {"fig7", PresetId::Fig7}, {"custom", PresetId::Custom},
    };
    for (const auto& [n, id] : names) {
        if (n == name) {
            return id;
        }
    }
    throw ConfigError({"unknown preset '" + std::string(name) + "' (fig2..fig7, custom)"});
}

inline std::string_view preset_name(PresetId id) noexcept
{
    switch (id) {
        case PresetId::Fig2: return "fig2";
        case PresetId::Fig3: return "fig3";
        case PresetId::Fig4: return "fig4";
        case PresetId::Fig5: return "fig5";
        case PresetId::Fig6: return "fig6";
        case PresetId::Fig7: return "fig7";
        case PresetId::Custom: return "custom";
    }
    return "custom";
}

/// Assignments a preset applies on top of the default configuration, before
/// user overrides.
inline std::vector<std::string> preset_assignments(PresetId id)
{
    switch (id) {
        case PresetId::Fig2:
        case PresetId::Fig3:
            return {"channel.model=awgn", "waveform.beta=40", "noise.gamma0_db=4", "ris.phase_error=common:0", "ris.M=2"};
        case PresetId::Fig4:
            return {"channel.model=awgn", "ris.phase_error=common:0", "ris.M=2", "noise.gamma0_db=7"};
        case PresetId::Fig5:
            return {"channel.model=awgn", "waveform.beta=40", "noise.gamma0_db=16", "ris.phase_error=common:0"};
        case PresetId::Fig6:
            return {"channel.model=nakagami", "channel.m=4", "waveform.beta=40", "ris.N=100", "ris.M=80"};
        case PresetId::Fig7:
            return {"channel.model=nakagami", "channel.m=4",        "channel.omega_sr=0.8,0.2",
                    "channel.omega_rd=0.8,0.2", "ris.N=100",        "ris.M=70",
                    "ris.phase_error=uniform",  "noise.n0=1e-12", "sim.ber_evaluator=semi_analytic"};
        case PresetId::Custom: return {};
    }
    return {};
}

/// Preset base configuration with user overrides applied and validated.
inline SystemConfig preset_config(PresetId id, const std::vector<std::string>& overrides = {})
{
    auto assignments = preset_assignments(id);
    assignments.insert(assignments.end(), overrides.begin(), overrides.end());
    std::string text;
    for (const auto& a : assignments) {
        text += a;
        text += '\n';
    }
    return parse_config_text(text);
}

/// One CSV line. NaN marks a column the preset does not produce.
struct ResultRow
{
    std::string series;
    double sweep_value = 0.0;
    int phi = 0;
    int zeta = 0;
    double phi_min = std::numeric_limits<double>::quiet_NaN();
    double ber_analytic = std::numeric_limits<double>::quiet_NaN();
    double ber_mc = std::numeric_limits<double>::quiet_NaN();
    double ber_mc_stderr = std::numeric_limits<double>::quiet_NaN();
    double p_harv_analytic = std::numeric_limits<double>::quiet_NaN();
    double p_harv_mc = std::numeric_limits<double>::quiet_NaN();
    double sr = std::numeric_limits<double>::quiet_NaN();
    std::optional<bool> feasible;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

struct RunOptions
{
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool monte_carlo = true;  ///< false: analytic columns only
    double ber0 = 0.05;       ///< BER target for presets that report feasibility
};

namespace experiment_detail {

class RowBuilder
{
  public:
    RowBuilder(SystemConfig base, const RunOptions& opts) : base_(std::move(base)), opts_(opts)
    {
        base_.sim.trials = opts.trials;
        base_.sim.threads = opts.threads;
    }

    /// Config for the next row, carrying that row's derived seed.
    SystemConfig next(ResultRow& row)
    {
        row.seed = derive_seed(opts_.seed, index_++);
        SystemConfig c = base_;
        c.sim.seed = row.seed;
        return c;
    }

    [[nodiscard]] const SystemConfig& base() const noexcept { return base_; }
    [[nodiscard]] bool monte_carlo() const noexcept { return opts_.monte_carlo; }

  private:
    SystemConfig base_;
    RunOptions opts_;
    std::uint64_t index_ = 0;
};

inline std::string fmt(double v)
{
    return config_detail::format_double(v);
}

template <class F>
double timed(F&& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline void fill_ber(ResultRow& row, const SystemConfig& c, double lambda, bool mc)
{
    row.ber_analytic = analytics::conditional_ber(lambda, c.waveform, operating_gamma0(c));
    row.sr = 1.0 - row.ber_analytic;
    if (mc) {
        const auto est = simulate_ber(c);
        row.ber_mc = est.ber;
        row.ber_mc_stderr = est.std_error;
    }
}

/// BER against phi over the divisors of beta for one (M, gamma0) series.
inline void phi_sweep_awgn(RowBuilder& rb, std::vector<ResultRow>& rows, const std::string& series, int m,
                           double gamma0_db)
{
    const int beta = rb.base().waveform.beta;
    const double lambda = static_cast<double>(m) * m;
    const double phi_real = analytics::phi_min(beta, db_to_linear(gamma0_db), lambda);
    for (int phi : analytics::divisors(beta)) {
        ResultRow row;
        row.series = series;
        SystemConfig c = rb.next(row);
        c.ris.m_it = m;
        c.waveform.phi = phi;
        c.gamma0_db = gamma0_db;
        row.sweep_value = phi;
        row.phi = phi;
        row.zeta = c.waveform.zeta();
        row.phi_min = phi_real;
        row.runtime_ms = timed([&] { fill_ber(row, c, lambda, rb.monte_carlo()); });
        rows.push_back(std::move(row));
    }
}

inline std::string profile_label(const std::vector<double>& omega)
{
    std::string out;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        out += (i ? "/" : "");
        out += fmt(omega[i]);
    }
    return out;
}

}  // namespace experiment_detail

inline std::vector<ResultRow> run_preset(PresetId id, const SystemConfig& base, const RunOptions& opts)
{
    using namespace experiment_detail;
    RowBuilder rb(base, opts);
    std::vector<ResultRow> rows;
    const bool mc = opts.monte_carlo;

    switch (id) {
        case PresetId::Fig2:
            for (int m = 1; m <= 4; ++m) {
                phi_sweep_awgn(rb, rows, "M=" + std::to_string(m), m, base.gamma0_db.value_or(4.0));
            }
            break;
        case PresetId::Fig3:
            for (double g : {4.0, 7.0, 10.0}) {
                phi_sweep_awgn(rb, rows, "gamma0_db=" + fmt(g), base.ris.m_it, g);
            }
            break;
        case PresetId::Fig4: {
            const std::pair<double, int> cases[] = {{7.0, 2}, {4.0, 5}};
            for (const auto& [g, m] : cases) {
                const std::string tag = "gamma0_db=" + fmt(g) + ";M=" + std::to_string(m);
                const double lambda = static_cast<double>(m) * m;
                for (bool classical : {true, false}) {
                    for (int beta = 10; beta <= 100; beta += 10) {
                        ResultRow row;
                        row.series = tag + (classical ? ";zeta=1" : ";phi_feasible");
                        SystemConfig c = rb.next(row);
                        c.ris.m_it = m;
                        c.gamma0_db = g;
                        row.phi_min = analytics::phi_min(beta, db_to_linear(g), lambda);
                        c.waveform = {beta, classical ? beta : analytics::phi_feasible(beta, row.phi_min)};
                        row.sweep_value = beta;
                        row.phi = c.waveform.phi;
                        row.zeta = c.waveform.zeta();
                        row.runtime_ms = timed([&] { fill_ber(row, c, lambda, mc); });
                        rows.push_back(std::move(row));
                    }
                }
            }
            break;
        }
        case PresetId::Fig5: {
            const int beta = base.waveform.beta;
            const double g = db_to_linear(base.gamma0_db.value_or(16.0));
            for (bool equal : {true, false}) {
                for (int m = 1; m <= 30; ++m) {
                    ResultRow row;
                    row.series = equal ? "equal_phase" : "orthogonal_phase";
                    SystemConfig c = rb.next(row);
                    const double lambda = equal ? static_cast<double>(m) * m : static_cast<double>(m);
                    row.sweep_value = m;
                    row.phi_min = analytics::phi_min(beta, g, lambda);
                    c.waveform = {beta, analytics::phi_feasible(beta, row.phi_min)};
                    row.phi = c.waveform.phi;
                    row.zeta = c.waveform.zeta();
                    row.runtime_ms = timed([&] {
                        row.ber_analytic = analytics::conditional_ber(lambda, c.waveform, g);
                        row.sr = 1.0 - row.ber_analytic;
                    });
                    rows.push_back(std::move(row));
                }
            }
            break;
        }
        case PresetId::Fig6: {
            const std::vector<std::vector<double>> profiles = {{1.0}, {0.8, 0.2}, {0.6, 0.4}, {0.5, 0.5}};
            for (double d_sr : {8.0, 9.0}) {
                for (const auto& omega : profiles) {
                    for (int phi : analytics::divisors(base.waveform.beta)) {
                        ResultRow row;
                        row.series = "omega=" + profile_label(omega) + ";d_sr=" + fmt(d_sr);
                        SystemConfig c = rb.next(row);
                        c.profile.omega_sr = omega;
                        c.geometry.d_sr = d_sr;
                        c.waveform.phi = phi;
                        row.sweep_value = phi;
                        row.phi = phi;
                        row.zeta = c.waveform.zeta();
                        row.runtime_ms = timed([&] {
                            const double ups =
                                analytics::upsilon(c.waveform, c.profile, c.eh, c.geometry, c.tx);
                            row.p_harv_analytic = analytics::p_harv_analytic(c.ris.k_eh(), ups, c.eh.r_load);
                            if (mc) {
                                row.p_harv_mc = simulate_harvest(c).p_harv_watts;
                            }
                        });
                        rows.push_back(std::move(row));
                    }
                }
            }
            break;
        }
        case PresetId::Fig7: {
            for (int beta : {40, 60}) {
                for (double d_rd : {10.0, 14.0}) {
                    ResultRow probe;
                    probe.series = "beta=" + std::to_string(beta) + ";d_rd=" + fmt(d_rd);
                    SystemConfig c = rb.next(probe);
                    c.waveform = {beta, 1};
                    c.geometry.d_rd = d_rd;
                    // Every series shares one channel sample so the curves are
                    // compared on common draws.
                    c.sim.seed = probe.seed = opts.seed;
                    analytics::RegionReport report;
                    const double ms = timed([&] { report = analytics::sr_pharv_region(c, opts.ber0); });
                    for (const auto& p : report.points) {
                        ResultRow row = probe;
                        row.sweep_value = p.phi;
                        row.phi = p.phi;
                        row.zeta = p.zeta;
                        row.phi_min = report.phi_min_real;
                        row.sr = p.sr;
                        row.ber_analytic = 1.0 - p.sr;
                        row.p_harv_analytic = p.p_harv_watts;
                        row.feasible = p.feasible;
                        row.runtime_ms = ms / static_cast<double>(report.points.size());
                        rows.push_back(std::move(row));
                    }
                }
            }
            break;
        }
        case PresetId::Custom: {
            ResultRow row;
            row.series = "custom";
            SystemConfig c = rb.next(row);
            row.sweep_value = c.waveform.phi;
            row.phi = c.waveform.phi;
            row.zeta = c.waveform.zeta();
            row.runtime_ms = timed([&] {
                if (c.ris.m_it > 0) {
                    const double lambda = analytics::representative_lambda(c);
                    row.phi_min = analytics::phi_min(c.waveform.beta, operating_gamma0(c), lambda);
                    if (c.channel_model == ChannelModel::Nakagami || !is_deterministic(c.ris.phase_error)) {
                        row.ber_analytic = analytics::ber_fading_semi_analytic(c, c.sim.trials);
                        row.sr = 1.0 - row.ber_analytic;
                        if (mc) {
                            const auto est = simulate_ber(c);
                            row.ber_mc = est.ber;
                            row.ber_mc_stderr = est.std_error;
                        }
                    } else {
                        fill_ber(row, c, lambda, mc);
                    }
                }
                const double ups = analytics::upsilon(c.waveform, c.profile, c.eh, c.geometry, c.tx);
                row.p_harv_analytic = analytics::p_harv_analytic(c.ris.k_eh(), ups, c.eh.r_load);
                if (mc && c.ris.k_eh() > 0) {
                    row.p_harv_mc = simulate_harvest(c).p_harv_watts;
                }
                row.feasible = row.p_harv_analytic >= power_requirement(c.budget, c.ris.m_it);
            });
            rows.push_back(std::move(row));
            break;
        }
    }
    return rows;
}

inline std::string rows_to_csv(const std::vector<ResultRow>& rows, bool with_runtime = false)
{
    using experiment_detail::fmt;
    const auto num = [](double v) { return std::isnan(v) ? std::string() : fmt(v); };
    std::ostringstream out;
    out << "series,sweep_value,phi,zeta,phi_min,ber_analytic,ber_mc,ber_mc_stderr,p_harv_analytic,p_harv_mc,sr,"
           "feasible,seed";
    if (with_runtime) {
        out << ",runtime_ms";
    }
    out << '\n';
    for (const auto& r : rows) {
        out << r.series << ',' << num(r.sweep_value) << ',' << r.phi << ',' << r.zeta << ',' << num(r.phi_min) << ','
            << num(r.ber_analytic) << ',' << num(r.ber_mc) << ',' << num(r.ber_mc_stderr) << ','
            << num(r.p_harv_analytic) << ',' << num(r.p_harv_mc) << ',' << num(r.sr) << ','
            << (r.feasible ? (*r.feasible ? "true" : "false") : "") << ',' << r.seed;
        if (with_runtime) {
            out << ',' << num(r.runtime_ms);
        }
        out << '\n';
    }
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

/// Per-series digest: BER-minimizing phi, harvest-maximizing phi, and the
/// feasible interval [phi_a, phi_min] (null when empty).
inline nlohmann::ordered_json emit_summary(const std::vector<ResultRow>& rows, const std::string& config_hash_hex)
{
    require(!rows.empty(), "summary needs at least one row");
    nlohmann::ordered_json doc;
    doc["config_hash"] = config_hash_hex;
    auto& series_out = doc["series"] = nlohmann::ordered_json::array();

    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (std::find(order.begin(), order.end(), r.series) == order.end()) {
            order.push_back(r.series);
        }
    }
    for (const auto& name : order) {
        std::optional<int> argmin_ber;
        std::optional<int> argmax_pharv;
        std::optional<int> phi_a;
        std::optional<int> phi_hi;
        double best_ber = std::numeric_limits<double>::infinity();
        double best_p = -std::numeric_limits<double>::infinity();
        for (const auto& r : rows) {
            if (r.series != name) {
                continue;
            }
            if (!std::isnan(r.ber_analytic) && r.ber_analytic < best_ber) {
                best_ber = r.ber_analytic;
                argmin_ber = r.phi;
            }
            if (!std::isnan(r.p_harv_analytic) && r.p_harv_analytic > best_p) {
                best_p = r.p_harv_analytic;
                argmax_pharv = r.phi;
            }
            if (r.feasible.value_or(false)) {
                if (!phi_a || r.phi < *phi_a) {
                    phi_a = r.phi;
                }
                if (!phi_hi || r.phi > *phi_hi) {
                    phi_hi = r.phi;
                }
            }
        }
        const auto opt = [](const std::optional<int>& v) {
            return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        nlohmann::ordered_json s;
        s["series"] = name;
        s["argmin_ber_phi"] = opt(argmin_ber);
        s["argmax_pharv_phi"] = opt(argmax_pharv);
        s["feasible"] = phi_a.has_value();
        s["phi_a"] = opt(phi_a);
        s["phi_min"] = opt(phi_hi);
        series_out.push_back(std::move(s));
    }
    return doc;
}

}  // namespace dcsk
