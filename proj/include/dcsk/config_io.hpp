#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "error.hpp"
#include "system.hpp"

namespace dcsk {

namespace config_detail {

inline std::string_view trim(std::string_view s) noexcept
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

struct ParseFailure
{
    std::string what;
};

template <class T>
T parse_number(std::string_view text)
{
    T value{};
    const auto s = trim(text);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseFailure{"'" + std::string(text) + "' is not a valid number"};
    }
    return value;
}

inline std::vector<double> parse_list(std::string_view text)
{
    std::vector<double> out;
    if (trim(text).empty()) {
        return out;
    }
    for (auto item : split(text, ',')) {
        out.push_back(parse_number<double>(item));
    }
    return out;
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

inline std::string format_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += format_double(v[i]);
    }
    return out;
}

inline PhaseErrorModel parse_phase_model(std::string_view text)
{
    const auto s = trim(text);
    if (s == "orthogonal") {
        return OrthogonalPairs{};
    }
    if (s == "uniform") {
        return UniformRandom{};
    }
    if (s == "common") {
        return CommonPhase{};
    }
    if (s.starts_with("common:")) {
        return CommonPhase{parse_number<double>(s.substr(7))};
    }
    if (s.starts_with("explicit:")) {
        return ExplicitVector{parse_list(s.substr(9))};
    }
    throw ParseFailure{"unknown phase model '" + std::string(s) + "' (common[:theta] | orthogonal | uniform | explicit:a,b,...)"};
}

inline std::string format_phase_model(const PhaseErrorModel& model)
{
    if (const auto* c = std::get_if<CommonPhase>(&model)) {
        return "common:" + format_double(c->theta);
    }
    if (std::holds_alternative<OrthogonalPairs>(model)) {
        return "orthogonal";
    }
    if (std::holds_alternative<UniformRandom>(model)) {
        return "uniform";
    }
    return "explicit:" + format_list(std::get<ExplicitVector>(model).theta);
}

template <class E>
E parse_enum(std::string_view text, std::initializer_list<std::pair<std::string_view, E>> names)
{
    const auto s = trim(text);
    std::string allowed;
    for (const auto& [name, value] : names) {
        if (s == name) {
            return value;
        }
        allowed += allowed.empty() ? "" : " | ";
        allowed += name;
    }
    throw ParseFailure{"'" + std::string(s) + "' is not one of " + allowed};
}

using Setter = std::function<void(SystemConfig&, std::string_view)>;

inline const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"waveform.beta", [](SystemConfig& c, std::string_view v) { c.waveform.beta = parse_number<int>(v); }},
        {"waveform.phi", [](SystemConfig& c, std::string_view v) { c.waveform.phi = parse_number<int>(v); }},
        {"waveform.chip_stride", [](SystemConfig& c, std::string_view v) { c.chip_stride = parse_number<int>(v); }},
        {"tx.p_t", [](SystemConfig& c, std::string_view v) { c.tx.p_t = parse_number<double>(v); }},
        {"tx.p_t_dbm", [](SystemConfig& c, std::string_view v) { c.tx.p_t = dbm_to_watts(parse_number<double>(v)); }},
        {"tx.t_c", [](SystemConfig& c, std::string_view v) { c.tx.t_c = parse_number<double>(v); }},
        {"tx.chip_second_moment",
         [](SystemConfig& c, std::string_view v) { c.tx.chip_second_moment = parse_number<double>(v); }},
        {"channel.model",
         [](SystemConfig& c, std::string_view v) {
             c.channel_model = parse_enum<ChannelModel>(v, {{"awgn", ChannelModel::Awgn}, {"nakagami", ChannelModel::Nakagami}});
         }},
        {"channel.m",
         [](SystemConfig& c, std::string_view v) { c.profile.m_s = c.profile.m_r = parse_number<double>(v); }},
        {"channel.m_s", [](SystemConfig& c, std::string_view v) { c.profile.m_s = parse_number<double>(v); }},
        {"channel.m_r", [](SystemConfig& c, std::string_view v) { c.profile.m_r = parse_number<double>(v); }},
        {"channel.omega_sr", [](SystemConfig& c, std::string_view v) { c.profile.omega_sr = parse_list(v); }},
        {"channel.omega_rd", [](SystemConfig& c, std::string_view v) { c.profile.omega_rd = parse_list(v); }},
        {"geometry.c0", [](SystemConfig& c, std::string_view v) { c.geometry.c0 = parse_number<double>(v); }},
        {"geometry.c0_db",
         [](SystemConfig& c, std::string_view v) { c.geometry.c0 = db_to_linear(parse_number<double>(v)); }},
        {"geometry.d_sr", [](SystemConfig& c, std::string_view v) { c.geometry.d_sr = parse_number<double>(v); }},
        {"geometry.d_rd", [](SystemConfig& c, std::string_view v) { c.geometry.d_rd = parse_number<double>(v); }},
        {"geometry.alpha_sr", [](SystemConfig& c, std::string_view v) { c.geometry.alpha_sr = parse_number<double>(v); }},
        {"geometry.alpha_rd", [](SystemConfig& c, std::string_view v) { c.geometry.alpha_rd = parse_number<double>(v); }},
        {"ris.N", [](SystemConfig& c, std::string_view v) { c.ris.n_total = parse_number<int>(v); }},
        {"ris.M", [](SystemConfig& c, std::string_view v) { c.ris.m_it = parse_number<int>(v); }},
        {"ris.phase_error", [](SystemConfig& c, std::string_view v) { c.ris.phase_error = parse_phase_model(v); }},
        {"eh.nu1", [](SystemConfig& c, std::string_view v) { c.eh.nu1 = parse_number<double>(v); }},
        {"eh.nu2", [](SystemConfig& c, std::string_view v) { c.eh.nu2 = parse_number<double>(v); }},
        {"eh.r_load", [](SystemConfig& c, std::string_view v) { c.eh.r_load = parse_number<double>(v); }},
        {"budget.p_inf", [](SystemConfig& c, std::string_view v) { c.budget.p_inf = parse_number<double>(v); }},
        {"budget.p_cont", [](SystemConfig& c, std::string_view v) { c.budget.p_cont = parse_number<double>(v); }},
        {"budget.t", [](SystemConfig& c, std::string_view v) { c.budget.t_horizon = parse_number<double>(v); }},
        {"noise.gamma0_db", [](SystemConfig& c, std::string_view v) { c.gamma0_db = parse_number<double>(v); }},
        {"noise.n0",
         [](SystemConfig& c, std::string_view v) {
             c.n0 = parse_number<double>(v);
             c.gamma0_db.reset();
         }},
        {"sim.trials", [](SystemConfig& c, std::string_view v) { c.sim.trials = parse_number<std::uint64_t>(v); }},
        {"sim.seed", [](SystemConfig& c, std::string_view v) { c.sim.seed = parse_number<std::uint64_t>(v); }},
        {"sim.threads", [](SystemConfig& c, std::string_view v) { c.sim.threads = parse_number<unsigned>(v); }},
        {"sim.batch_size", [](SystemConfig& c, std::string_view v) { c.sim.batch_size = parse_number<std::uint64_t>(v); }},
        {"sim.harvest_mode",
         [](SystemConfig& c, std::string_view v) {
             c.sim.harvest_mode = parse_enum<HarvestMode>(
                 v, {{"amplitude", HarvestMode::AmplitudeCoherent}, {"complex", HarvestMode::ComplexPhase}});
         }},
        {"sim.combining",
         [](SystemConfig& c, std::string_view v) {
             c.sim.combining =
                 parse_enum<Combining>(v, {{"path", Combining::PathResolved}, {"coherent", Combining::Coherent}});
         }},
        {"sim.ber_evaluator",
         [](SystemConfig& c, std::string_view v) {
             c.sim.ber_evaluator = parse_enum<BerEvaluator>(
                 v, {{"awgn", BerEvaluator::Awgn}, {"semi_analytic", BerEvaluator::SemiAnalytic}});
         }},
    };
    return table;
}

}  // namespace config_detail

/// Applies `key=value` assignments in order on top of `base`. Every problem
/// (malformed line, unknown key, bad value, violated invariant) is collected
/// and reported together.
inline SystemConfig apply_assignments(SystemConfig base, const std::vector<std::string>& assignments,
                                      std::vector<std::string>& problems)
{
    using namespace config_detail;
    for (const auto& raw : assignments) {
        const auto line = trim(raw);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back("expected key=value, got '" + std::string(line) + "'");
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            problems.push_back("unknown key '" + std::string(key) + "'");
            continue;
        }
        try {
            it->second(base, value);
        } catch (const ParseFailure& f) {
            problems.push_back(std::string(key) + ": " + f.what);
        }
    }
    return base;
}

/// Significant lines of a config text: comments (#) and blanks dropped.
inline std::vector<std::string> config_lines(std::string_view text)
{
    std::vector<std::string> out;
    for (auto line : config_detail::split(text, '\n')) {
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = config_detail::trim(line.substr(0, hash));
        }
        if (!line.empty()) {
            out.emplace_back(line);
        }
    }
    return out;
}

inline SystemConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides = {},
                                      SystemConfig base = {})
{
    std::vector<std::string> problems;
    auto assignments = config_lines(text);
    assignments.insert(assignments.end(), overrides.begin(), overrides.end());
    SystemConfig c = apply_assignments(std::move(base), assignments, problems);
    for (auto& v : validate(c)) {
        problems.push_back(std::move(v));
    }
    if (!problems.empty()) {
        throw ConfigError(std::move(problems));
    }
    return c;
}

inline SystemConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides = {})
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({"cannot read config file '" + path + "'"});
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), overrides);
}

/// Canonical text form; parse_config_text(emit_config(c)) == c.
inline std::string emit_config(const SystemConfig& c)
{
    using config_detail::format_double;
    using config_detail::format_list;
    std::ostringstream out;
    const auto kv = [&](const char* key, const std::string& value) { out << key << '=' << value << '\n'; };
    kv("waveform.beta", std::to_string(c.waveform.beta));
    kv("waveform.phi", std::to_string(c.waveform.phi));
    kv("waveform.chip_stride", std::to_string(c.chip_stride));
    kv("tx.p_t", format_double(c.tx.p_t));
    kv("tx.t_c", format_double(c.tx.t_c));
    kv("tx.chip_second_moment", format_double(c.tx.chip_second_moment));
    kv("channel.model", c.channel_model == ChannelModel::Awgn ? "awgn" : "nakagami");
    kv("channel.m_s", format_double(c.profile.m_s));
    kv("channel.m_r", format_double(c.profile.m_r));
    kv("channel.omega_sr", format_list(c.profile.omega_sr));
    kv("channel.omega_rd", format_list(c.profile.omega_rd));
    kv("geometry.c0", format_double(c.geometry.c0));
    kv("geometry.d_sr", format_double(c.geometry.d_sr));
    kv("geometry.d_rd", format_double(c.geometry.d_rd));
    kv("geometry.alpha_sr", format_double(c.geometry.alpha_sr));
    kv("geometry.alpha_rd", format_double(c.geometry.alpha_rd));
    kv("ris.N", std::to_string(c.ris.n_total));
    kv("ris.M", std::to_string(c.ris.m_it));
    kv("ris.phase_error", config_detail::format_phase_model(c.ris.phase_error));
    kv("eh.nu1", format_double(c.eh.nu1));
    kv("eh.nu2", format_double(c.eh.nu2));
    kv("eh.r_load", format_double(c.eh.r_load));
    kv("budget.p_inf", format_double(c.budget.p_inf));
    kv("budget.p_cont", format_double(c.budget.p_cont));
    kv("budget.t", format_double(c.budget.t_horizon));
    // n0 first so that a gamma0 target, when present, wins on reparse.
    kv("noise.n0", format_double(c.n0));
    if (c.gamma0_db) {
        kv("noise.gamma0_db", format_double(*c.gamma0_db));
    }
    kv("sim.trials", std::to_string(c.sim.trials));
    kv("sim.seed", std::to_string(c.sim.seed));
    kv("sim.threads", std::to_string(c.sim.threads));
    kv("sim.batch_size", std::to_string(c.sim.batch_size));
    kv("sim.harvest_mode", c.sim.harvest_mode == HarvestMode::AmplitudeCoherent ? "amplitude" : "complex");
    kv("sim.combining", c.sim.combining == Combining::PathResolved ? "path" : "coherent");
    kv("sim.ber_evaluator", c.sim.ber_evaluator == BerEvaluator::Awgn ? "awgn" : "semi_analytic");
    return out.str();
}

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
inline std::string config_hash(const SystemConfig& c)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : emit_config(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace dcsk
