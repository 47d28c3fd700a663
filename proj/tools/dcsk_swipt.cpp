// Command-line front end: figure presets, partition planning, region reports.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcsk/dcsk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct RunArgs
{
    std::string preset = "fig2";
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string out;
    std::vector<std::string> overrides;
    unsigned threads = 0;
    std::string summary;
    bool timing = false;
    bool analytic_only = false;
    double ber0 = 0.05;
};

struct PlanArgs
{
    std::string config;
    double ber0 = 1e-3;
    std::vector<std::string> overrides;
    bool configured_phase = false;
};

int run_command(const RunArgs& a)
{
    const auto id = dcsk::parse_preset_id(a.preset);
    const auto base = dcsk::preset_config(id, a.overrides);
    dcsk::RunOptions opts;
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.threads = a.threads;
    opts.monte_carlo = !a.analytic_only;
    opts.ber0 = a.ber0;
    const auto rows = dcsk::run_preset(id, base, opts);
    const auto csv = dcsk::rows_to_csv(rows, a.timing);
    if (a.out.empty() || a.out == "-") {
        std::cout << csv;
    } else {
        dcsk::write_text_file(a.out, csv);
    }
    if (!a.summary.empty()) {
        auto doc = dcsk::emit_summary(rows, dcsk::config_hash(base));
        doc["preset"] = std::string(dcsk::preset_name(id));
        doc["seed"] = a.seed;
        doc["trials"] = a.trials;
        dcsk::write_text_file(a.summary, doc.dump(2) + "\n");
    }
    return kExitOk;
}

int plan_command(const PlanArgs& a)
{
    const auto config = dcsk::parse_config_file(a.config, a.overrides);
    dcsk::analytics::PlanOptions options;
    options.use_configured_phase = a.configured_phase;
    const auto plan = dcsk::analytics::plan_partition(config, a.ber0, options);
    std::cout << "M,K,K_min,ber,feasible\n";
    for (const auto& e : plan.entries) {
        std::cout << e.m_it << ',' << e.k_eh << ',' << (e.k_min ? std::to_string(*e.k_min) : std::string("inf")) << ','
                  << dcsk::config_detail::format_double(e.ber) << ',' << (e.feasible ? "true" : "false") << '\n';
    }
    const auto ok = plan.feasible();
    std::cerr << ok.size() << " feasible (M, K) pairs\n";
    return ok.empty() ? kExitInfeasible : kExitOk;
}

int region_command(const PlanArgs& a)
{
    const auto config = dcsk::parse_config_file(a.config, a.overrides);
    const auto report = dcsk::analytics::sr_pharv_region(config, a.ber0);
    const auto f = [](double v) { return dcsk::config_detail::format_double(v); };
    std::cout << "phi,zeta,sr,p_harv,feasible\n";
    for (const auto& p : report.points) {
        std::cout << p.phi << ',' << p.zeta << ',' << f(p.sr) << ',' << f(p.p_harv_watts) << ','
                  << (p.feasible ? "true" : "false") << '\n';
    }
    const auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("none"); };
    std::cerr << "phi_min=" << f(report.phi_min_real) << " phi_A=" << opt(report.phi_a) << " phi_B=" << opt(report.phi_b)
              << " power_threshold=" << f(report.power_threshold) << " feasible=[" << opt(report.feasible_low) << ", "
              << opt(report.feasible_high) << "]\n";
    return report.any_feasible() ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SR-DCSK over a partitioned RIS: BER, harvested power and design trade-offs"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a figure preset or a custom point and write CSV");
    run_cmd->add_option("--preset", run.preset, "fig2 | fig3 | fig4 | fig5 | fig6 | fig7 | custom")->required();
    run_cmd->add_option("--trials", run.trials, "Monte Carlo trials (or channel draws) per point");
    run_cmd->add_option("--seed", run.seed, "Master seed");
    run_cmd->add_option("--out", run.out, "CSV output path ('-' for stdout)");
    run_cmd->add_option("--override", run.overrides, "key=value applied after the preset")->take_all();
    run_cmd->add_option("--threads", run.threads, "Worker threads (0: all cores)");
    run_cmd->add_option("--summary", run.summary, "Also write a JSON summary to this path");
    run_cmd->add_option("--ber0", run.ber0, "BER target for feasibility columns");
    run_cmd->add_flag("--timing", run.timing, "Append a runtime_ms column");
    run_cmd->add_flag("--analytic-only", run.analytic_only, "Skip Monte Carlo columns");

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "Feasible (M, K) partitions for a BER target");
    plan_cmd->add_option("--config", plan.config, "Config file")->required();
    plan_cmd->add_option("--ber0", plan.ber0, "BER target")->required();
    plan_cmd->add_option("--override", plan.overrides, "key=value applied after the file")->take_all();
    plan_cmd->add_flag("--configured-phase", plan.configured_phase,
                       "Use the configured phase model instead of perfect alignment");

    PlanArgs region;
    auto* region_cmd = app.add_subcommand("region", "SR / harvested-power region over phi");
    region_cmd->add_option("--config", region.config, "Config file")->required();
    region_cmd->add_option("--ber0", region.ber0, "BER target")->required();
    region_cmd->add_option("--override", region.overrides, "key=value applied after the file")->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            return run_command(run);
        }
        if (*plan_cmd) {
            return plan_command(plan);
        }
        return region_command(region);
    } catch (const dcsk::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const dcsk::ContractError& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
