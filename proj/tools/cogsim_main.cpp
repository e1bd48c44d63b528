// cogsim: discrete-event simulator of a hybrid 2.4 GHz / 60 GHz indoor WLAN.
// Subcommands: run, sweep, figure, validate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cogsim/scenario.hpp"

namespace {

using namespace cogsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

Scenario load_or_default(const std::string& path) {
    return path.empty() ? default_scenario() : load_scenario(path);
}

void apply_sets(Scenario& s, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set wants key=value, got '" + kv + "'");
        apply_override(s, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate_scenario(s);
}

std::filesystem::path out_file(const std::string& out_dir, const std::string& name) {
    if (out_dir.empty()) return name;
    std::filesystem::create_directories(out_dir);
    return std::filesystem::path(out_dir) / name;
}

void write_csv_file(const std::filesystem::path& path, const std::vector<MetricsRecord>& rows) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    write_metrics_csv(os, rows);
    std::cout << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed, bool seed_set, double duration,
            bool duration_set, const std::string& out_dir, bool trace,
            const std::vector<std::string>& sets) {
    Scenario s = load_or_default(scenario_path);
    apply_sets(s, sets);
    if (seed_set) s.seed = seed;
    if (duration_set) s.duration_s = duration;
    validate_scenario(s);

    const std::string run_id = s.name + "_s" + std::to_string(s.seed);
    std::ofstream trace_os;
    if (trace) {
        trace_os.open(out_file(out_dir, run_id + ".trace.log"));
        if (!trace_os) throw ConfigError("cannot open trace log for writing");
    }
    MetricsRecord r = run_scenario(s, s.seed, trace ? &trace_os : nullptr);
    r.run_id = run_id;
    write_csv_file(out_file(out_dir, run_id + ".metrics.csv"), {r});
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& axis, const std::string& values,
              int seeds, const std::string& out_dir, const std::vector<std::string>& sets) {
    Scenario s = load_or_default(scenario_path);
    apply_sets(s, sets);

    SweepSpec spec;
    spec.axis = axis;
    spec.values = split_list(values);
    spec.seeds_per_point = seeds;
    const auto rows = run_sweep(s, spec);
    write_csv_file(out_file(out_dir, s.name + "_sweep.metrics.csv"), rows);
    return kExitOk;
}

int cmd_figure(const std::string& which, const std::string& devices_csv,
               const std::string& beamwidths_csv, int seeds, const std::string& out_dir,
               const std::vector<std::string>& sets) {
    Scenario s = default_scenario();
    apply_sets(s, sets);

    if (which == "fig4a") {
        s.experiment = ExperimentKind::Discovery;
        s.name = "fig4a";
        SweepSpec spec;
        spec.axis = "discovery.devices";
        spec.values = split_list(devices_csv.empty() ? "5,10,15,20,25,30" : devices_csv);
        spec.seeds_per_point = seeds;
        const auto rows = run_sweep(s, spec);
        write_csv_file(out_file(out_dir, "fig4a.metrics.csv"), rows);

        std::cout << "devices  standalone_ms  assisted_ms  speedup\n";
        for (std::size_t p = 0; p < spec.values.size(); ++p) {
            double stand = 0, assist = 0;
            for (int r = 0; r < seeds; ++r) {
                const auto& row = rows[p * static_cast<std::size_t>(seeds) + static_cast<std::size_t>(r)];
                stand += row.mean_discovery_standalone_us;
                assist += row.mean_discovery_assisted_us;
            }
            stand /= seeds * 1000.0;
            assist /= seeds * 1000.0;
            std::printf("%7s  %13.3f  %11.3f  %7.2f\n", spec.values[p].c_str(), stand, assist,
                        assist > 0 ? stand / assist : 0.0);
        }
        return kExitOk;
    }
    if (which == "fig4bc") {
        s.experiment = ExperimentKind::AccessMix;
        s.name = "fig4bc";
        SweepSpec spec;
        spec.axis = "traffic.stations_req60";
        const auto ns = split_list(devices_csv.empty() ? "2,5,10" : devices_csv);
        spec.values = ns; // stations split half and half
        spec.seeds_per_point = seeds;
        // keep the mix symmetric by sweeping both categories together
        std::vector<MetricsRecord> rows;
        for (std::size_t p = 0; p < ns.size(); ++p) {
            Scenario point = s;
            apply_override(point, "traffic.stations_req60", ns[p]);
            apply_override(point, "traffic.stations_wifi24", ns[p]);
            validate_scenario(point);
            for (int rep = 0; rep < seeds; ++rep) {
                const std::uint64_t seed =
                    s.seed + p * defaults::kSweepSeedStride + static_cast<std::uint64_t>(rep);
                MetricsRecord row = run_scenario(point, seed);
                row.run_id = "fig4bc_n=" + ns[p];
                rows.push_back(std::move(row));
            }
        }
        write_csv_file(out_file(out_dir, "fig4bc.metrics.csv"), rows);

        std::cout << "n_per_cat  delay60_us  delay24_us  txprob60  txprob24\n";
        for (std::size_t p = 0; p < ns.size(); ++p) {
            double d60 = 0, d24 = 0, t60 = 0, t24 = 0;
            for (int rep = 0; rep < seeds; ++rep) {
                const auto& row = rows[p * static_cast<std::size_t>(seeds) + static_cast<std::size_t>(rep)];
                d60 += row.mean_access_delay_us[0];
                d24 += row.mean_access_delay_us[1];
                t60 += row.tx_prob[0];
                t24 += row.tx_prob[1];
            }
            std::printf("%9s  %10.1f  %10.1f  %8.4f  %8.4f\n", ns[p].c_str(), d60 / seeds,
                        d24 / seeds, t60 / seeds, t24 / seeds);
        }
        return kExitOk;
    }
    if (which == "fig5b") {
        s.experiment = ExperimentKind::Rebeam;
        s.name = "fig5b";
        const auto bws = split_list(beamwidths_csv.empty() ? "30,20" : beamwidths_csv);
        std::vector<MetricsRecord> rows;
        std::cout << "beamwidth_deg  sensor_off  sensor_on\n";
        for (std::size_t p = 0; p < bws.size(); ++p) {
            double off = 0, on = 0;
            for (int rep = 0; rep < seeds; ++rep) {
                Scenario point = s;
                apply_override(point, "beamtrack.beamwidth_deg", bws[p]);
                validate_scenario(point);
                const std::uint64_t seed =
                    s.seed + p * defaults::kSweepSeedStride + static_cast<std::uint64_t>(rep);
                MetricsRecord row = run_scenario(point, seed);
                row.run_id = "fig5b_bw=" + bws[p];
                off += static_cast<double>(row.rebeam_count_off);
                on += static_cast<double>(row.rebeam_count_on);
                rows.push_back(std::move(row));
            }
            std::printf("%13s  %10.1f  %9.1f\n", bws[p].c_str(), off / seeds, on / seeds);
        }
        write_csv_file(out_file(out_dir, "fig5b.metrics.csv"), rows);
        return kExitOk;
    }
    throw ConfigError("unknown figure '" + which + "' (expected fig4a, fig4bc or fig5b)");
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"cogsim: hybrid 2.4 GHz control / 60 GHz data WLAN simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, axis, values, figure_name, devices_csv, beamwidths_csv;
    std::uint64_t seed = 0;
    double duration = 0;
    int seeds = 1;
    bool trace = false;
    std::vector<std::string> sets;

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("--scenario", scenario_path, "scenario file (defaults to the built-in 4-room plan)");
    auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
    auto* dur_opt = run->add_option("--duration-s", duration, "override the run duration");
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--trace", trace, "write a line-delimited event trace");
    run->add_option("--set", sets, "override any config key, e.g. mac.req60.cw_min=8");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--scenario", scenario_path, "base scenario file");
    sweep->add_option("--axis", axis, "overridable key to sweep")->required();
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--seeds", seeds, "replicates per point");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--set", sets, "base config overrides");

    auto* figure = app.add_subcommand("figure", "run a named experiment preset");
    figure->add_option("name", figure_name, "fig4a | fig4bc | fig5b")->required();
    figure->add_option("--devices", devices_csv, "x-axis values for fig4a/fig4bc");
    figure->add_option("--beamwidths", beamwidths_csv, "beamwidths for fig5b");
    figure->add_option("--seeds", seeds, "replicates per point");
    figure->add_option("--out", out_dir, "output directory");
    figure->add_option("--set", sets, "base config overrides");

    auto* validate_cmd = app.add_subcommand("validate", "parse and validate a scenario, run nothing");
    validate_cmd->add_option("--scenario", scenario_path, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(run))
            return cmd_run(scenario_path, seed, seed_opt->count() > 0, duration,
                           dur_opt->count() > 0, out_dir, trace, sets);
        if (app.got_subcommand(sweep))
            return cmd_sweep(scenario_path, axis, values, seeds, out_dir, sets);
        if (app.got_subcommand(figure))
            return cmd_figure(figure_name, devices_csv, beamwidths_csv, seeds, out_dir, sets);
        if (app.got_subcommand(validate_cmd)) {
            load_scenario(scenario_path);
            std::cout << "ok\n";
            return kExitOk;
        }
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SimError& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    }
}

#ifndef COGSIM_NO_MAIN
int main(int argc, char** argv) { return run_cli(argc, argv); }
#endif
