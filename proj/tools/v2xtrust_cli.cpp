// Command-line front end: run a scenario, sweep a parameter over seeds, or
// summarize previously written output directories.

#include <CLI11.hpp>
#include <json.hpp>

#include <v2xtrust/config.hpp>
#include <v2xtrust/io.hpp>
#include <v2xtrust/metrics.hpp>
#include <v2xtrust/simulation.hpp>
#include <v2xtrust/sweep.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace v2xtrust;

namespace {

ScenarioConfig load_config(const std::string& path) {
    if (path.empty()) return ScenarioConfig{};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) {
        std::istringstream item(token);
        double v = 0.0;
        if (!(item >> v)) throw std::runtime_error("bad sweep value: '" + token + "'");
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error("no sweep values given");
    return values;
}

std::string metric_text(const std::optional<double>& v) {
    return v ? fixed6(*v) : std::string("n/a");
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir) {
    ScenarioConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    validate_config(cfg);

    Simulation sim(cfg);
    const MetricsReport report = sim.run();

    fs::create_directories(out_dir);
    {
        std::ostringstream csv;
        write_timeseries_csv(csv, report);
        write_file(fs::path(out_dir) / "timeseries.csv", csv.str());
    }
    write_file(fs::path(out_dir) / "summary.json", summary_json(cfg, report).dump(2) + "\n");
    if (cfg.dump_trace) {
        std::ostringstream csv;
        write_trace_csv(csv, sim.trace());
        write_file(fs::path(out_dir) / "trace.csv", csv.str());
    }

    std::cout << "run: seed " << cfg.seed << ", " << cfg.iterations << " iterations\n"
              << "  fnr (global/local): " << metric_text(report.global.fnr) << " / "
              << metric_text(report.local.fnr) << "\n"
              << "  fpr (global/local): " << metric_text(report.global.fpr) << " / "
              << metric_text(report.local.fpr) << "\n"
              << "  pdr: " << fixed6(report.pdr) << "\n"
              << "  global blacklist size: " << report.global_blacklist.size() << "\n"
              << "  outputs in " << out_dir << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir, const std::string& param_name,
              const std::string& values_csv, std::uint32_t reps, unsigned threads) {
    ScenarioConfig base = load_config(config_path);
    if (seed) base.seed = *seed;
    validate_config(base);

    const std::optional<SweepParam> param = parse_sweep_param(param_name);
    if (!param) {
        std::cerr << "unknown sweep parameter '" << param_name
                  << "' (expected th_min, th_max, rc, c_w or malicious_fraction)\n";
        return 1;
    }
    const std::vector<double> values = parse_values(values_csv);
    const SweepTable table = run_sweep(base, *param, values, reps, threads);

    fs::create_directories(out_dir);
    {
        std::ostringstream csv;
        write_sweep_csv(csv, table);
        write_file(fs::path(out_dir) / "sweep.csv", csv.str());
    }
    write_file(fs::path(out_dir) / "sweep.json", sweep_json(base, table).dump(2) + "\n");
    for (const std::string metric : {"fnr", "fpr", "pdr", "fnr_local", "fpr_local"}) {
        std::ostringstream dat;
        write_sweep_metric_dat(dat, table, metric);
        write_file(fs::path(out_dir) / (param_name + "_" + metric + ".dat"), dat.str());
    }

    std::cout << "sweep " << param_name << " over " << values.size() << " values x " << reps
              << " seeds\n";
    for (const SweepPoint& point : table.points) {
        std::cout << "  " << param_name << "=" << fixed6(point.value)
                  << "  fnr=" << metric_text(point.fnr_global.mean)
                  << "  fpr=" << metric_text(point.fpr_global.mean)
                  << "  pdr=" << metric_text(point.pdr.mean) << "\n";
    }
    std::cout << "  outputs in " << out_dir << "\n";
    return 0;
}

int cmd_report(const std::string& in_dir, std::optional<double> baseline_fnr,
               std::optional<double> baseline_pdr) {
    const fs::path summary_path = fs::path(in_dir) / "summary.json";
    const fs::path sweep_path = fs::path(in_dir) / "sweep.json";

    if (fs::exists(summary_path)) {
        std::ifstream in(summary_path);
        const nlohmann::json j = nlohmann::json::parse(in);
        const auto& m = j.at("metrics");
        std::cout << "scenario summary (" << summary_path.string() << ")\n"
                  << "  fnr global: " << m.at("global").at("fnr").dump()
                  << "  local: " << m.at("local").at("fnr").dump() << "\n"
                  << "  fpr global: " << m.at("global").at("fpr").dump()
                  << "  local: " << m.at("local").at("fpr").dump() << "\n"
                  << "  pdr: " << m.at("pdr").dump() << "\n"
                  << "  blacklist: " << j.at("global_blacklist").dump() << "\n";
        if (baseline_fnr && m.at("global").at("fnr").is_number()) {
            const auto rate = improvement_rate(*baseline_fnr, m.at("global").at("fnr").get<double>());
            std::cout << "  fnr improvement over baseline " << fixed6(*baseline_fnr) << ": "
                      << (rate ? fixed6(*rate) + "%" : std::string("n/a")) << "\n";
        }
        if (baseline_pdr) {
            const auto rate = improvement_rate(*baseline_pdr, m.at("pdr").get<double>());
            std::cout << "  pdr improvement over baseline " << fixed6(*baseline_pdr) << ": "
                      << (rate ? fixed6(*rate) + "%" : std::string("n/a")) << "\n";
        }
        return 0;
    }
    if (fs::exists(sweep_path)) {
        std::ifstream in(sweep_path);
        const nlohmann::json j = nlohmann::json::parse(in);
        std::cout << "sweep summary (" << sweep_path.string() << ")\n"
                  << "  param: " << j.at("param").get<std::string>() << ", repetitions "
                  << j.at("repetitions").get<unsigned>() << "\n";
        for (const auto& p : j.at("points")) {
            std::cout << "  value " << p.at("value").get<double>()
                      << "  fnr " << p.at("fnr_global").at("mean").dump()
                      << "  fpr " << p.at("fpr_global").at("mean").dump()
                      << "  pdr " << p.at("pdr").at("mean").dump() << "\n";
        }
        return 0;
    }
    std::cerr << "no summary.json or sweep.json under " << in_dir << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic V2X trust-model simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file (key = value lines)");
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_option("--out", out_dir, "output directory")
            ->envname("V2XTRUST_OUT")
            ->capture_default_str();
    };

    CLI::App* run = app.add_subcommand("run", "run one scenario and write metrics");
    add_common(run);

    std::string param_name;
    std::string values_csv;
    std::uint32_t reps = 20;
    unsigned threads = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep over seeds");
    add_common(sweep);
    sweep->add_option("--param", param_name,
                      "th_min, th_max, rc, c_w or malicious_fraction")
        ->required();
    sweep->add_option("--values", values_csv, "comma-separated values")->required();
    sweep->add_option("--reps", reps, "seed repetitions per value")->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->capture_default_str();

    std::string in_dir;
    std::optional<double> baseline_fnr, baseline_pdr;
    CLI::App* report = app.add_subcommand("report", "summarize a run or sweep directory");
    report->add_option("--in", in_dir, "directory with summary.json or sweep.json")->required();
    report->add_option("--baseline-fnr", baseline_fnr,
                       "baseline FNR to compute an improvement rate against");
    report->add_option("--baseline-pdr", baseline_pdr,
                       "baseline PDR to compute an improvement rate against");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, seed, out_dir);
        if (sweep->parsed())
            return cmd_sweep(config_path, seed, out_dir, param_name, values_csv, reps, threads);
        if (report->parsed()) return cmd_report(in_dir, baseline_fnr, baseline_pdr);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
