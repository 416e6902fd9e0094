// Batch front end: parse a config file, run the requested action and write
// result tables. Subcommands: simulate, dressed, doppler, sweep.
#include "tripod/config.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace tripod;

struct IoOptions {
    std::string config_path;
    std::string out_dir;
    std::string format;
};

void add_io_options(CLI::App* cmd, IoOptions& io) {
    cmd->add_option("--config", io.config_path, "configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", io.out_dir, "output directory (default: config's out_dir or '.')");
    cmd->add_option("--format", io.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

cli::RunConfig load(const IoOptions& io) {
    std::ifstream in(io.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cli::RunConfig rc = cli::parse_config(buf.str());
    if (!io.out_dir.empty()) rc.out_dir = io.out_dir;
    if (io.format == "csv") rc.format = experiments::Format::csv;
    if (io.format == "json") rc.format = experiments::Format::json;
    return rc;
}

std::string write(const experiments::ResultTable& t, const cli::RunConfig& rc) {
    namespace fs = std::filesystem;
    fs::create_directories(rc.out_dir);
    const char* ext = rc.format == experiments::Format::csv ? ".csv" : ".json";
    const fs::path path = fs::path(rc.out_dir) /
                          (t.metadata.at("kind") + "_" + experiments::sweep_hash(t) + ext);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    experiments::write_table(t, rc.format, out);
    return path.string();
}

int run_simulate(const IoOptions& io) {
    cli::RunConfig rc = load(io);
    rc.sweep.kind = experiments::SweepKind::DynamicsTrace;
    std::cout << write(experiments::run_experiment(rc.sweep), rc) << "\n";
    return 0;
}

int run_dressed(const IoOptions& io) {
    cli::RunConfig rc = load(io);
    rc.sweep.kind = experiments::SweepKind::QuasienergyTrace;
    experiments::ResultTable t = experiments::run_experiment(rc.sweep);
    const double bound = dressed::excited_admixture_bound(rc.sweep.pulses);
    t.metadata["excited_admixture_bound"] = experiments::detail::fmt(bound, 12);
    std::cout << "excited-state admixture bound |delta13|/sqrt(|W1|^2+|W2|^2) = " << bound
              << "\n";
    std::cout << write(t, rc) << "\n";
    return 0;
}

int run_doppler(const IoOptions& io) {
    cli::RunConfig rc = load(io);
    rc.sweep.kind = experiments::SweepKind::DetuningScan;
    experiments::ResultTable scan = experiments::run_experiment(rc.sweep);
    std::cout << write(scan, rc) << "\n";

    const auto avg = doppler::average_final(rc.sweep.pulses, rc.sweep.rates, rc.sweep.gas,
                                            rc.sweep.quadrature, rc.sweep.integrator,
                                            rc.sweep.sim_case, rc.sweep.field3_shift_scale);
    experiments::ResultTable avg_table;
    avg_table.metadata = scan.metadata;
    avg_table.metadata["kind"] = "doppler_average";
    avg_table.metadata["detuning_sigma"] =
        experiments::detail::fmt(doppler::detuning_sigma(rc.sweep.gas), 17);
    avg_table.columns = {"rho00",     "rho11",     "rho22",     "rho33",
                         "abs_rho12", "arg_rho12", "abs_rho13", "abs_rho23"};
    avg_table.rows = {{avg(0, 0).real(), avg(1, 1).real(), avg(2, 2).real(), avg(3, 3).real(),
                       std::abs(avg(1, 2)), std::arg(avg(1, 2)), std::abs(avg(1, 3)),
                       std::abs(avg(2, 3))}};
    std::cout << write(avg_table, rc) << "\n";
    return 0;
}

int run_sweep(const IoOptions& io) {
    cli::RunConfig rc = load(io);
    if (!rc.has_kind)
        throw cli::ConfigError("sweep requires a 'kind' key in the config file");
    std::cout << write(experiments::run_experiment(rc.sweep), rc) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tripod-atom chirped-pulse superposition simulator"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    IoOptions io;
    int (*action)(const IoOptions&) = nullptr;

    auto* simulate = app.add_subcommand("simulate", "integrate the master equation (dynamics trace)");
    add_io_options(simulate, io);
    simulate->callback([&] { action = run_simulate; });

    auto* dressed_cmd = app.add_subcommand("dressed", "quasienergy trace and admixture bound");
    add_io_options(dressed_cmd, io);
    dressed_cmd->callback([&] { action = run_dressed; });

    auto* doppler_cmd = app.add_subcommand("doppler", "detuning scan and thermal average");
    add_io_options(doppler_cmd, io);
    doppler_cmd->callback([&] { action = run_doppler; });

    auto* sweep = app.add_subcommand("sweep", "run the sweep kind named in the config");
    add_io_options(sweep, io);
    sweep->callback([&] { action = run_sweep; });

    CLI11_PARSE(app, argc, argv);

    try {
        return action(io);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
