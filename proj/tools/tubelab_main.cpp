// tubelab: experiments over delta-atoms and delta-tubes in the unit cube.
//
// Subcommands mirror the experiment names plus serialize-atoms /
// serialize-tubes for the text formats. Exit codes: 0 all checks pass,
// 1 check failure, 2 usage/config/I-O error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tubelab/configurations.hpp"
#include "tubelab/experiment.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/serialize.hpp"
#include "tubelab/tube_family.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw tubelab::ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_dir, int workers) {
    const std::string text = read_file(config_path);
    tubelab::ExperimentConfig cfg = tubelab::parse_config(text);

    tubelab::Experiment from_cli;
    if (!tubelab::experiment_from_string(name, from_cli)) {
        throw tubelab::ConfigError("unknown experiment: " + name);
    }
    cfg.experiment = from_cli;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (workers > 0) cfg.workers = workers;

    const auto outcome = tubelab::run_sweep(cfg);
    std::size_t failed = 0;
    for (const auto& r : outcome.records) {
        if (!r.pass) ++failed;
    }
    for (const auto& r : outcome.summary) {
        if (!r.pass) ++failed;
    }
    std::cout << tubelab::to_string(cfg.experiment) << ": " << outcome.records.size()
              << " records, " << outcome.summary.size() << " checks, " << failed
              << " failures\n";
    for (const auto& f : outcome.files_written) std::cout << "  wrote " << f << '\n';
    return outcome.all_pass ? 0 : 1;
}

// Generator dispatch for serialize-atoms. The config reuses the experiment
// keys: generator selection via the matching experiment name.
std::vector<tubelab::Atom> build_atoms(const tubelab::ExperimentConfig& cfg) {
    using namespace tubelab;
    const Dimension dim(cfg.d);
    const double delta = cfg.delta.front();
    switch (cfg.experiment) {
        case Experiment::kCornerGrid:
            return gen_corner_grid(static_cast<int>(cfg.k.front()), delta);
        case Experiment::kBoxExample:
            return gen_box_example(static_cast<int>(cfg.k.front()), delta, dim);
        case Experiment::kSliceExample:
            return gen_slice_example(static_cast<int>(cfg.k.front()), delta, dim);
        case Experiment::kTheoremSweep:
            return gen_wellspaced_grid(
                WellSpacedParams{cfg.W.front(), dim, delta, cfg.jitter, cfg.seed});
        case Experiment::kExpectedRichness:
            return gen_uniform_random(cfg.n, delta, dim, cfg.seed);
        default:
            throw ConfigError("serialize-atoms: experiment key must name a generator "
                              "(corner-grid, box-example, slice-example, theorem-sweep, "
                              "expected-richness)");
    }
}

int run_serialize_atoms(const std::string& config_path, const std::string& out_path) {
    const auto cfg = tubelab::parse_config(read_file(config_path));
    const auto atoms = build_atoms(cfg);
    std::ofstream os(out_path);
    if (!os) throw tubelab::ConfigError("cannot write " + out_path);
    tubelab::write_atoms(os, atoms, tubelab::Dimension(cfg.d), cfg.delta.front());
    std::cout << "wrote " << atoms.size() << " atoms to " << out_path << '\n';
    return 0;
}

int run_serialize_tubes(const std::string& config_path, const std::string& out_path) {
    const auto cfg = tubelab::parse_config(read_file(config_path));
    const double delta = cfg.delta.front();
    const auto family = tubelab::standard_family(tubelab::Dimension(cfg.d), delta);
    std::ofstream os(out_path);
    if (!os) throw tubelab::ConfigError("cannot write " + out_path);
    tubelab::write_tubes(os, family.tubes, tubelab::Dimension(cfg.d), delta,
                         family.offset_spacing);
    std::cout << "wrote " << family.tubes.size() << " tubes to " << out_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tubelab: incidence experiments for delta-atoms and delta-tubes"};
    app.require_subcommand(1);

    const char* experiments[] = {"pair-tubes",     "corner-grid",      "box-example",
                                 "slice-example",  "theorem-sweep",    "proposition-check",
                                 "tubechen-check", "oracle-check",     "expected-richness"};

    std::string config_path, out_dir = ".", out_path = "atoms.txt";
    int workers = 0;

    for (const char* name : experiments) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", config_path, "key=value config file")->required();
        sub->add_option("--workers", workers, "worker thread count (0 = hardware)");
        sub->add_option("--out", out_dir, "output directory for CSV and plot data");
    }
    auto* ser_atoms = app.add_subcommand("serialize-atoms", "generate atoms, write text format");
    ser_atoms->add_option("--config", config_path, "key=value config file")->required();
    ser_atoms->add_option("--out", out_path, "output file path");
    auto* ser_tubes = app.add_subcommand("serialize-tubes", "enumerate tubes, write text format");
    ser_tubes->add_option("--config", config_path, "key=value config file")->required();
    ser_tubes->add_option("--out", out_path, "output file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto* sub = app.get_subcommands().front();
        if (sub == ser_atoms) return run_serialize_atoms(config_path, out_path);
        if (sub == ser_tubes) return run_serialize_tubes(config_path, out_path);
        return run_experiment(sub->get_name(), config_path, out_dir, workers);
    } catch (const tubelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
