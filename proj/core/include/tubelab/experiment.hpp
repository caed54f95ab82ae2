#pragma once
/**
 * @file experiment.hpp
 * @brief Experiment configuration, seeded sweeps and CSV/plot emission.
 *
 * Configurations are flat key=value files (one pair per line, `#` comments).
 * Ranges are either comma lists or geometric triples `start:stop:factor`.
 * Trials execute in tuple order with per-trial seeds derived from the master
 * seed and the tuple index; the worker count only parallelises work inside a
 * trial, so output bytes never depend on it.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tubelab/bounds.hpp"

namespace tubelab {

enum class Experiment {
    kPairTubes,
    kCornerGrid,
    kBoxExample,
    kSliceExample,
    kTheoremSweep,
    kPropositionCheck,
    kTubechenCheck,
    kOracleCheck,
    kExpectedRichness,
};

std::string to_string(Experiment e);
bool experiment_from_string(std::string_view name, Experiment& out);

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExperimentConfig {
    Experiment experiment = Experiment::kOracleCheck;
    int d = 0;
    std::vector<double> delta;
    std::vector<double> W;
    std::vector<std::int64_t> k;
    std::vector<double> S;
    std::vector<int> D;
    std::vector<double> x;
    std::int64_t n = 0;
    std::int64_t samples = 0;
    double jitter = 0.0;
    double epsilon = 0.05;  // report parameter; delta^{-eps} folds into constants
    double c1 = 4.0;
    double window = 16.0;
    double threshold_factor = 0.5;
    std::string generator;  // proposition-check: box-example | slice-example
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int workers = 0;  // 0 = hardware concurrency
};

/// Parses and validates a config. Throws ConfigError with a diagnostic naming
/// the offending line.
ExperimentConfig parse_config(std::string_view text);

/// One row of experiment output: ordered field name/value pairs.
struct TrialRecord {
    std::vector<std::pair<std::string, std::string>> fields;
    bool pass = true;
    double wall_ms = 0.0;

    void put(const std::string& key, const std::string& value);
    void put(const std::string& key, double value);
    void put(const std::string& key, std::int64_t value);
    const std::string* find(const std::string& key) const;
};

struct SweepOutcome {
    std::vector<TrialRecord> records;
    std::vector<TrialRecord> summary;
    std::vector<BoundReport> bound_reports;  // written to bounds.csv when present
    bool all_pass = true;
    std::vector<std::string> files_written;
};

/// Projected standard-family size delta^{-2(d-1)}; sweeps warn (without
/// failing) when this exceeds 1e8.
double projected_family_size(int d, double delta);

/// Runs every parameter tuple of the config, writes `<experiment>.csv`,
/// `summary.csv` and plot data under config.out_dir, and reports whether all
/// acceptance checks in the sweep passed.
SweepOutcome run_sweep(const ExperimentConfig& config);

/// Two-column whitespace-separated plot data with the log-log fit parameters
/// in a comment header. Throws on an unknown field name.
void emit_plot_data(const std::vector<TrialRecord>& records, const std::string& x_field,
                    const std::string& y_field, std::ostream& os);

}  // namespace tubelab
