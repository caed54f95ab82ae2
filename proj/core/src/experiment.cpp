#include "tubelab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "tubelab/bounds.hpp"
#include "tubelab/cell_partition.hpp"
#include "tubelab/configurations.hpp"
#include "tubelab/incidence.hpp"
#include "tubelab/rng.hpp"
#include "tubelab/serialize.hpp"
#include "tubelab/thicken.hpp"

namespace tubelab {

namespace {

struct ExperimentName {
    Experiment e;
    const char* name;
};

constexpr ExperimentName kNames[] = {
    {Experiment::kPairTubes, "pair-tubes"},
    {Experiment::kCornerGrid, "corner-grid"},
    {Experiment::kBoxExample, "box-example"},
    {Experiment::kSliceExample, "slice-example"},
    {Experiment::kTheoremSweep, "theorem-sweep"},
    {Experiment::kPropositionCheck, "proposition-check"},
    {Experiment::kTubechenCheck, "tubechen-check"},
    {Experiment::kOracleCheck, "oracle-check"},
    {Experiment::kExpectedRichness, "expected-richness"},
};

}  // namespace

std::string to_string(Experiment e) {
    for (const auto& n : kNames) {
        if (n.e == e) return n.name;
    }
    return "unknown";
}

bool experiment_from_string(std::string_view name, Experiment& out) {
    for (const auto& n : kNames) {
        if (name == n.name) {
            out = n.e;
            return true;
        }
    }
    return false;
}

void TrialRecord::put(const std::string& key, const std::string& value) {
    fields.emplace_back(key, value);
}
void TrialRecord::put(const std::string& key, double value) {
    fields.emplace_back(key, format_real(value));
}
void TrialRecord::put(const std::string& key, std::int64_t value) {
    fields.emplace_back(key, std::to_string(value));
}
const std::string* TrialRecord::find(const std::string& key) const {
    for (const auto& [k, v] : fields) {
        if (k == key) return &v;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_one_real(const std::string& tok, int line, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) fail(line, "bad numeric value '" + tok + "' for " + key);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "bad numeric value '" + tok + "' for " + key);
    }
}

// Comma list of values and/or geometric triples start:stop:factor.
std::vector<double> parse_real_list(const std::string& value, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail(line, "empty element in list for " + key);
        const auto c1 = tok.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_one_real(tok, line, key));
            continue;
        }
        const auto c2 = tok.find(':', c1 + 1);
        if (c2 == std::string::npos) fail(line, "range for " + key + " must be start:stop:factor");
        const double start = parse_one_real(tok.substr(0, c1), line, key);
        const double stop = parse_one_real(tok.substr(c1 + 1, c2 - c1 - 1), line, key);
        const double factor = parse_one_real(tok.substr(c2 + 1), line, key);
        if (!(factor > 0.0) || factor == 1.0) fail(line, "range factor must be positive and != 1");
        if ((factor > 1.0) != (stop >= start)) {
            fail(line, "range direction does not match its factor");
        }
        const double tol = 1e-9;
        double v = start;
        for (int guard = 0; guard < 1000000; ++guard) {
            if (factor > 1.0 ? v > stop * (1.0 + tol) : v < stop * (1.0 - tol)) break;
            out.push_back(v);
            v *= factor;
        }
    }
    if (out.empty()) fail(line, "empty value for " + key);
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& value, int line,
                                         const std::string& key) {
    std::vector<std::int64_t> out;
    for (double v : parse_real_list(value, line, key)) {
        const double r = std::round(v);
        if (std::fabs(v - r) > 1e-9) fail(line, key + " requires integer values");
        out.push_back(static_cast<std::int64_t>(r));
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    bool has_experiment = false, has_d = false, has_samples = false;

    std::stringstream ss{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key=value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty()) fail(line, "empty value for " + key);

        if (key == "experiment") {
            if (!experiment_from_string(value, cfg.experiment)) {
                fail(line, "unknown experiment '" + value + "'");
            }
            has_experiment = true;
        } else if (key == "d") {
            cfg.d = static_cast<int>(parse_int_list(value, line, key).front());
            if (cfg.d < 2 || cfg.d > 4) fail(line, "d must lie in [2, 4]");
            has_d = true;
        } else if (key == "delta") {
            cfg.delta = parse_real_list(value, line, key);
            for (double v : cfg.delta) {
                if (!(v > 0.0 && v < 1.0)) fail(line, "delta must lie in (0,1)");
            }
        } else if (key == "W") {
            cfg.W = parse_real_list(value, line, key);
            for (double v : cfg.W) {
                if (!(v > 1.0)) fail(line, "require W > 1");
            }
        } else if (key == "k") {
            cfg.k = parse_int_list(value, line, key);
            for (auto v : cfg.k) {
                if (v < 1) fail(line, "k must be >= 1");
            }
        } else if (key == "S") {
            cfg.S = parse_real_list(value, line, key);
            for (double v : cfg.S) {
                if (!(v >= 1.0)) fail(line, "S must be >= 1");
            }
        } else if (key == "D") {
            for (auto v : parse_int_list(value, line, key)) {
                if (v < 1) fail(line, "D must be >= 1");
                cfg.D.push_back(static_cast<int>(v));
            }
        } else if (key == "x") {
            cfg.x = parse_real_list(value, line, key);
            for (double v : cfg.x) {
                if (!(v > 0.0 && v < 1.0)) fail(line, "x must lie in (0,1)");
            }
        } else if (key == "n") {
            cfg.n = parse_int_list(value, line, key).front();
            if (cfg.n < 0) fail(line, "n must be nonnegative");
        } else if (key == "samples") {
            cfg.samples = parse_int_list(value, line, key).front();
            if (cfg.samples < 1) fail(line, "samples must be >= 1");
            has_samples = true;
        } else if (key == "jitter") {
            cfg.jitter = parse_one_real(value, line, key);
            if (!(cfg.jitter >= 0.0 && cfg.jitter < 1.0)) fail(line, "jitter must lie in [0,1)");
        } else if (key == "epsilon") {
            cfg.epsilon = parse_one_real(value, line, key);
            if (cfg.epsilon < 0.0) fail(line, "epsilon must be nonnegative");
        } else if (key == "c1") {
            cfg.c1 = parse_one_real(value, line, key);
            if (!(cfg.c1 > 0.0)) fail(line, "c1 must be positive");
        } else if (key == "window") {
            cfg.window = parse_one_real(value, line, key);
            if (!(cfg.window >= 1.0)) fail(line, "window must be >= 1");
        } else if (key == "threshold_factor") {
            cfg.threshold_factor = parse_one_real(value, line, key);
            if (!(cfg.threshold_factor > 0.0)) fail(line, "threshold_factor must be positive");
        } else if (key == "generator") {
            if (value != "box-example" && value != "slice-example") {
                fail(line, "generator must be box-example or slice-example");
            }
            cfg.generator = value;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int_list(value, line, key).front());
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "workers") {
            cfg.workers = static_cast<int>(parse_int_list(value, line, key).front());
            if (cfg.workers < 0) fail(line, "workers must be nonnegative");
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (!has_experiment) throw ConfigError("missing required key 'experiment'");
    if (!has_d) throw ConfigError("missing required key 'd'");
    if (cfg.delta.empty()) throw ConfigError("missing required key 'delta'");

    const double delta_max = *std::max_element(cfg.delta.begin(), cfg.delta.end());
    for (double w : cfg.W) {
        if (!(w < 1.0 / delta_max)) {
            throw ConfigError("require W < 1/delta (W=" + format_real(w) +
                              ", delta=" + format_real(delta_max) + ")");
        }
    }
    for (double s : cfg.S) {
        if (s > 1.0 && !(s < 1.0 / delta_max)) {
            throw ConfigError("require S < 1/delta (S=" + format_real(s) +
                              ", delta=" + format_real(delta_max) + ")");
        }
    }
    for (auto kk : cfg.k) {
        if (!(static_cast<double>(kk) * delta_max < 1.0)) {
            throw ConfigError("require k*delta < 1 (k=" + std::to_string(kk) +
                              ", delta=" + format_real(delta_max) + ")");
        }
    }

    auto require = [&](bool ok, const char* what) {
        if (!ok) {
            throw ConfigError(std::string("missing required key '") + what + "' for " +
                              to_string(cfg.experiment));
        }
    };
    switch (cfg.experiment) {
        case Experiment::kPairTubes:
            require(!cfg.x.empty(), "x");
            break;
        case Experiment::kCornerGrid:
        case Experiment::kBoxExample:
        case Experiment::kSliceExample:
            require(!cfg.k.empty(), "k");
            break;
        case Experiment::kTheoremSweep:
            require(!cfg.W.empty(), "W");
            break;
        case Experiment::kPropositionCheck:
            require(!cfg.k.empty(), "k");
            require(!cfg.S.empty(), "S");
            require(!cfg.generator.empty(), "generator");
            break;
        case Experiment::kTubechenCheck:
            require(!cfg.W.empty(), "W");
            require(!cfg.D.empty(), "D");
            break;
        case Experiment::kOracleCheck:
            if (!has_samples) cfg.samples = 50;
            break;
        case Experiment::kExpectedRichness:
            require(cfg.n > 0, "n");
            if (!has_samples) cfg.samples = 10000;
            break;
    }
    if (cfg.experiment == Experiment::kCornerGrid && cfg.d != 2) {
        throw ConfigError("corner-grid requires d=2");
    }
    if (cfg.experiment == Experiment::kPairTubes) {
        for (double xv : cfg.x) {
            if (!(xv > 2.0 * delta_max)) {
                throw ConfigError("require x > 2*delta for distinct pair atoms");
            }
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Sweep execution
// ---------------------------------------------------------------------------

namespace {

Direction random_direction(Rng& rng, int d) {
    for (;;) {
        Vec v(d);
        double n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            v[i] = rng.uniform(-1.0, 1.0);
            n2 += v[i] * v[i];
        }
        if (n2 > 1e-12 && n2 <= 1.0) return Direction::from(v);
    }
}

Tube random_tube(Rng& rng, int d, double delta) {
    const Vec center = cube_center(d);
    for (;;) {
        const Direction u = random_direction(rng, d);
        const auto basis = orthogonal_basis(u);
        const double reach = std::sqrt(static_cast<double>(d)) / 2.0 + delta / 2.0;
        Vec p = center;
        for (int j = 0; j < d - 1; ++j) {
            p = p + basis[static_cast<std::size_t>(j)] * rng.uniform(-reach, reach);
        }
        if (auto t = try_make_tube(u, p, delta)) return *t;
    }
}

void add_summary(SweepOutcome& out, const std::string& check, double value,
                 const std::string& target, bool pass) {
    TrialRecord r;
    r.put("check", check);
    r.put("value", value);
    r.put("target", target);
    r.put("pass", pass ? std::int64_t{1} : std::int64_t{0});
    r.pass = pass;
    out.summary.push_back(std::move(r));
    out.all_pass = out.all_pass && pass;
}

void run_pair_tubes(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    std::int64_t trial = 0;
    for (double delta : cfg.delta) {
        const TubeFamily fam = standard_family(dim, delta);
        std::vector<double> xs, counts;
        for (double x : cfg.x) {
            Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
            const int orientations = 8;
            double sum = 0.0;
            for (int o = 0; o < orientations; ++o) {
                const Direction u = random_direction(rng, cfg.d);
                const Vec c = cube_center(cfg.d);
                const Atom a1 = make_atom(c - u.vec() * (x / 2.0), delta);
                const Atom a2 = make_atom(c + u.vec() * (x / 2.0), delta);
                sum += static_cast<double>(tubes_through_pair(a1, a2, fam));
            }
            const double mean = sum / orientations;
            const double formula = std::pow(x, 1.0 - static_cast<double>(cfg.d));
            TrialRecord r;
            r.put("d", std::int64_t{cfg.d});
            r.put("delta", delta);
            r.put("x", x);
            r.put("mean_count", mean);
            r.put("formula", formula);
            r.put("ratio", formula > 0.0 ? mean / formula : 0.0);
            out.records.push_back(std::move(r));
            if (mean > 0.0) {
                xs.push_back(x);
                counts.push_back(mean);
            }
            ++trial;
        }
        if (xs.size() >= 3) {
            const auto fit = fit_scaling(xs, counts);
            const double target = 1.0 - static_cast<double>(cfg.d);
            add_summary(out, "pair_tubes_slope_delta=" + format_real(delta), fit.slope,
                        format_real(target) + "+-0.35", std::fabs(fit.slope - target) <= 0.35);
        }
    }
}

void run_corner_grid(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    for (std::int64_t k : cfg.k) {
        std::vector<double> inv_deltas, counts;
        for (double delta : cfg.delta) {
            const auto atoms = gen_corner_grid(static_cast<int>(k), delta);
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            const auto net = build_direction_net(dim, 2.0 * delta);
            const auto sweep = sweep_family(index, net, delta, 2.0 * delta, k, cfg.workers);
            const auto t_count = sweep.profile.count_at_least(k);
            const double formula = static_cast<double>(k) / delta;
            const double constant = static_cast<double>(t_count) / formula;
            const bool pass = constant >= 1.0 / cfg.window && constant <= cfg.window;
            BoundReport br;
            br.claim = "corner-grid-richness";
            br.d = cfg.d;
            br.delta = delta;
            br.k = k;
            br.seed = cfg.seed;
            br.measured = static_cast<double>(t_count);
            br.formula = formula;
            br.constant = constant;
            br.pass = pass;
            out.bound_reports.push_back(std::move(br));
            TrialRecord r;
            r.put("d", std::int64_t{cfg.d});
            r.put("delta", delta);
            r.put("inv_delta", 1.0 / delta);
            r.put("k", k);
            r.put("t_count", t_count);
            r.put("formula", formula);
            r.put("constant", constant);
            r.put("pass", pass ? std::int64_t{1} : std::int64_t{0});
            r.pass = pass;
            out.all_pass = out.all_pass && pass;
            out.records.push_back(std::move(r));
            if (t_count > 0) {
                inv_deltas.push_back(1.0 / delta);
                counts.push_back(static_cast<double>(t_count));
            }
        }
        if (inv_deltas.size() >= 3) {
            const auto fit = fit_scaling(inv_deltas, counts);
            add_summary(out, "corner_grid_slope_k=" + std::to_string(k), fit.slope, "1+-0.2",
                        std::fabs(fit.slope - 1.0) <= 0.2);
        }
    }
}

void run_sharpness_example(const ExperimentConfig& cfg, SweepOutcome& out, bool slice) {
    const Dimension dim(cfg.d);
    const double dm1 = static_cast<double>(cfg.d - 1);
    for (double delta : cfg.delta) {
        for (std::int64_t k : cfg.k) {
            const auto atoms = slice ? gen_slice_example(static_cast<int>(k), delta, dim)
                                     : gen_box_example(static_cast<int>(k), delta, dim);
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            const auto net = build_direction_net(dim, 2.0 * delta);
            const auto sweep = sweep_family(index, net, delta, 2.0 * delta, k, cfg.workers);
            const auto t_count = sweep.profile.count_at_least(k);
            std::int64_t incidences = 0;
            for (auto r : sweep.richness) incidences += r;

            const double kd = static_cast<double>(k);
            const double t_formula =
                std::pow(delta, -dm1) * std::pow(kd, static_cast<double>(cfg.d) - (slice ? 3.0 : 1.0));
            const double i_formula =
                std::pow(delta, -dm1) * std::pow(kd, static_cast<double>(cfg.d) - (slice ? 2.0 : 0.0));
            const double t_const = static_cast<double>(t_count) / t_formula;
            const double i_const = static_cast<double>(incidences) / i_formula;
            const bool pass = t_const >= 1.0 / cfg.window && t_const <= cfg.window &&
                              i_const >= 1.0 / cfg.window && i_const <= cfg.window;

            for (int which = 0; which < 2; ++which) {
                BoundReport br;
                br.claim = std::string(slice ? "slice" : "box") +
                           (which == 0 ? "-tube-count" : "-incidence");
                br.d = cfg.d;
                br.delta = delta;
                br.k = k;
                br.seed = cfg.seed;
                br.measured = which == 0 ? static_cast<double>(t_count)
                                         : static_cast<double>(incidences);
                br.formula = which == 0 ? t_formula : i_formula;
                br.constant = which == 0 ? t_const : i_const;
                br.pass = pass;
                out.bound_reports.push_back(std::move(br));
            }

            TrialRecord r;
            r.put("d", std::int64_t{cfg.d});
            r.put("delta", delta);
            r.put("k", k);
            r.put("t_count", t_count);
            r.put("t_formula", t_formula);
            r.put("t_constant", t_const);
            r.put("incidence", incidences);
            r.put("i_formula", i_formula);
            r.put("i_constant", i_const);
            r.put("pass", pass ? std::int64_t{1} : std::int64_t{0});
            r.pass = pass;
            out.all_pass = out.all_pass && pass;
            out.records.push_back(std::move(r));
        }
    }
}

void run_theorem_sweep(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    std::map<double, double> max_ratio_per_delta;
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> slope_points_per_w;
    double global_max_ratio = 0.0;
    std::uint64_t trial = 0;

    for (double w : cfg.W) {
        for (double delta : cfg.delta) {
            const WellSpacedParams params{w, dim, delta, cfg.jitter, mix_seed(cfg.seed, trial)};
            ++trial;
            const auto atoms = gen_wellspaced_grid(params);
            const auto n = static_cast<std::int64_t>(atoms.size());
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            const auto net = build_direction_net(dim, 2.0 * delta);
            const auto sweep = sweep_family(index, net, delta, 2.0 * delta,
                                            std::numeric_limits<std::int64_t>::max(),
                                            cfg.workers);
            const auto& profile = sweep.profile;

            // Threshold from the richness condition; the delta^{-eps} factor
            // folds into the fitted constant, so the cut itself uses eps = 0.
            for (std::int64_t k = 2; k <= std::max<std::int64_t>(profile.max_richness(), 2);
                 k *= 2) {
                if (!theorem_condition(k, delta, n, dim, 0.0, cfg.c1)) continue;
                const auto t_count = profile.count_at_least(k);
                const double ratio = t_count > 0 ? theorem_ratio(t_count, n, k) : 0.0;
                BoundReport br;
                br.claim = "richness-bound";
                br.d = cfg.d;
                br.delta = delta;
                br.W = w;
                br.k = k;
                br.seed = params.seed;
                br.measured = static_cast<double>(t_count);
                br.formula = static_cast<double>(n) * static_cast<double>(n) /
                             std::pow(static_cast<double>(k), 3.0);
                br.constant = ratio;
                br.pass = ratio <= cfg.window;
                out.bound_reports.push_back(std::move(br));
                TrialRecord r;
                r.put("d", std::int64_t{cfg.d});
                r.put("W", w);
                r.put("delta", delta);
                r.put("jitter", cfg.jitter);
                r.put("seed", static_cast<std::int64_t>(params.seed));
                r.put("n_atoms", n);
                r.put("k", k);
                r.put("t_count", t_count);
                r.put("ratio", ratio);
                out.records.push_back(std::move(r));
                if (t_count > 0) {
                    auto& [ks, ts] = slope_points_per_w[w];
                    ks.push_back(static_cast<double>(k));
                    ts.push_back(static_cast<double>(t_count));
                    auto it = max_ratio_per_delta.find(delta);
                    if (it == max_ratio_per_delta.end()) {
                        max_ratio_per_delta[delta] = ratio;
                    } else {
                        it->second = std::max(it->second, ratio);
                    }
                    global_max_ratio = std::max(global_max_ratio, ratio);
                }
            }

            // Per-instance richness profile CSV.
            {
                std::ostringstream name;
                name << cfg.out_dir << "/profile_W" << format_real(w) << "_invdelta"
                     << format_real(1.0 / delta) << ".csv";
                std::ofstream os(name.str());
                if (os) {
                    write_profile_csv(os, profile);
                    out.files_written.push_back(name.str());
                }
            }

            // Corollary consistency on the full family.
            const std::int64_t measured = profile.total_incidences();
            const double k0 = k_zero(n, delta, dim);
            const double bound = corollary_bound(n, profile.family_size(), k0);
            const bool pass_cor = static_cast<double>(measured) <= cfg.window * bound;
            add_summary(out,
                        "corollary_W=" + format_real(w) + "_delta=" + format_real(delta),
                        static_cast<double>(measured) / bound, "<=" + format_real(cfg.window),
                        pass_cor);
            const double dyadic = dyadic_incidence_bound(profile, n);
            add_summary(out,
                        "dyadic_dominates_W=" + format_real(w) + "_delta=" + format_real(delta),
                        dyadic / std::max<double>(1.0, static_cast<double>(measured)), ">=1",
                        dyadic >= static_cast<double>(measured));
        }
    }

    add_summary(out, "max_constant", global_max_ratio, "finite",
                std::isfinite(global_max_ratio));
    if (max_ratio_per_delta.size() >= 3) {
        std::vector<double> xs, ys;
        for (const auto& [delta, ratio] : max_ratio_per_delta) {
            if (ratio > 0.0) {
                xs.push_back(1.0 / delta);
                ys.push_back(ratio);
            }
        }
        if (xs.size() >= 3) {
            const auto fit = fit_scaling(xs, ys);
            add_summary(out, "constant_trend_slope", fit.slope, "|slope|<=0.3",
                        std::fabs(fit.slope) <= 0.3);
        }
    }
    if (cfg.d == 2) {
        for (const auto& [w, pts] : slope_points_per_w) {
            if (pts.first.size() >= 3) {
                const auto fit = fit_scaling(pts.first, pts.second);
                add_summary(out, "tk_slope_W=" + format_real(w), fit.slope, "-3+-0.5",
                            std::fabs(fit.slope + 3.0) <= 0.5);
            }
        }
    }
}

void run_proposition_check(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    const bool slice = cfg.generator == "slice-example";
    for (double delta : cfg.delta) {
        for (std::int64_t k : cfg.k) {
            const auto atoms = slice ? gen_slice_example(static_cast<int>(k), delta, dim)
                                     : gen_box_example(static_cast<int>(k), delta, dim);
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            const auto net = build_direction_net(dim, 2.0 * delta);
            const auto sweep = sweep_family(index, net, delta, 2.0 * delta, k, cfg.workers);
            for (double s : cfg.S) {
                const auto terms =
                    proposition_terms(atoms, sweep.tubes, s, dim, cfg.workers);
                const double bound =
                    cfg.window * (std::sqrt(s) * terms.term1 + terms.term2);
                const bool pass_bound = static_cast<double>(terms.measured) <= bound;
                const char* dominant = terms.term2 >= terms.term1 ? "term2" : "term1";
                const char* expected = slice ? "term1" : "term2";
                const bool pass_dom = std::string(dominant) == expected;

                BoundReport br;
                br.claim = "two-term-bound";
                br.d = cfg.d;
                br.delta = delta;
                br.k = k;
                br.S = s;
                br.seed = cfg.seed;
                br.measured = static_cast<double>(terms.measured);
                br.formula = std::sqrt(s) * terms.term1 + terms.term2;
                br.constant = br.formula > 0.0 ? br.measured / br.formula : 0.0;
                br.pass = pass_bound && pass_dom;
                out.bound_reports.push_back(std::move(br));

                TrialRecord r;
                r.put("d", std::int64_t{cfg.d});
                r.put("delta", delta);
                r.put("k", k);
                r.put("S", s);
                r.put("generator", cfg.generator);
                r.put("t_count", static_cast<std::int64_t>(sweep.tubes.size()));
                r.put("term1", terms.term1);
                r.put("term2", terms.term2);
                r.put("measured", terms.measured);
                r.put("bound", bound);
                r.put("dominant", dominant);
                r.put("expected_dominant", expected);
                r.put("pass", pass_bound && pass_dom ? std::int64_t{1} : std::int64_t{0});
                r.pass = pass_bound && pass_dom;
                out.all_pass = out.all_pass && r.pass;
                out.records.push_back(std::move(r));
            }
        }
    }
}

void run_tubechen_check(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    std::uint64_t trial = 0;
    for (double w : cfg.W) {
        for (double delta : cfg.delta) {
            const WellSpacedParams params{w, dim, delta, cfg.jitter, mix_seed(cfg.seed, trial)};
            ++trial;
            const auto atoms = gen_wellspaced_grid(params);
            const auto n = static_cast<std::int64_t>(atoms.size());
            std::int64_t k;
            if (!cfg.k.empty()) {
                k = cfg.k.front();
            } else {
                k = 2;
                while (!theorem_condition(k, delta, n, dim, 0.0, cfg.c1)) k *= 2;
            }
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            const auto net = build_direction_net(dim, 2.0 * delta);
            const auto sweep = sweep_family(index, net, delta, 2.0 * delta, k, cfg.workers);
            for (int D : cfg.D) {
                const CellGrid grid(D, atoms, dim);
                const auto tubechens = compute_tubechens(atoms, sweep.tubes, grid);
                const auto rep =
                    check_tubechen_identities(tubechens, atoms, sweep.tubes, k, grid);
                const double frac =
                    heavy_tubechen_fraction(tubechens, k, D, cfg.threshold_factor);
                {
                    std::ostringstream name;
                    name << cfg.out_dir << "/tubechens_W" << format_real(w) << "_invdelta"
                         << format_real(1.0 / delta) << "_D" << D << ".csv";
                    std::ofstream os(name.str());
                    if (os) {
                        write_tubechens_csv(os, tubechens);
                        out.files_written.push_back(name.str());
                    }
                }
                const bool pass = rep.identity_exact && rep.pigeonhole_lower &&
                                  rep.crossing_window && frac >= 0.25;

                TrialRecord r;
                r.put("d", std::int64_t{cfg.d});
                r.put("W", w);
                r.put("delta", delta);
                r.put("k", k);
                r.put("D", std::int64_t{D});
                r.put("t_count", rep.rich_count);
                r.put("sum_wm", rep.sum_wm);
                r.put("incidence", rep.incidence);
                r.put("sum_m", rep.sum_m);
                r.put("identity_exact", rep.identity_exact ? std::int64_t{1} : std::int64_t{0});
                r.put("pigeonhole_lower",
                      rep.pigeonhole_lower ? std::int64_t{1} : std::int64_t{0});
                r.put("crossing_window",
                      rep.crossing_window ? std::int64_t{1} : std::int64_t{0});
                r.put("heavy_fraction", frac);
                r.put("pass", pass ? std::int64_t{1} : std::int64_t{0});
                r.pass = pass;
                out.all_pass = out.all_pass && pass;
                out.records.push_back(std::move(r));
            }
        }
    }
}

void run_oracle_check(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    std::uint64_t trial = 0;
    for (double delta : cfg.delta) {
        std::vector<std::pair<ConfigurationLabel, std::vector<Atom>>> sets;
        if (cfg.d == 2) {
            sets.emplace_back(ConfigurationLabel{ConfigTag::kCornerGrid, "k=3"},
                              gen_corner_grid(3, delta));
        }
        sets.emplace_back(ConfigurationLabel{ConfigTag::kBoxExample, "k=3"},
                          gen_box_example(3, delta, dim));
        sets.emplace_back(ConfigurationLabel{ConfigTag::kSliceExample, "k=4"},
                          gen_slice_example(4, delta, dim));
        for (int i = 0; i < 3; ++i) {
            const std::uint64_t seed = mix_seed(cfg.seed, 100 + static_cast<std::uint64_t>(i));
            sets.emplace_back(
                ConfigurationLabel{ConfigTag::kUniformRandom,
                                   "n=150 seed=" + std::to_string(seed)},
                gen_uniform_random(150, delta, dim, seed));
        }
        for (const auto& [label, atoms] : sets) {
            const SpatialIndex index(atoms, good_cell_size(atoms, delta));
            const auto net = build_direction_net(dim, 2.0 * delta);
            std::int64_t family_size = 0, mismatches = 0;
            visit_tubes(net, delta, 2.0 * delta, [&](const Tube& t, int) {
                ++family_size;
                if (index.richness(t) != brute_force_richness(t, atoms)) ++mismatches;
            });
            Rng rng(mix_seed(cfg.seed, 1000 + trial));
            ++trial;
            for (std::int64_t s = 0; s < cfg.samples; ++s) {
                const Tube t = random_tube(rng, cfg.d, delta);
                if (index.richness(t) != brute_force_richness(t, atoms)) ++mismatches;
            }
            const bool pass = mismatches == 0;
            TrialRecord r;
            r.put("d", std::int64_t{cfg.d});
            r.put("delta", delta);
            r.put("config", to_string(label.tag));
            r.put("params", label.params);
            r.put("n_atoms", static_cast<std::int64_t>(atoms.size()));
            r.put("family_size", family_size);
            r.put("random_tubes", cfg.samples);
            r.put("mismatches", mismatches);
            r.put("agree", pass ? std::int64_t{1} : std::int64_t{0});
            r.pass = pass;
            out.all_pass = out.all_pass && pass;
            out.records.push_back(std::move(r));
        }
    }
}

void run_expected_richness(const ExperimentConfig& cfg, SweepOutcome& out) {
    const Dimension dim(cfg.d);
    for (double delta : cfg.delta) {
        const auto atoms = gen_uniform_random(cfg.n, delta, dim, mix_seed(cfg.seed, 0));
        const SpatialIndex index(atoms, good_cell_size(atoms, delta));
        Rng rng(mix_seed(cfg.seed, 1));
        double sum = 0.0;
        for (std::int64_t s = 0; s < cfg.samples; ++s) {
            sum += static_cast<double>(index.richness(random_tube(rng, cfg.d, delta)));
        }
        const double mean = sum / static_cast<double>(cfg.samples);
        const double target =
            std::pow(delta, static_cast<double>(cfg.d - 1)) * static_cast<double>(cfg.n);
        const double ratio = mean / target;
        const bool pass = std::fabs(ratio - 1.0) <= 0.2;
        TrialRecord r;
        r.put("d", std::int64_t{cfg.d});
        r.put("delta", delta);
        r.put("n_atoms", cfg.n);
        r.put("samples", cfg.samples);
        r.put("mean_richness", mean);
        r.put("target", target);
        r.put("ratio", ratio);
        r.put("pass", pass ? std::int64_t{1} : std::int64_t{0});
        r.pass = pass;
        out.all_pass = out.all_pass && pass;
        out.records.push_back(std::move(r));
    }
}

const char* plot_x_field(Experiment e) {
    switch (e) {
        case Experiment::kPairTubes: return "x";
        case Experiment::kCornerGrid: return "inv_delta";
        case Experiment::kBoxExample:
        case Experiment::kSliceExample: return "k";
        case Experiment::kTheoremSweep: return "k";
        case Experiment::kPropositionCheck: return "S";
        default: return nullptr;
    }
}

const char* plot_y_field(Experiment e) {
    switch (e) {
        case Experiment::kPairTubes: return "mean_count";
        case Experiment::kCornerGrid:
        case Experiment::kBoxExample:
        case Experiment::kSliceExample:
        case Experiment::kTheoremSweep: return "t_count";
        case Experiment::kPropositionCheck: return "measured";
        default: return nullptr;
    }
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records,
                       const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        os << (i ? "," : "") << header[i];
    }
    os << '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            const std::string* v = r.find(header[i]);
            os << (i ? "," : "") << (v ? *v : "");
        }
        os << '\n';
    }
}

std::vector<std::string> header_of(const std::vector<TrialRecord>& records,
                                   const std::vector<std::string>& fallback) {
    if (records.empty()) return fallback;
    std::vector<std::string> header;
    for (const auto& [k, v] : records.front().fields) header.push_back(k);
    return header;
}

}  // namespace

double projected_family_size(int d, double delta) {
    return std::pow(delta, -2.0 * (d - 1));
}

SweepOutcome run_sweep(const ExperimentConfig& cfg) {
    SweepOutcome out;
    std::filesystem::create_directories(cfg.out_dir);

    if (!cfg.delta.empty()) {
        const double finest = *std::min_element(cfg.delta.begin(), cfg.delta.end());
        const double projected = projected_family_size(cfg.d, finest);
        if (projected > 1e8) {
            std::fprintf(stderr,
                         "warning: projected tube-family size %.3g exceeds 1e8; "
                         "this sweep may take very long\n",
                         projected);
        }
    }

    const auto started = std::chrono::steady_clock::now();
    switch (cfg.experiment) {
        case Experiment::kPairTubes: run_pair_tubes(cfg, out); break;
        case Experiment::kCornerGrid: run_corner_grid(cfg, out); break;
        case Experiment::kBoxExample: run_sharpness_example(cfg, out, false); break;
        case Experiment::kSliceExample: run_sharpness_example(cfg, out, true); break;
        case Experiment::kTheoremSweep: run_theorem_sweep(cfg, out); break;
        case Experiment::kPropositionCheck: run_proposition_check(cfg, out); break;
        case Experiment::kTubechenCheck: run_tubechen_check(cfg, out); break;
        case Experiment::kOracleCheck: run_oracle_check(cfg, out); break;
        case Experiment::kExpectedRichness: run_expected_richness(cfg, out); break;
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    for (auto& r : out.records) r.wall_ms = elapsed;

    const std::string base = cfg.out_dir + "/" + to_string(cfg.experiment);

    {
        std::ofstream os(base + ".csv");
        if (!os) throw std::runtime_error("cannot write " + base + ".csv");
        write_records_csv(os, out.records, header_of(out.records, {"d", "delta"}));
        out.files_written.push_back(base + ".csv");
    }
    {
        std::ofstream os(cfg.out_dir + "/summary.csv");
        if (!os) throw std::runtime_error("cannot write summary.csv");
        write_records_csv(os, out.summary, {"check", "value", "target", "pass"});
        out.files_written.push_back(cfg.out_dir + "/summary.csv");
    }
    if (!out.bound_reports.empty()) {
        std::ofstream os(base + "_bounds.csv");
        if (!os) throw std::runtime_error("cannot write bound reports");
        write_bound_reports_csv(os, out.bound_reports);
        out.files_written.push_back(base + "_bounds.csv");
    }
    if (const char* xf = plot_x_field(cfg.experiment)) {
        std::ofstream os(base + "_plot.dat");
        if (!os) throw std::runtime_error("cannot write plot data");
        emit_plot_data(out.records, xf, plot_y_field(cfg.experiment), os);
        out.files_written.push_back(base + "_plot.dat");
    }
    return out;
}

void emit_plot_data(const std::vector<TrialRecord>& records, const std::string& x_field,
                    const std::string& y_field, std::ostream& os) {
    std::vector<double> xs, ys;
    std::vector<std::pair<double, double>> rows;
    for (const auto& r : records) {
        const std::string* xv = r.find(x_field);
        const std::string* yv = r.find(y_field);
        if (!xv || !yv) throw std::invalid_argument("unknown plot field");
        const double x = std::stod(*xv);
        const double y = std::stod(*yv);
        rows.emplace_back(x, y);
        if (x > 0.0 && y > 0.0) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    os << "# x=" << x_field << " y=" << y_field << '\n';
    bool fitted = false;
    if (xs.size() >= 3) {
        try {
            const auto fit = fit_scaling(xs, ys);
            os << "# loglog_fit slope=" << format_real(fit.slope)
               << " intercept=" << format_real(fit.intercept)
               << " residual=" << format_real(fit.residual) << '\n';
            fitted = true;
        } catch (const std::invalid_argument&) {
        }
    }
    if (!fitted) os << "# loglog_fit none\n";
    for (const auto& [x, y] : rows) {
        os << format_real(x) << ' ' << format_real(y) << '\n';
    }
}

}  // namespace tubelab
