#include "cli.hpp"

#include "criteria.hpp"

#include "spinent/critical.hpp"
#include "spinent/model.hpp"
#include "spinent/nmr.hpp"
#include "spinent/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinent::cli {

namespace {

using nlohmann::json;

// Input problems detected after parsing map to the usage exit code.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// 12 significant digits; magnitudes below 1e-14 are printed as 0.
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < 1e-14 ? 0.0 : x);
    return buf;
}

double round12(double x) { return std::stod(num(x)); }

struct ModelOptions {
    int n = 4;
    double j = 1.0;
    std::string sign;
    std::string boundary = "periodic";
    std::string config;
    bool dedupe_n2 = false;
};

struct OutputOptions {
    std::string path;
    std::string format = "csv";
};

void add_model_options(CLI::App* cmd, ModelOptions& m) {
    auto* n = cmd->add_option("--n", m.n, "Number of qubits")->capture_default_str()->check(CLI::Range(1, kMaxQubits));
    auto* j = cmd->add_option("--j", m.j, "Coupling J (energy unit)")->capture_default_str();
    auto* sign = cmd->add_option("--sign", m.sign, "Shorthand for J = +1 or J = -1")->check(CLI::IsMember({"+", "-"}));
    sign->excludes(j);
    auto* b = cmd->add_option("--boundary", m.boundary, "periodic or open")
                  ->capture_default_str()
                  ->check(CLI::IsMember({"periodic", "open"}));
    auto* cfg = cmd->add_option("--config", m.config, "JSON model file (n_qubits, boundary, couplings, delta, fields)")
                    ->check(CLI::ExistingFile);
    cfg->excludes(n)->excludes(j)->excludes(sign)->excludes(b);
    cmd->add_flag("--dedupe-n2", m.dedupe_n2, "Count the single bond of the N=2 ring once");
}

void add_output_options(CLI::App* cmd, OutputOptions& o) {
    cmd->add_option("--output,-o", o.path, "Output file (default: stdout)");
    cmd->add_option("--format", o.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
}

ModelSpec build_spec(const ModelOptions& m, std::optional<double> delta) {
    ModelSpec spec;
    if (!m.config.empty()) {
        spec = load_model_spec(m.config);
        if (m.dedupe_n2) spec.dedupe_n2 = true;
    } else {
        const double j = m.sign.empty() ? m.j : (m.sign == "+" ? 1.0 : -1.0);
        if (boundary_from_string(m.boundary) == Boundary::periodic) {
            spec = ModelSpec::ring(m.n, j, 0.0);
        } else {
            spec = ModelSpec::chain(std::vector<double>(static_cast<std::size_t>(std::max(m.n - 1, 0)), j), 0.0,
                                    std::vector<double>(static_cast<std::size_t>(m.n), 0.0));
        }
        spec.dedupe_n2 = m.dedupe_n2;
    }
    if (delta) spec.delta = *delta;
    spec.validate();
    return spec;
}

SitePair parse_pair(const std::string& text, int n_qubits) {
    SitePair p;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> p.n >> comma >> p.m) || comma != ',' || !(in >> std::ws).eof()) {
        throw UsageError("--pair expects n,m, got \"" + text + "\"");
    }
    if (!(1 <= p.n && p.n < p.m && p.m <= n_qubits)) {
        throw UsageError("--pair " + text + " out of range for N=" + std::to_string(n_qubits));
    }
    return p;
}

Range parse_range(const std::string& text, const char* flag) {
    try {
        return Range::parse(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

double parse_single(const std::string& text, const char* flag) {
    const Range r = parse_range(text, flag);
    if (r.lo != r.hi) throw UsageError(std::string(flag) + " expects a single value here");
    return r.lo;
}

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_single(item, "--levels"));
    return out;
}

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write to " + path + " failed");
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json spec_json(const ModelSpec& spec) { return json::parse(model_spec_to_json(spec)); }

std::string tc_csv(const std::vector<TcPoint>& tc) {
    std::string s = "delta,tc,identically_zero\n";
    for (const TcPoint& p : tc) s += num(p.delta) + "," + num(p.tc) + "," + (p.identically_zero ? "1" : "0") + "\n";
    return s;
}

json tc_json(const std::vector<TcPoint>& tc) {
    json a = json::array();
    for (const TcPoint& p : tc) {
        a.push_back({{"delta", round12(p.delta)}, {"tc", round12(p.tc)}, {"identically_zero", p.identically_zero}});
    }
    return a;
}

std::string iso_csv(const std::vector<IsoPoint>& iso) {
    std::string s = "level,delta,temperature\n";
    for (const IsoPoint& p : iso) s += num(p.level) + "," + num(p.delta) + "," + num(p.temperature) + "\n";
    return s;
}

int default_jobs() {
    if (const char* env = std::getenv("SPINENT_JOBS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement in small XXZ spin systems: spectra, thermal concurrence, critical temperatures "
                 "and the five-qubit encoding stages."};
    app.name("spinent");
    app.require_subcommand(1);
    app.fallthrough();
    int jobs = default_jobs();
    app.add_option("--jobs", jobs, "Worker threads (default: $SPINENT_JOBS or 1)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    ModelOptions model;
    OutputOptions output;
    std::string delta_text;
    std::string t_text = "0.01:3:0.01";
    std::string pair_text = "1,2";
    std::string levels_text;
    std::string tc_output;
    std::string iso_output;
    std::string stage;
    bool all_stages = false;
    std::uint64_t seed = verify::Options{}.seed;
    std::vector<int> only;

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues with (s, k) labels, columns energy,s,k");
    add_model_options(spectrum, model);
    add_output_options(spectrum, output);
    spectrum->add_option("--delta", delta_text, "Anisotropy Delta (default: 1, or the config value)");

    auto* surface = app.add_subcommand("surface", "Pair concurrence on a (Delta, T) grid, columns delta,temperature,concurrence");
    add_model_options(surface, model);
    add_output_options(surface, output);
    surface->add_option("--delta", delta_text, "Delta range lo:hi:step (default -2:8:0.1)");
    surface->add_option("--t", t_text, "Temperature range lo:hi:step, lo > 0")->capture_default_str();
    surface->add_option("--pair", pair_text, "Site pair n,m")->capture_default_str();
    surface->add_option("--levels", levels_text, "Comma-separated iso-concurrence levels");
    surface->add_option("--tc-output", tc_output, "Also write the T_c(Delta) overlay as CSV");
    surface->add_option("--iso-output", iso_output, "Also write iso-concurrence points as CSV");

    auto* tc = app.add_subcommand("tc", "Critical temperature per Delta, columns delta,tc,identically_zero");
    add_model_options(tc, model);
    add_output_options(tc, output);
    tc->add_option("--delta", delta_text, "Delta range lo:hi:step (default -3:8:0.25)");
    tc->add_option("--pair", pair_text, "Site pair n,m")->capture_default_str();

    auto* nmr = app.add_subcommand("nmr", "Expectation values and entanglement of encoding stages A..E as JSON");
    auto* stage_opt = nmr->add_option("--stage", stage, "Single stage A..E")->check(CLI::IsMember({"A", "B", "C", "D", "E"}));
    nmr->add_flag("--all", all_stages, "All five stages (default)")->excludes(stage_opt);
    nmr->add_option("--output,-o", output.path, "Output file (default: stdout)");

    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks and print one PASS/FAIL line each");
    verify_cmd->add_option("--seed", seed, "Seed for the randomized checks")->capture_default_str();
    verify_cmd->add_option("--only", only, "Run only these criterion ids")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    // Inputs are validated before any computation starts.
    std::function<std::string()> compute;
    std::string target = output.path;
    try {
        if (spectrum->parsed()) {
            std::optional<double> delta;
            if (!delta_text.empty()) delta = parse_single(delta_text, "--delta");
            else if (model.config.empty()) delta = 1.0;
            const ModelSpec spec = build_spec(model, delta);
            const bool as_json = output.format == "json";
            compute = [spec, as_json] {
                const SpectrumResult sr = diagonalize(spec);
                if (as_json) {
                    json rows = json::array();
                    for (std::size_t i = 0; i < sr.size(); ++i) {
                        const SectorLabel& l = sr.label(i);
                        rows.push_back({{"energy", round12(sr.energy(i))},
                                        {"s", l.s},
                                        {"k", l.k ? json(*l.k) : json(nullptr)}});
                    }
                    return dump({{"schema_version", 1}, {"command", "spectrum"}, {"model", spec_json(spec)}, {"rows", rows}});
                }
                std::string s = "energy,s,k\n";
                for (std::size_t i = 0; i < sr.size(); ++i) {
                    const SectorLabel& l = sr.label(i);
                    s += num(sr.energy(i)) + "," + std::to_string(l.s) + "," + (l.k ? std::to_string(*l.k) : "") + "\n";
                }
                return s;
            };
        } else if (surface->parsed()) {
            SweepGrid grid;
            grid.spec_template = build_spec(model, std::nullopt);
            grid.delta = parse_range(delta_text.empty() ? "-2:8:0.1" : delta_text, "--delta");
            grid.temperature = parse_range(t_text, "--t");
            if (!(grid.temperature.lo > 0.0)) throw UsageError("--t: temperatures must be > 0");
            grid.pair = parse_pair(pair_text, grid.spec_template.n_qubits);
            if (!levels_text.empty()) grid.iso_levels = parse_levels(levels_text);
            const bool as_json = output.format == "json";
            compute = [grid, as_json, jobs, tc_output, iso_output] {
                const SweepResult r = sweep(grid, jobs);
                if (!tc_output.empty()) emit(tc_output, tc_csv(r.tc), std::cout);
                if (!iso_output.empty()) emit(iso_output, iso_csv(r.iso), std::cout);
                if (as_json) {
                    json rows = json::array();
                    for (const SweepRow& row : r.rows) {
                        rows.push_back({{"delta", round12(row.delta)},
                                        {"temperature", round12(row.temperature)},
                                        {"concurrence", round12(row.concurrence)}});
                    }
                    json iso = json::array();
                    for (const IsoPoint& p : r.iso) {
                        iso.push_back({{"level", round12(p.level)},
                                       {"delta", round12(p.delta)},
                                       {"temperature", round12(p.temperature)}});
                    }
                    return dump({{"schema_version", 1},
                                 {"command", "surface"},
                                 {"model", spec_json(grid.spec_template)},
                                 {"pair", {grid.pair.n, grid.pair.m}},
                                 {"rows", rows},
                                 {"tc", tc_json(r.tc)},
                                 {"iso", iso}});
                }
                std::string s = "delta,temperature,concurrence\n";
                for (const SweepRow& row : r.rows) {
                    s += num(row.delta) + "," + num(row.temperature) + "," + num(row.concurrence) + "\n";
                }
                return s;
            };
        } else if (tc->parsed()) {
            const ModelSpec spec = build_spec(model, std::nullopt);
            const std::vector<double> deltas = parse_range(delta_text.empty() ? "-3:8:0.25" : delta_text, "--delta").values();
            const SitePair pair = parse_pair(pair_text, spec.n_qubits);
            const bool as_json = output.format == "json";
            compute = [spec, deltas, pair, as_json, jobs] {
                const std::vector<TcPoint> points = tc_curve(spec, pair, deltas, jobs);
                if (as_json) {
                    return dump({{"schema_version", 1},
                                 {"command", "tc"},
                                 {"model", spec_json(spec)},
                                 {"pair", {pair.n, pair.m}},
                                 {"rows", tc_json(points)}});
                }
                return tc_csv(points);
            };
        } else if (nmr->parsed()) {
            const std::string labels = stage.empty() ? "ABCDE" : stage;
            compute = [labels] {
                std::vector<EntanglementReport> reports;
                for (char l : labels) reports.push_back(stage_entanglement(l));
                return reports_to_json(reports);
            };
        } else if (verify_cmd->parsed()) {
            for (int id : only) {
                if (id < 1 || id > static_cast<int>(verify::criteria().size())) {
                    throw UsageError("--only: unknown criterion " + std::to_string(id));
                }
            }
            verify::Options opts;
            opts.seed = seed;
            opts.jobs = jobs;
            bool all_passed = true;
            for (const verify::Criterion& c : verify::criteria()) {
                if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
                const verify::CriterionResult r = verify::run_criterion(c, opts);
                out << verify::format_result(r) << "\n" << std::flush;
                all_passed = all_passed && r.passed;
            }
            return all_passed ? kExitOk : kExitComputation;
        }
    } catch (const std::exception& e) {
        err << "spinent: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        emit(target, compute(), out);
    } catch (const std::exception& e) {
        err << "spinent: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitOk;
}

}  // namespace spinent::cli
