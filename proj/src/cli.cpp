#include "renyi/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "renyi/verify.hpp"

namespace renyi::cli {

using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int default_workers() {
    if (const char* env = std::getenv(kWorkersEnv)) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
    }
    return 1;
}

json rounded(const std::vector<double>& values) {
    json out = json::array();
    for (double v : values) out.push_back(sig10(v));
    return out;
}

json report_json(const ResidualReport& r) {
    return {{"e_bipartite", sig10(r.e_bipartite)}, {"e_a1b1", sig10(r.e_a1b1)},
            {"e_a2b2", sig10(r.e_a2b2)},           {"e_a1b2", sig10(r.e_a1b2)},
            {"e_a2b1", sig10(r.e_a2b1)},           {"ss_residual", sig10(r.ss_residual)},
            {"monogamy_residual", sig10(r.monogamy_residual)}};
}

PairingLayout parse_layout(const std::string& text) {
    std::vector<int> q;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            q.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--layout expects four comma-separated qubit indices");
        }
    }
    if (q.size() != 4) throw UsageError("--layout expects four comma-separated qubit indices");
    PairingLayout l{q[0], q[1], q[2], q[3]};
    try {
        l.validate(4);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return l;
}

std::vector<Alpha> parse_schedule(const std::string& text) {
    std::vector<Alpha> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.emplace_back(v);
        } catch (const std::exception&) {
            throw UsageError("--schedule expects comma-separated alpha values >= 1");
        }
    }
    return out;
}

std::pair<int, int> parse_qubit_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw UsageError("--qubits expects N or LO..HI");
    }
}

Alpha checked_alpha(double v) {
    try {
        return Alpha(v);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void print(std::ostream& out, const json& summary) { out << summary.dump() << '\n'; }

// Options of every command, bound before parsing.
struct Options {
    // scan
    std::uint64_t scan_n = 100000;
    // shared
    double alpha = 2.0;
    int workers = default_workers();
    std::uint64_t rng_seed = 0;
    std::string layout = "0,1,2,3";
    std::string out_path;
    // search
    std::string objective = "ss";
    double delta0 = 0.5;
    int counter_max = 1000;
    double delta_min = 1e-4;
    std::string seed_file;
    int restarts = 1;
    // continue
    std::string schedule = "1.5,1.2,1.1,1.05,1.02,1.01,1.005,1.002";
    double cont_delta0 = 1e-2;
    double cont_delta_min = 1e-8;
    std::string from;
    std::string out_dir = ".";
    // verify
    std::string qubits = "3..6";
    std::uint64_t samples = 10000;
    // analyze / trace-csv
    std::string file;
    bool alpha_given = false;
};

int run_scan(const Options& o, std::ostream& out) {
    const Alpha alpha = checked_alpha(o.alpha);
    const PairingLayout layout = parse_layout(o.layout);
    if (o.scan_n < 1) throw UsageError("--n must be >= 1");
    const ScanSummary s = haar_scan(o.scan_n, alpha, layout, RngSeed{o.rng_seed, 0}, o.workers);
    if (!o.out_path.empty()) save_scan(s, alpha, layout, o.out_path);
    print(out, {{"command", "scan"},
                {"n_states", s.n_states},
                {"alpha", sig10(alpha.value())},
                {"violations", s.violations},
                {"min_residual", sig10(s.min_residual)},
                {"argmin_index", s.argmin_index}});
    return kSuccess;
}

int run_search(const Options& o, std::ostream& out) {
    SearchConfig c;
    c.alpha = checked_alpha(o.alpha);
    try {
        c.objective = objective_from_string(o.objective);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    c.layout = parse_layout(o.layout);
    c.delta0 = o.delta0;
    c.counter_max = o.counter_max;
    c.delta_min = o.delta_min;
    c.rng = RngSeed{o.rng_seed, 0};
    if (o.restarts < 1) throw UsageError("--restarts must be >= 1");
    if (!o.seed_file.empty()) c.seed_state = load_state(o.seed_file);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::vector<RunRecord> runs = multistart(c, o.restarts, o.workers);
    std::size_t best = 0;
    json terminal = json::array();
    std::uint64_t generated = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        terminal.push_back(sig10(runs[i].final_objective()));
        generated += runs[i].total_states_generated;
        if (runs[i].final_objective() < runs[best].final_objective()) best = i;
    }
    const RunRecord& b = runs[best];
    json summary = {{"command", "search"},
                    {"alpha", sig10(c.alpha.value())},
                    {"objective", to_string(c.objective)},
                    {"restarts", o.restarts},
                    {"best_stream", b.config.rng.stream_id},
                    {"best_residuals", report_json(b.final_residuals)},
                    {"accepted_states", b.trace.size()},
                    {"terminal_residuals", std::move(terminal)},
                    {"states_generated", generated}};
    if (!o.out_path.empty()) {
        save_run(make_archive(b), o.out_path);
        summary["out"] = o.out_path;
    }
    print(out, summary);
    return kSuccess;
}

int run_continue(const Options& o, std::ostream& out) {
    if (o.from.empty()) throw UsageError("--from is required");
    ContinuationSchedule s;
    s.alphas = parse_schedule(o.schedule);
    s.delta0 = o.cont_delta0;
    s.delta_min = o.cont_delta_min;
    s.counter_max = o.counter_max;
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const RunArchive initial = load_run(o.from);
    std::vector<RunRecord> stages;
    try {
        stages = alpha_continuation(s, initial.record, RngSeed{o.rng_seed, 0});
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::filesystem::create_directories(o.out_dir);
    json rows = json::array();
    for (std::size_t k = 0; k < stages.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "stage_%02zu_alpha_%s.json", k,
                      fmt10(stages[k].config.alpha.value()).c_str());
        const auto path = std::filesystem::path(o.out_dir) / name;
        save_run(make_archive(stages[k]), path);
        rows.push_back({{"alpha", sig10(stages[k].config.alpha.value())},
                        {"ss_residual", sig10(stages[k].final_residuals.ss_residual)},
                        {"monogamy_residual", sig10(stages[k].final_residuals.monogamy_residual)},
                        {"file", path.string()}});
    }
    print(out, {{"command", "continue"}, {"stages", std::move(rows)}});
    return kSuccess;
}

int run_verify_r2(const Options& o, std::ostream& out) {
    const auto [lo, hi] = parse_qubit_range(o.qubits);
    if (lo < 3 || hi > kMaxQubits || lo > hi) throw UsageError("--qubits must lie within 3..8");
    json rows = json::array();
    std::uint64_t violations = 0;
    for (int n = lo; n <= hi; ++n) {
        const VerifyReport r = verify_ckw_r2(n, o.samples, RngSeed{o.rng_seed, static_cast<std::uint64_t>(n)});
        violations += r.violations;
        rows.push_back({{"qubits", n},
                        {"samples", r.samples},
                        {"violations", r.violations},
                        {"min_residual", sig10(r.min_residual)}});
    }
    print(out, {{"command", "verify monogamy-r2"},
                {"violations", violations},
                {"report", std::to_string(violations) + " violations"},
                {"per_size", std::move(rows)}});
    return violations == 0 ? kSuccess : kViolationFound;
}

int run_verify_sum(const Options& o, std::ostream& out) {
    const VerifyReport r = verify_sum_inequality(o.samples, RngSeed{o.rng_seed, 0});
    print(out, {{"command", "verify sum-inequality"},
                {"samples", r.samples},
                {"violations", r.violations},
                {"report", std::to_string(r.violations) + " violations"},
                {"min_residual", sig10(r.min_residual)}});
    return r.violations == 0 ? kSuccess : kViolationFound;
}

int run_analyze(const Options& o, std::ostream& out) {
    const RunArchive a = load_run(o.file);
    const Alpha alpha = o.alpha_given ? checked_alpha(o.alpha) : a.record.config.alpha;
    const PairingLayout& layout = a.record.config.layout;
    const PureState& psi = a.record.final_state;
    const Fingerprint f = compute_fingerprint(psi, layout, alpha);
    const ResidualReport r = residual_report(psi, layout, alpha);
    static constexpr std::array<const char*, 6> kPairs{"01", "02", "03", "12", "13", "23"};
    json pairs = json::object();
    for (std::size_t i = 0; i < kPairs.size(); ++i) pairs[kPairs[i]] = sig10(f.pair_entanglements[i]);
    print(out, {{"command", "analyze"},
                {"alpha", sig10(alpha.value())},
                {"spectrum_a1a2", rounded(f.spectrum_a1a2)},
                {"spectrum_a1b1", rounded(f.spectrum_a1b1)},
                {"spectrum_a2b2", rounded(f.spectrum_a2b2)},
                {"pair_entanglements", std::move(pairs)},
                {"residuals", report_json(r)}});
    return kSuccess;
}

int run_trace_csv(const Options& o, std::ostream& out) {
    if (o.out_path.empty()) throw UsageError("--out is required");
    const RunArchive a = load_run(o.file);
    emit_trace_csv(a, o.out_path);
    print(out, {{"command", "trace-csv"}, {"rows", a.record.trace.size()}, {"out", o.out_path}});
    return kSuccess;
}

} // namespace

double sig10(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(fmt10(value).c_str(), nullptr);
}

void emit_trace_csv(const RunArchive& archive, const std::filesystem::path& destination) {
    std::ofstream csv(destination, std::ios::trunc);
    if (!csv) throw StoreError(StoreError::Kind::io, "cannot open " + destination.string());
    csv << "step,delta,ss_residual,monogamy_residual,states_since_accept\n";
    for (const TraceEntry& e : archive.record.trace)
        csv << e.step_index << ',' << fmt10(e.delta) << ',' << fmt10(e.ss_residual) << ','
            << fmt10(e.monogamy_residual) << ',' << e.states_since_accept << '\n';
    csv.close();
    if (!csv) throw StoreError(StoreError::Kind::io, "failed writing " + destination.string());
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Renyi entanglement: superadditivity and monogamy counterexample search"};
    app.name("renyi");
    app.require_subcommand(1);

    auto* scan = app.add_subcommand("scan", "Evaluate the SS residual on Haar-random 4-qubit states");
    scan->add_option("--n", o.scan_n, "Number of states")->capture_default_str();
    scan->add_option("--alpha", o.alpha, "Renyi order (>= 1)")->capture_default_str();
    scan->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1, 1024));
    scan->add_option("--rng-seed", o.rng_seed, "Random seed");
    scan->add_option("--layout", o.layout, "Qubits a1,a2,b1,b2")->capture_default_str();
    scan->add_option("--out", o.out_path, "Write the scan summary document here");

    auto* search = app.add_subcommand("search", "Monte Carlo minimization of a residual");
    search->add_option("--alpha", o.alpha, "Renyi order (>= 1)")->capture_default_str();
    search->add_option("--objective", o.objective, "ss or monogamy2")->capture_default_str();
    search->add_option("--delta0", o.delta0, "Initial trace-distance radius")->capture_default_str();
    search->add_option("--counter-max", o.counter_max, "Failures before halving")->capture_default_str();
    search->add_option("--delta-min", o.delta_min, "Stop radius")->capture_default_str();
    search->add_option("--seed-file", o.seed_file, "Start from this state or run archive");
    search->add_option("--rng-seed", o.rng_seed, "Random seed");
    search->add_option("--restarts", o.restarts, "Independent restarts")->capture_default_str();
    search->add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1, 1024));
    search->add_option("--layout", o.layout, "Qubits a1,a2,b1,b2")->capture_default_str();
    search->add_option("--out", o.out_path, "Write the best run archive here");

    auto* cont = app.add_subcommand("continue", "Alpha continuation from a violating run");
    cont->add_option("--schedule", o.schedule, "Descending alphas > 1")->capture_default_str();
    cont->add_option("--delta0", o.cont_delta0, "Initial radius per stage")->capture_default_str();
    cont->add_option("--delta-min", o.cont_delta_min, "Stop radius per stage")->capture_default_str();
    cont->add_option("--counter-max", o.counter_max, "Failures before halving")->capture_default_str();
    cont->add_option("--from", o.from, "Run archive of the starting optimum");
    cont->add_option("--out-dir", o.out_dir, "Directory for stage archives")->capture_default_str();
    cont->add_option("--rng-seed", o.rng_seed, "Random seed");

    auto* verify = app.add_subcommand("verify", "Numerical inequality verifiers");
    verify->require_subcommand(1);
    auto* r2 = verify->add_subcommand("monogamy-r2", "CKW monogamy of R2 on Haar-random states");
    r2->add_option("--qubits", o.qubits, "N or LO..HI")->capture_default_str();
    r2->add_option("--samples", o.samples, "States per size")->capture_default_str();
    r2->add_option("--rng-seed", o.rng_seed, "Random seed");
    auto* sum = verify->add_subcommand("sum-inequality", "Sum inequality on admissible vectors");
    sum->add_option("--samples", o.samples, "Random vectors")->capture_default_str();
    sum->add_option("--rng-seed", o.rng_seed, "Random seed");

    auto* analyze = app.add_subcommand("analyze", "Fingerprint and residuals of a run archive");
    analyze->add_option("file", o.file, "Run archive")->required();
    auto* analyze_alpha = analyze->add_option("--alpha", o.alpha, "Renyi order (default: the run's)");

    auto* trace = app.add_subcommand("trace-csv", "Export a run's accepted-state trace as CSV");
    trace->add_option("file", o.file, "Run archive")->required();
    trace->add_option("--out", o.out_path, "CSV destination");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }
    o.alpha_given = analyze_alpha->count() > 0;

    try {
        if (scan->parsed()) return run_scan(o, out);
        if (search->parsed()) return run_search(o, out);
        if (cont->parsed()) return run_continue(o, out);
        if (r2->parsed()) return run_verify_r2(o, out);
        if (sum->parsed()) return run_verify_sum(o, out);
        if (analyze->parsed()) return run_analyze(o, out);
        if (trace->parsed()) return run_trace_csv(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const StoreError& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == StoreError::Kind::io ? kUsage : kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

} // namespace renyi::cli
