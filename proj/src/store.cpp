#include "renyi/store.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace renyi {

using nlohmann::json;

namespace {

constexpr double kNormCheck = 1e-9;
constexpr double kResidualCheck = 1e-9;

[[noreturn]] void malformed(const std::string& what) {
    throw StoreError(StoreError::Kind::malformed, "malformed run document: " + what);
}

json layout_json(const PairingLayout& l) {
    return {{"a1", l.a1}, {"a2", l.a2}, {"b1", l.b1}, {"b2", l.b2}};
}

PairingLayout layout_from(const json& j) {
    return {j.at("a1").get<int>(), j.at("a2").get<int>(), j.at("b1").get<int>(),
            j.at("b2").get<int>()};
}

json residuals_json(const ResidualReport& r) {
    return {{"alpha", r.alpha.value()},     {"e_bipartite", r.e_bipartite},
            {"e_a1b1", r.e_a1b1},           {"e_a2b2", r.e_a2b2},
            {"e_a1b2", r.e_a1b2},           {"e_a2b1", r.e_a2b1},
            {"ss_residual", r.ss_residual}, {"monogamy_residual", r.monogamy_residual}};
}

ResidualReport residuals_from(const json& j) {
    ResidualReport r;
    r.alpha = Alpha(j.at("alpha").get<double>());
    r.e_bipartite = j.at("e_bipartite").get<double>();
    r.e_a1b1 = j.at("e_a1b1").get<double>();
    r.e_a2b2 = j.at("e_a2b2").get<double>();
    r.e_a1b2 = j.at("e_a1b2").get<double>();
    r.e_a2b1 = j.at("e_a2b1").get<double>();
    r.ss_residual = j.at("ss_residual").get<double>();
    r.monogamy_residual = j.at("monogamy_residual").get<double>();
    return r;
}

json config_json(const SearchConfig& c) {
    return {{"alpha", c.alpha.value()},
            {"objective", to_string(c.objective)},
            {"layout", layout_json(c.layout)},
            {"delta0", c.delta0},
            {"counter_max", c.counter_max},
            {"delta_min", c.delta_min},
            {"rng", {{"seed", c.rng.seed}, {"stream_id", c.rng.stream_id}}},
            {"seed_state", c.seed_state ? to_json(*c.seed_state) : json(nullptr)}};
}

SearchConfig config_from(const json& j) {
    SearchConfig c;
    c.alpha = Alpha(j.at("alpha").get<double>());
    c.objective = objective_from_string(j.at("objective").get<std::string>());
    c.layout = layout_from(j.at("layout"));
    c.delta0 = j.at("delta0").get<double>();
    c.counter_max = j.at("counter_max").get<int>();
    c.delta_min = j.at("delta_min").get<double>();
    c.rng = {j.at("rng").at("seed").get<std::uint64_t>(),
             j.at("rng").at("stream_id").get<std::uint64_t>()};
    if (!j.at("seed_state").is_null()) c.seed_state = state_from_json(j.at("seed_state"));
    c.validate();
    return c;
}

json fingerprint_json(const Fingerprint& f) {
    return {{"alpha", f.alpha.value()},
            {"spectrum_a1a2", f.spectrum_a1a2},
            {"spectrum_a1b1", f.spectrum_a1b1},
            {"spectrum_a2b2", f.spectrum_a2b2},
            {"pair_entanglements", f.pair_entanglements},
            {"e_bipartite", f.e_bipartite}};
}

Fingerprint fingerprint_from(const json& j) {
    Fingerprint f;
    f.alpha = Alpha(j.at("alpha").get<double>());
    f.spectrum_a1a2 = j.at("spectrum_a1a2").get<std::vector<double>>();
    f.spectrum_a1b1 = j.at("spectrum_a1b1").get<std::vector<double>>();
    f.spectrum_a2b2 = j.at("spectrum_a2b2").get<std::vector<double>>();
    f.pair_entanglements = j.at("pair_entanglements").get<std::array<double, 6>>();
    f.e_bipartite = j.at("e_bipartite").get<double>();
    return f;
}

void write_text(const std::filesystem::path& destination, const std::string& text) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError(StoreError::Kind::io, "cannot open " + destination.string());
    out << text;
    out.close();
    if (!out) throw StoreError(StoreError::Kind::io, "failed writing " + destination.string());
}

json read_json(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw StoreError(StoreError::Kind::io, "cannot open " + source.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
}

} // namespace

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Fingerprint compute_fingerprint(const PureState& psi, const PairingLayout& layout, Alpha alpha) {
    layout.validate(psi.n_qubits());
    auto sorted_mask = [](int i, int j) { return SubsystemMask{std::min(i, j), std::max(i, j)}; };
    Fingerprint f;
    f.alpha = alpha;
    f.spectrum_a1a2 = hermitian_eigenvalues(partial_trace(psi, sorted_mask(layout.a1, layout.a2)));
    f.spectrum_a1b1 = hermitian_eigenvalues(partial_trace(psi, sorted_mask(layout.a1, layout.b1)));
    f.spectrum_a2b2 = hermitian_eigenvalues(partial_trace(psi, sorted_mask(layout.a2, layout.b2)));
    f.pair_entanglements = all_pair_entanglements(psi, alpha);
    f.e_bipartite = renyi_entropy(f.spectrum_a1a2, alpha);
    return f;
}

RunArchive make_archive(RunRecord record) {
    Fingerprint f = compute_fingerprint(record.final_state, record.config.layout, record.config.alpha);
    return RunArchive{kFormatVersion, utc_timestamp(), std::move(record), std::move(f)};
}

json to_json(const PureState& psi) {
    json amps = json::array();
    for (std::size_t i = 0; i < psi.dim(); ++i) amps.push_back({psi[i].real(), psi[i].imag()});
    return {{"n_qubits", psi.n_qubits()}, {"amplitudes", std::move(amps)}};
}

PureState state_from_json(const json& j) {
    const int n = j.at("n_qubits").get<int>();
    const json& amps = j.at("amplitudes");
    if (!amps.is_array()) malformed("amplitudes must be an array");
    CVector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const json& a = amps[i];
        if (!a.is_array() || a.size() != 2) malformed("complex numbers must be [re, im] pairs");
        v[static_cast<Eigen::Index>(i)] = cplx(a[0].get<double>(), a[1].get<double>());
    }
    if (n < 1 || n > kMaxQubits || v.size() != (Eigen::Index{1} << n))
        malformed("amplitude count does not match n_qubits");
    const double norm = v.norm();
    if (!(std::abs(norm - 1.0) <= kNormCheck))
        throw StoreError(StoreError::Kind::norm,
                         "state norm " + std::to_string(norm) + " deviates from 1 by more than 1e-9");
    // Keep stored amplitudes verbatim so archives round-trip bit for bit.
    if (std::abs(norm - 1.0) <= 1e-12) return PureState(n, std::move(v));
    return PureState::normalized(n, std::move(v));
}

json to_json(const RunArchive& a) {
    const RunRecord& r = a.record;
    json trace = json::array();
    for (const TraceEntry& e : r.trace)
        trace.push_back({{"step", e.step_index},
                         {"delta", e.delta},
                         {"state", to_json(e.state)},
                         {"ss_residual", e.ss_residual},
                         {"monogamy_residual", e.monogamy_residual},
                         {"states_since_accept", e.states_since_accept}});
    return {{"format_version", a.format_version},
            {"created_at", a.created_at},
            {"config", config_json(r.config)},
            {"trace", std::move(trace)},
            {"final_state", to_json(r.final_state)},
            {"final_delta", r.final_delta},
            {"total_states_generated", r.total_states_generated},
            {"final_residuals", residuals_json(r.final_residuals)},
            {"fingerprint", fingerprint_json(a.fingerprint)}};
}

RunArchive archive_from_json(const json& j) {
    try {
        if (!j.is_object()) malformed("top level must be an object");
        const int version = j.at("format_version").get<int>();
        if (version != kFormatVersion)
            throw StoreError(StoreError::Kind::version,
                             "unsupported format_version " + std::to_string(version));
        SearchConfig config = config_from(j.at("config"));
        std::vector<TraceEntry> trace;
        for (const json& e : j.at("trace"))
            trace.push_back(TraceEntry{e.at("step").get<std::uint64_t>(), e.at("delta").get<double>(),
                                       state_from_json(e.at("state")),
                                       e.at("ss_residual").get<double>(),
                                       e.at("monogamy_residual").get<double>(),
                                       e.at("states_since_accept").get<std::uint64_t>()});
        PureState final_state = state_from_json(j.at("final_state"));
        const ResidualReport stored = residuals_from(j.at("final_residuals"));

        const ResidualReport fresh = residual_report(final_state, config.layout, stored.alpha);
        const double worst = std::max(
            {std::abs(fresh.e_bipartite - stored.e_bipartite), std::abs(fresh.e_a1b1 - stored.e_a1b1),
             std::abs(fresh.e_a2b2 - stored.e_a2b2), std::abs(fresh.e_a1b2 - stored.e_a1b2),
             std::abs(fresh.e_a2b1 - stored.e_a2b1), std::abs(fresh.ss_residual - stored.ss_residual),
             std::abs(fresh.monogamy_residual - stored.monogamy_residual)});
        if (!(worst <= kResidualCheck))
            throw StoreError(StoreError::Kind::residual,
                             "stored residuals differ from re-evaluation by " + std::to_string(worst));

        RunRecord record{std::move(config),
                         std::move(trace),
                         std::move(final_state),
                         stored,
                         j.at("final_delta").get<double>(),
                         j.at("total_states_generated").get<std::uint64_t>()};
        return RunArchive{version, j.at("created_at").get<std::string>(), std::move(record),
                          fingerprint_from(j.at("fingerprint"))};
    } catch (const json::exception& e) {
        malformed(e.what());
    } catch (const std::invalid_argument& e) {
        malformed(e.what());
    } catch (const NumericError& e) {
        throw StoreError(StoreError::Kind::norm, e.what());
    }
}

void save_run(const RunArchive& archive, const std::filesystem::path& destination) {
    write_text(destination, to_json(archive).dump(2) + "\n");
}

RunArchive load_run(const std::filesystem::path& source) { return archive_from_json(read_json(source)); }

PureState load_state(const std::filesystem::path& source) {
    const json j = read_json(source);
    if (j.contains("format_version")) return archive_from_json(j).record.final_state;
    try {
        return state_from_json(j);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
}

void save_state(const PureState& psi, const std::filesystem::path& destination) {
    write_text(destination, to_json(psi).dump(2) + "\n");
}

json to_json(const ScanSummary& s, Alpha alpha, const PairingLayout& layout) {
    return {{"n_states", s.n_states},
            {"alpha", alpha.value()},
            {"layout", layout_json(layout)},
            {"violations", s.violations},
            {"min_residual", s.min_residual},
            {"argmin_index", s.argmin_index},
            {"argmin_state", s.argmin_state ? to_json(*s.argmin_state) : json(nullptr)}};
}

void save_scan(const ScanSummary& summary, Alpha alpha, const PairingLayout& layout,
               const std::filesystem::path& destination) {
    write_text(destination, to_json(summary, alpha, layout).dump(2) + "\n");
}

} // namespace renyi
