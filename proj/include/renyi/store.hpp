#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/search.hpp"

namespace renyi {

inline constexpr int kFormatVersion = 1;

class StoreError : public std::runtime_error {
public:
    enum class Kind { io, malformed, version, norm, residual };

    StoreError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Invariant description of a 4-qubit state at one alpha.
struct Fingerprint {
    Alpha alpha{2.0};
    std::vector<double> spectrum_a1a2;
    std::vector<double> spectrum_a1b1;
    std::vector<double> spectrum_a2b2;
    /// Ordered (01, 02, 03, 12, 13, 23).
    std::array<double, 6> pair_entanglements{};
    double e_bipartite = 0.0;
};

Fingerprint compute_fingerprint(const PureState& psi, const PairingLayout& layout, Alpha alpha);

struct RunArchive {
    int format_version = kFormatVersion;
    std::string created_at;
    RunRecord record;
    Fingerprint fingerprint;
};

/// Wraps a record with the current UTC time and the final state's fingerprint.
RunArchive make_archive(RunRecord record);

std::string utc_timestamp();

nlohmann::json to_json(const PureState& psi);
PureState state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunArchive& archive);
/// Parses and validates (version, state norms, residual re-evaluation).
RunArchive archive_from_json(const nlohmann::json& j);

void save_run(const RunArchive& archive, const std::filesystem::path& destination);
RunArchive load_run(const std::filesystem::path& source);

/// Accepts a run archive (its final state) or a bare state document
/// {"n_qubits": n, "amplitudes": [[re, im], ...]}.
PureState load_state(const std::filesystem::path& source);
void save_state(const PureState& psi, const std::filesystem::path& destination);

nlohmann::json to_json(const ScanSummary& summary, Alpha alpha, const PairingLayout& layout);
void save_scan(const ScanSummary& summary, Alpha alpha, const PairingLayout& layout,
               const std::filesystem::path& destination);

} // namespace renyi
