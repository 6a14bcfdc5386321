#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "renyi/measures.hpp"
#include "renyi/sampler.hpp"

namespace renyi {

/// Parameters of one Monte Carlo minimization run.
struct SearchConfig {
    Alpha alpha{2.0};
    Objective objective = Objective::ss;
    PairingLayout layout = PairingLayout::canonical();
    double delta0 = 0.5;
    int counter_max = 1000;
    double delta_min = 1e-4;
    RngSeed rng{};
    /// Haar draw from `rng` when absent.
    std::optional<PureState> seed_state;

    /// delta0 <= delta_min is allowed and yields an evaluation-only run.
    void validate() const;
};

/// One accepted state of a run. Entry 0 is the seed.
struct TraceEntry {
    std::uint64_t step_index = 0;
    double delta = 0.0;
    PureState state;
    double ss_residual = 0.0;
    double monogamy_residual = 0.0;
    std::uint64_t states_since_accept = 0;
};

struct RunRecord {
    SearchConfig config;
    std::vector<TraceEntry> trace;
    PureState final_state;
    ResidualReport final_residuals;
    double final_delta = 0.0;
    std::uint64_t total_states_generated = 0;

    double final_objective() const { return objective_value(final_residuals, config.objective); }
};

/// Adaptive-radius Monte Carlo descent. Candidates are drawn within the
/// current trace distance of the seed; an improvement (strict <) becomes the
/// new seed and resets the stall counter; counter_max consecutive failures
/// halve the radius. Stops once the radius drops below delta_min.
RunRecord minimize_residual(const SearchConfig& config);

/// Independent restarts on streams rng.stream_id + 0, 1, ..., restarts - 1.
/// The result order follows the stream order regardless of `workers`.
std::vector<RunRecord> multistart(const SearchConfig& config, int restarts, int workers);

struct WalkResult {
    /// The start followed by every accepted move.
    std::vector<ResidualReport> visited;
    std::uint64_t proposals = 0;
    /// Rejected proposals whose monogamy residual is a violation although
    /// their SS residual is not.
    std::uint64_t monogamy_only_violations = 0;
};

/// Random walk confined to the SS-violation region: proposals within `delta`
/// are accepted iff their SS residual stays a violation. `steps` counts
/// accepted moves.
WalkResult random_walk_region(const PureState& start, double delta, int steps, Alpha alpha,
                              const PairingLayout& layout, StateSampler& rng);

struct ContinuationSchedule {
    std::vector<Alpha> alphas;
    double delta0 = 1e-2;
    double delta_min = 1e-8;
    int counter_max = 1000;
    Objective objective = Objective::ss;

    void validate() const;
};

/// Re-minimizes at each alpha of the schedule, seeding every stage with the
/// previous stage's final state. Stage k draws from stream
/// rng.stream_id + k.
std::vector<RunRecord> alpha_continuation(const ContinuationSchedule& schedule,
                                          const RunRecord& initial, RngSeed rng);

struct ScanSummary {
    std::uint64_t n_states = 0;
    std::uint64_t violations = 0;
    double min_residual = 0.0;
    std::uint64_t argmin_index = 0;
    std::optional<PureState> argmin_state;
};

/// State number i of a scan. Must be a pure function of i.
using StateSource = std::function<PureState(std::uint64_t)>;

/// Haar draw i comes from stream rng.stream_id + i.
StateSource haar_source(RngSeed rng, int n_qubits = 4);

/// Evaluates the SS residual on n_states states, split into contiguous
/// blocks over `workers` threads. Ties for the minimum resolve to the lowest
/// index, so the summary does not depend on the worker count.
ScanSummary haar_scan(std::uint64_t n_states, Alpha alpha, const PairingLayout& layout,
                      RngSeed rng, int workers);
ScanSummary haar_scan(std::uint64_t n_states, Alpha alpha, const PairingLayout& layout,
                      const StateSource& source, int workers);

} // namespace renyi
