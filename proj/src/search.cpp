#include "renyi/search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace renyi {

namespace {

// Runs task(i) for i in [0, count) on up to `workers` threads.
template <typename Task>
void parallel_for(std::size_t count, int workers, Task&& task) {
    const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
    if (n_threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(n_threads, count); ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

TraceEntry make_entry(std::uint64_t step, double delta, const PureState& state,
                      const ResidualReport& report, std::uint64_t since) {
    return TraceEntry{step, delta, state, report.ss_residual, report.monogamy_residual, since};
}

} // namespace

void SearchConfig::validate() const {
    layout.validate(4);
    if (!(delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
    if (!(delta_min > 0.0)) throw std::invalid_argument("delta_min must be positive");
    if (counter_max < 1) throw std::invalid_argument("counter_max must be >= 1");
    if (seed_state && seed_state->n_qubits() != 4)
        throw std::invalid_argument("seed state must have 4 qubits");
}

RunRecord minimize_residual(const SearchConfig& config) {
    config.validate();
    StateSampler sampler(config.rng);
    PureState seed = config.seed_state ? *config.seed_state : sampler.haar_state(4);

    double delta = config.delta0;
    ResidualReport report = residual_report(seed, config.layout, config.alpha);
    double best = objective_value(report, config.objective);

    std::vector<TraceEntry> trace;
    trace.push_back(make_entry(0, delta, seed, report, 0));

    std::uint64_t total = 0;
    std::uint64_t since_accept = 0;
    int stall = 0;
    while (delta >= config.delta_min) {
        PureState candidate = sampler.perturb_within(seed, delta);
        ++total;
        ++since_accept;
        ++stall;
        const double value =
            evaluate_objective(candidate, config.layout, config.alpha, config.objective);
        if (value < best) {
            best = value;
            seed = std::move(candidate);
            report = residual_report(seed, config.layout, config.alpha);
            trace.push_back(make_entry(trace.size(), delta, seed, report, since_accept));
            since_accept = 0;
            stall = 0;
        } else if (stall >= config.counter_max) {
            delta /= 2.0;
            stall = 0;
        }
    }

    return RunRecord{config, std::move(trace), seed, report, delta, total};
}

std::vector<RunRecord> multistart(const SearchConfig& config, int restarts, int workers) {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    config.validate();
    std::vector<std::optional<RunRecord>> slots(static_cast<std::size_t>(restarts));
    parallel_for(slots.size(), workers, [&](std::size_t i) {
        SearchConfig c = config;
        c.rng = config.rng.with_stream(config.rng.stream_id + i);
        slots[i] = minimize_residual(c);
    });
    std::vector<RunRecord> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

WalkResult random_walk_region(const PureState& start, double delta, int steps, Alpha alpha,
                              const PairingLayout& layout, StateSampler& rng) {
    constexpr std::uint64_t kMaxConsecutiveRejections = 100000;
    if (steps < 0) throw std::invalid_argument("steps must be non-negative");
    if (!(delta > 0.0)) throw std::invalid_argument("walk radius must be positive");
    WalkResult out;
    ResidualReport current = residual_report(start, layout, alpha);
    if (!is_violation(current.ss_residual))
        throw std::invalid_argument("walk start is not inside the violation region");
    out.visited.push_back(current);

    PureState position = start;
    std::uint64_t rejections = 0;
    while (out.visited.size() < static_cast<std::size_t>(steps) + 1) {
        PureState candidate = rng.perturb_within(position, delta);
        ++out.proposals;
        const ResidualReport r = residual_report(candidate, layout, alpha);
        if (is_violation(r.ss_residual)) {
            position = std::move(candidate);
            out.visited.push_back(r);
            rejections = 0;
            continue;
        }
        if (is_violation(r.monogamy_residual)) ++out.monogamy_only_violations;
        if (++rejections >= kMaxConsecutiveRejections)
            throw NumericError("random walk stuck: no move stays inside the violation region");
    }
    return out;
}

void ContinuationSchedule::validate() const {
    if (alphas.empty()) throw std::invalid_argument("continuation schedule is empty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i].value() > 1.0))
            throw std::invalid_argument("continuation alphas must be > 1");
        if (i > 0 && !(alphas[i].value() < alphas[i - 1].value()))
            throw std::invalid_argument("continuation alphas must be strictly decreasing");
    }
    if (!(delta0 > 0.0) || !(delta_min > 0.0))
        throw std::invalid_argument("continuation radii must be positive");
    if (counter_max < 1) throw std::invalid_argument("counter_max must be >= 1");
}

std::vector<RunRecord> alpha_continuation(const ContinuationSchedule& schedule,
                                          const RunRecord& initial, RngSeed rng) {
    schedule.validate();
    if (!is_violation(objective_value(initial.final_residuals, schedule.objective)))
        throw std::invalid_argument("continuation must start from a violating run");

    std::vector<RunRecord> stages;
    const PureState* seed = &initial.final_state;
    for (std::size_t k = 0; k < schedule.alphas.size(); ++k) {
        SearchConfig c;
        c.alpha = schedule.alphas[k];
        c.objective = schedule.objective;
        c.layout = initial.config.layout;
        c.delta0 = schedule.delta0;
        c.delta_min = schedule.delta_min;
        c.counter_max = schedule.counter_max;
        c.rng = rng.with_stream(rng.stream_id + k);
        c.seed_state = *seed;
        stages.push_back(minimize_residual(c));
        seed = &stages.back().final_state;
    }
    return stages;
}

StateSource haar_source(RngSeed rng, int n_qubits) {
    return [rng, n_qubits](std::uint64_t i) {
        StateSampler sampler(rng.with_stream(rng.stream_id + i));
        return sampler.haar_state(n_qubits);
    };
}

ScanSummary haar_scan(std::uint64_t n_states, Alpha alpha, const PairingLayout& layout,
                      RngSeed rng, int workers) {
    return haar_scan(n_states, alpha, layout, haar_source(rng), workers);
}

ScanSummary haar_scan(std::uint64_t n_states, Alpha alpha, const PairingLayout& layout,
                      const StateSource& source, int workers) {
    if (n_states < 1) throw std::invalid_argument("scan needs at least one state");
    layout.validate(4);
    const auto n_blocks = static_cast<std::uint64_t>(std::max(1, workers));
    struct Partial {
        std::uint64_t violations = 0;
        double min_residual = 0.0;
        std::uint64_t argmin = 0;
        bool any = false;
    };
    std::vector<Partial> partials(n_blocks);
    parallel_for(n_blocks, workers, [&](std::size_t b) {
        const std::uint64_t begin = n_states * b / n_blocks;
        const std::uint64_t end = n_states * (b + 1) / n_blocks;
        Partial& p = partials[b];
        for (std::uint64_t i = begin; i < end; ++i) {
            const double r = evaluate_objective(source(i), layout, alpha, Objective::ss);
            if (is_violation(r)) ++p.violations;
            if (!p.any || r < p.min_residual) {
                p.min_residual = r;
                p.argmin = i;
                p.any = true;
            }
        }
    });

    ScanSummary out;
    out.n_states = n_states;
    bool any = false;
    for (const Partial& p : partials) { // blocks are in index order
        out.violations += p.violations;
        if (p.any && (!any || p.min_residual < out.min_residual)) {
            out.min_residual = p.min_residual;
            out.argmin_index = p.argmin;
            any = true;
        }
    }
    out.argmin_state = source(out.argmin_index);
    return out;
}

} // namespace renyi
