// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Sized for a single core.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "renyi/measures.hpp"
#include "renyi/search.hpp"
#include "renyi/store.hpp"
#include "renyi/verify.hpp"

using namespace renyi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

constexpr double kPaperViolationLo = -0.0202;
constexpr double kPaperViolationHi = -0.0192;

// Shared between criteria: the cold-start restarts and the best violating run.
struct ColdStarts {
    std::vector<RunRecord> runs;
    std::vector<double> seconds;
    const RunRecord* best = nullptr;
};

ColdStarts& cold_starts() {
    static ColdStarts cs = [] {
        ColdStarts out;
        SearchConfig c; // α=2, ss, δ₀=0.5, counter_max=1000, δ_min=1e-4
        c.rng = RngSeed{0, 0};
        for (int i = 0; i < 30; ++i) {
            SearchConfig ci = c;
            ci.rng = c.rng.with_stream(static_cast<std::uint64_t>(i));
            const auto start = Clock::now();
            out.runs.push_back(minimize_residual(ci));
            out.seconds.push_back(seconds_since(start));
        }
        for (const RunRecord& r : out.runs)
            if (!out.best || r.final_objective() < out.best->final_objective()) out.best = &r;
        return out;
    }();
    return cs;
}

Outcome ss_violation_at_alpha2() {
    const ColdStarts& cs = cold_starts();
    int hits = 0, stalled = 0;
    double worst_other = 0.0;
    for (const RunRecord& r : cs.runs) {
        const double v = r.final_residuals.ss_residual;
        if (v >= kPaperViolationLo && v <= kPaperViolationHi) {
            ++hits;
        } else {
            worst_other = std::max(worst_other, std::abs(v));
            if (std::abs(v) > 1e-4) ++stalled;
        }
    }
    const double slowest = *std::max_element(cs.seconds.begin(), cs.seconds.end());
    return {hits > 0 && stalled == 0 && slowest < 300.0,
            fmt("30 restarts: %d at -0.0197, %d others above 1e-4 (worst |r| = %.2e), best %.6f, slowest %.1f s",
                hits, stalled, worst_other, cs.best->final_residuals.ss_residual, slowest)};
}

Outcome optimum_fingerprint() {
    const RunRecord& best = *cold_starts().best;
    const Fingerprint f = compute_fingerprint(best.final_state, best.config.layout, Alpha(2.0));
    const std::vector<double> a12{0.66, 0.14, 0.14, 0.06}, pair{0.997, 0.003, 0.0, 0.0};
    bool ok = true;
    for (std::size_t i = 0; i < 4; ++i) {
        ok &= within(f.spectrum_a1a2[i], a12[i], 0.01);
        ok &= within(f.spectrum_a1b1[i], pair[i], 0.005);
        ok &= within(f.spectrum_a2b2[i], pair[i], 0.005);
    }
    const ResidualReport& r = best.final_residuals;
    ok &= within(r.e_a1b1, 0.54, 0.01) && within(r.e_a2b2, 0.54, 0.01);
    // Pairs other than a1b1 and a2b2: 01, 03, 12 and 23 in the canonical layout.
    const double others = std::max({f.pair_entanglements[0], f.pair_entanglements[2], f.pair_entanglements[3],
                                    f.pair_entanglements[5]});
    ok &= others < 1e-3;
    ok &= within(f.e_bipartite, 1.06, 0.01);
    return {ok, fmt("a1a2 {%.4f %.4f %.4f %.4f}, a1b1 {%.4f %.4f}, E11 %.4f, E22 %.4f, others max %.1e, Ebip %.4f",
                    f.spectrum_a1a2[0], f.spectrum_a1a2[1], f.spectrum_a1a2[2], f.spectrum_a1a2[3],
                    f.spectrum_a1b1[0], f.spectrum_a1b1[1], r.e_a1b1, r.e_a2b2, others, f.e_bipartite)};
}

Outcome simultaneity() {
    const ColdStarts& cs = cold_starts();
    double worst = 0.0;
    std::size_t checked = 0;
    for (const RunRecord& r : cs.runs) {
        if (!is_violation(r.final_residuals.ss_residual) && !is_violation(r.final_residuals.monogamy_residual))
            continue;
        worst = std::max(worst, std::abs(r.final_residuals.ss_residual - r.final_residuals.monogamy_residual));
        ++checked;
    }
    StateSampler sampler(RngSeed{1, 0});
    const WalkResult walk = random_walk_region(cs.best->final_state, 0.05, 10000, Alpha(2.0),
                                               cs.best->config.layout, sampler);
    for (const ResidualReport& r : walk.visited)
        worst = std::max(worst, std::abs(r.ss_residual - r.monogamy_residual));
    checked += walk.visited.size();
    return {worst < 1e-6 && walk.monogamy_only_violations == 0 && walk.visited.size() >= 10000,
            fmt("%zu violating states, max |ss - mono| = %.2e, monogamy-only violations %llu", checked, worst,
                static_cast<unsigned long long>(walk.monogamy_only_violations))};
}

Outcome continuation() {
    ContinuationSchedule s;
    for (double a : {1.5, 1.2, 1.1, 1.05, 1.02, 1.01, 1.005, 1.002}) s.alphas.emplace_back(a);
    const std::vector<RunRecord> stages = alpha_continuation(s, *cold_starts().best, RngSeed{2, 0});
    bool ok = true;
    double previous = std::abs(cold_starts().best->final_residuals.ss_residual);
    std::ostringstream detail;
    for (const RunRecord& st : stages) {
        const double v = st.final_residuals.ss_residual;
        ok &= is_violation(v) && std::abs(v) < previous;
        previous = std::abs(v);
        detail << fmt("%g:%.2e ", st.config.alpha.value(), v);
    }
    const double last = std::abs(stages.back().final_residuals.ss_residual);
    ok &= last >= 1e-7 && last <= 1e-5;
    return {ok, detail.str()};
}

Outcome null_scan() {
    const auto start = Clock::now();
    const ScanSummary s = haar_scan(100000, Alpha(2.0), PairingLayout::canonical(), RngSeed{3, 0}, 1);
    const double t = seconds_since(start);
    return {s.violations == 0 && t < 600.0,
            fmt("%llu states, %llu violations, min residual %.4e, %.1f s",
                static_cast<unsigned long long>(s.n_states), static_cast<unsigned long long>(s.violations),
                s.min_residual, t)};
}

Outcome ckw_r2() {
    bool ok = true;
    std::ostringstream detail;
    for (int n = 3; n <= 6; ++n) {
        const VerifyReport r = verify_ckw_r2(n, 10000, RngSeed{4, static_cast<std::uint64_t>(n)});
        ok &= r.violations == 0 && r.min_residual >= -1e-9;
        detail << fmt("n=%d min %.3e; ", n, r.min_residual);
    }
    return {ok, detail.str()};
}

Outcome sum_inequality() {
    const VerifyReport r = verify_sum_inequality(100000, RngSeed{5, 0});
    return {r.violations == 0 && r.min_residual >= -1e-12,
            fmt("%llu vectors, min residual %.3e", static_cast<unsigned long long>(r.samples), r.min_residual)};
}

Outcome formula_properties() {
    bool ok = true;
    double worst_mono = HUGE_VAL, worst_convex = HUGE_VAL, worst_limit = 0.0;
    for (double a : {1.0, 1.5, 2.0, 3.0}) {
        std::vector<double> f(1001);
        for (int i = 0; i <= 1000; ++i) f[i] = renyi_from_concurrence(i / 1000.0, Alpha(a));
        for (int i = 1; i <= 1000; ++i) worst_mono = std::min(worst_mono, f[i] - f[i - 1]);
        for (int i = 1; i < 1000; ++i) worst_convex = std::min(worst_convex, f[i + 1] - 2 * f[i] + f[i - 1]);
    }
    for (int i = 0; i <= 1000; ++i) {
        const double c = i / 1000.0;
        worst_limit = std::max(worst_limit, std::abs(renyi_from_concurrence(c, Alpha(1.0 + 1e-6)) -
                                                     renyi_from_concurrence(c, Alpha(1.0))));
    }
    ok = worst_mono >= -1e-10 && worst_convex >= -1e-9 && worst_limit <= 1e-4;
    return {ok, fmt("min first diff %.2e, min second diff %.2e, max |R(1+1e-6) - EoF| %.2e", worst_mono,
                    worst_convex, worst_limit)};
}

Outcome oracles() {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> normal;
    double worst_pure = 0.0;
    for (int k = 0; k < 10000; ++k) {
        CVector v(4);
        for (int i = 0; i < 4; ++i) v[i] = cplx(normal(gen), normal(gen));
        v.normalize();
        const double closed = 2.0 * std::abs(v[0] * v[3] - v[1] * v[2]);
        const DensityMatrix rho = DensityMatrix::projector(PureState(2, v));
        worst_pure = std::max(worst_pure, std::abs(concurrence(rho) - closed));
    }
    double worst_werner = 0.0;
    const CVector s = states::singlet().amplitudes();
    for (int i = 0; i <= 100; ++i) {
        const double p = i / 100.0;
        const CMatrix m = p * s * s.adjoint() + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0;
        worst_werner = std::max(worst_werner, std::abs(concurrence(DensityMatrix(m)) - std::max(0.0, (3 * p - 1) / 2)));
    }
    const std::vector<double> spectrum{0.66, 0.14, 0.14, 0.06};
    const double r2 = renyi_entropy(spectrum, Alpha(2.0));
    return {worst_pure <= 1e-10 && worst_werner <= 1e-10 && within(r2, 1.0637, 5e-4),
            fmt("pure max err %.1e, Werner max err %.1e, R2 {0.66,0.14,0.14,0.06} = %.5f", worst_pure,
                worst_werner, r2)};
}

std::string archive_text(const RunRecord& r) {
    nlohmann::json j = to_json(make_archive(r));
    j.erase("created_at");
    return j.dump();
}

Outcome reproducibility() {
    SearchConfig c;
    c.rng = RngSeed{6, 0};
    const bool same_run = archive_text(minimize_residual(c)) == archive_text(minimize_residual(c));

    const std::vector<RunRecord> serial = multistart(c, 4, 1), threaded = multistart(c, 4, 4);
    bool same_multistart = serial.size() == threaded.size();
    for (std::size_t i = 0; same_multistart && i < serial.size(); ++i)
        same_multistart = archive_text(serial[i]) == archive_text(threaded[i]);

    const PairingLayout layout = PairingLayout::canonical();
    const auto scan_text = [&](int workers) {
        return to_json(haar_scan(20000, Alpha(2.0), layout, RngSeed{7, 0}, workers), Alpha(2.0), layout).dump();
    };
    const std::string s1 = scan_text(1);
    const bool same_scan = s1 == scan_text(2) && s1 == scan_text(4);
    return {same_run && same_multistart && same_scan,
            fmt("repeat run %s, multistart 1 vs 4 workers %s, scan 1/2/4 workers %s", same_run ? "identical" : "DIFFERS",
                same_multistart ? "identical" : "DIFFERS", same_scan ? "identical" : "DIFFERS")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 ss violation at alpha=2", ss_violation_at_alpha2},
        {"2 optimum fingerprint", optimum_fingerprint},
        {"3 ss/monogamy simultaneity", simultaneity},
        {"4 alpha continuation", continuation},
        {"5 null Haar scan", null_scan},
        {"6 R2 monogamy verifier", ckw_r2},
        {"7 sum inequality verifier", sum_inequality},
        {"8 formula properties", formula_properties},
        {"9 oracle equivalences", oracles},
        {"10 reproducibility", reproducibility},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  [%s] %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
