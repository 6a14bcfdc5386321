#include "renyi/verify.hpp"

#include <algorithm>
#include <limits>

namespace renyi {

namespace {

void record(VerifyReport& report, double residual, double tolerance) {
    ++report.samples;
    if (residual < -tolerance) ++report.violations;
    report.min_residual = std::min(report.min_residual, residual);
}

} // namespace

std::vector<double> random_admissible_vector(int length, StateSampler& rng) {
    if (length < 1) throw std::invalid_argument("vector length must be positive");
    std::vector<double> w(static_cast<std::size_t>(length));
    double sum = 0.0;
    for (double& x : w) {
        x = rng.uniform();
        sum += x;
    }
    if (sum == 0.0) return std::vector<double>(w.size(), 0.0);
    const double total = 1.0 - rng.uniform();
    for (double& x : w) x = std::clamp(total * x / sum, 0.0, 1.0);
    return w;
}

VerifyReport verify_ckw_r2(int n_qubits, std::uint64_t samples, RngSeed rng, double tolerance) {
    if (n_qubits < 3 || n_qubits > kMaxQubits)
        throw std::invalid_argument("CKW verification needs 3 to 8 qubits");
    StateSampler sampler(rng);
    VerifyReport report;
    report.min_residual = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < samples; ++i) {
        const PureState psi = sampler.haar_state(n_qubits);
        const int focus = std::min(n_qubits - 1, static_cast<int>(sampler.uniform() * n_qubits));
        record(report, ckw_r2_residual(psi, focus), tolerance);
    }
    return report;
}

VerifyReport verify_sum_inequality(std::uint64_t samples, RngSeed rng, double tolerance) {
    StateSampler sampler(rng);
    VerifyReport report;
    report.min_residual = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < samples; ++i) {
        const int length = 2 + std::min(5, static_cast<int>(sampler.uniform() * 6));
        const auto v = random_admissible_vector(length, sampler);
        record(report, sum_inequality_residual(v), tolerance);
    }
    return report;
}

} // namespace renyi
