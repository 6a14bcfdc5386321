#pragma once

#include <cstdint>
#include <vector>

#include "renyi/measures.hpp"
#include "renyi/sampler.hpp"

namespace renyi {

struct VerifyReport {
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    double min_residual = 0.0;
};

/// Admissible squared-concurrence vector: `length` entries in [0, 1] with a
/// total drawn uniformly from (0, 1] and split by uniform weights.
std::vector<double> random_admissible_vector(int length, StateSampler& rng);

/// ckw_r2_residual on Haar-random n-qubit states, focus drawn uniformly.
/// Residuals below -tolerance count as violations.
VerifyReport verify_ckw_r2(int n_qubits, std::uint64_t samples, RngSeed rng,
                           double tolerance = 1e-9);

/// sum_inequality_residual on random admissible vectors of length 2..7.
VerifyReport verify_sum_inequality(std::uint64_t samples, RngSeed rng, double tolerance = 1e-12);

} // namespace renyi
