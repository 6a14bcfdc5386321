#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

#include "renyi/linalg.hpp"

namespace renyi {

/// (seed, stream_id) pair naming one independent random stream.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngSeed with_stream(std::uint64_t stream) const { return {seed, stream}; }
    bool operator==(const RngSeed&) const = default;
};

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The key is
/// the seed and the upper half of the 128-bit counter is the stream id, so
/// distinct streams never overlap. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
public:
    using result_type = std::uint64_t;
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox4x32(RngSeed seed) : seed_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// The raw bijection; exposed for known-answer tests.
    static Block bijection(Block counter, std::array<std::uint32_t, 2> key);

    RngSeed seed() const { return seed_; }

private:
    void refill();

    RngSeed seed_;
    std::uint64_t block_ = 0;
    Block buffer_{};
    int used_ = 4;
};

/// Haar-random and neighbourhood sampling of pure states on one stream.
/// Not thread-safe; each worker owns its own sampler.
class StateSampler {
public:
    explicit StateSampler(RngSeed seed) : engine_(seed) {}

    /// Normalized vector of i.i.d. standard complex Gaussians.
    PureState haar_state(int n_qubits);

    /// Isotropic move to trace distance delta: cos(t) seed + sin(t) g with
    /// sin(t) = delta and g a Haar-random unit vector orthogonal to the seed.
    /// Rounding can push the distance a hair above delta; such draws are
    /// repeated.
    PureState perturb_within(const PureState& seed_state, double delta);

    double uniform() { return uniform_(engine_); }

    Philox4x32& engine() { return engine_; }

private:
    CVector gaussian_vector(Eigen::Index dim);

    Philox4x32 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

PureState haar_random_state(int n_qubits, StateSampler& rng);
PureState perturb_within(const PureState& seed_state, double delta, StateSampler& rng);

} // namespace renyi
