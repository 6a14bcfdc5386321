#include "renyi/sampler.hpp"

#include <string>

namespace renyi {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

Philox4x32::Block Philox4x32::bijection(Block ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

void Philox4x32::refill() {
    const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                    static_cast<std::uint32_t>(seed_.stream_id),
                    static_cast<std::uint32_t>(seed_.stream_id >> 32)};
    buffer_ = bijection(ctr, {static_cast<std::uint32_t>(seed_.seed),
                              static_cast<std::uint32_t>(seed_.seed >> 32)});
    ++block_;
    used_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() {
    if (used_ >= 4) refill();
    const std::uint64_t lo = buffer_[static_cast<std::size_t>(used_)];
    const std::uint64_t hi = buffer_[static_cast<std::size_t>(used_ + 1)];
    used_ += 2;
    return (hi << 32) | lo;
}

CVector StateSampler::gaussian_vector(Eigen::Index dim) {
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        v[i] = cplx(re, im);
    }
    return v;
}

PureState StateSampler::haar_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("haar_state: qubit count must be in [1, 8], got " +
                                    std::to_string(n_qubits));
    return PureState::normalized(n_qubits, gaussian_vector(Eigen::Index{1} << n_qubits));
}

PureState StateSampler::perturb_within(const PureState& seed_state, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("perturbation radius must be positive");
    delta = std::min(delta, 1.0);
    const CVector& psi = seed_state.amplitudes();
    for (;;) {
        // Haar direction projected onto the orthogonal complement of the seed.
        CVector g = gaussian_vector(psi.size());
        g -= psi.dot(g) * psi;
        const double norm = g.norm();
        if (!(norm > 0.0)) continue;
        g /= norm;
        const double cos_step = std::sqrt((1.0 - delta) * (1.0 + delta));
        PureState candidate = PureState::normalized(seed_state.n_qubits(), cos_step * psi + delta * g);
        const double d = pure_trace_distance(seed_state, candidate);
        if (d <= delta && (d > 0.0 || delta < 1e-15)) return candidate;
    }
}

PureState haar_random_state(int n_qubits, StateSampler& rng) { return rng.haar_state(n_qubits); }

PureState perturb_within(const PureState& seed_state, double delta, StateSampler& rng) {
    return rng.perturb_within(seed_state, delta);
}

} // namespace renyi
