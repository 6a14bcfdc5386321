#include <doctest.h>

#include <cmath>

#include "renyi/sampler.hpp"
#include "test_support.hpp"

using namespace renyi;

namespace {

struct Moments {
    double mean = 0.0;
    double stderr_ = 0.0;
};

template <typename Draw>
Moments purity_moments(int draws, Draw&& draw, const SubsystemMask& keep) {
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double p = trace_power(partial_trace(draw(), keep), 2.0);
        s += p;
        s2 += p * p;
    }
    const double mean = s / draws;
    const double var = s2 / draws - mean * mean;
    return {mean, std::sqrt(var / draws)};
}

CMatrix random_unitary16(std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    CMatrix g(16, 16);
    for (Eigen::Index i = 0; i < 16; ++i)
        for (Eigen::Index j = 0; j < 16; ++j) g(i, j) = cplx(normal(gen), normal(gen));
    Eigen::HouseholderQR<CMatrix> qr(g);
    return qr.householderQ() * CMatrix::Identity(16, 16);
}

} // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::bijection(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::bijection(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::bijection(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct") {
    Philox4x32 a({7, 1}), b({7, 1}), c({7, 2}), d({8, 1});
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs_c |= x != c();
        differs_d |= x != d();
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("Haar states") {
    StateSampler s1({3, 0}), s2({3, 0});
    for (int i = 0; i < 100; ++i) {
        const PureState a = s1.haar_state(1 + i % 8);
        CHECK(std::abs(a.amplitudes().norm() - 1.0) < 1e-12);
        CHECK(a == s2.haar_state(1 + i % 8));
    }
    CHECK_THROWS_AS(s1.haar_state(0), std::invalid_argument);
    CHECK_THROWS_AS(s1.haar_state(9), std::invalid_argument);
}

TEST_CASE("mean reduced purity matches an independent Monte Carlo reference") {
    constexpr int kDraws = 100000;
    const SubsystemMask pair{0, 1};
    StateSampler sampler({2024, 0});
    const Moments ours = purity_moments(kDraws, [&] { return sampler.haar_state(4); }, pair);

    std::mt19937_64 gen(99);
    const Moments reference = purity_moments(kDraws, [&] { return testing::random_state(4, gen); }, pair);

    const double se = std::hypot(ours.stderr_, reference.stderr_);
    CHECK(std::abs(ours.mean - reference.mean) < 3.0 * se);
    // Exact Haar average (dA + dB) / (dA dB + 1) = 8/17.
    CHECK(std::abs(ours.mean - 8.0 / 17.0) < 3.0 * ours.stderr_);
}

TEST_CASE("purity statistics are invariant under a fixed global unitary") {
    constexpr int kDraws = 20000;
    std::mt19937_64 gen(5);
    const CMatrix u = random_unitary16(gen);
    StateSampler sampler({77, 3});
    const Moments rotated = purity_moments(
        kDraws, [&] { return PureState::normalized(4, u * sampler.haar_state(4).amplitudes()); }, SubsystemMask{0});
    CHECK(std::abs(rotated.mean - 10.0 / 17.0) < 3.0 * rotated.stderr_);
}

TEST_CASE("perturbations stay inside the trace-distance ball") {
    StateSampler sampler({1, 1});
    const PureState seed = sampler.haar_state(4);
    for (double delta : {0.5, 0.1, 1e-3, 1e-8}) {
        for (int i = 0; i < 500; ++i) {
            const double d = pure_trace_distance(seed, sampler.perturb_within(seed, delta));
            CHECK(d <= delta);
            CHECK(d > 0.0);
        }
    }
    for (int i = 0; i < 100; ++i) CHECK(pure_trace_distance(seed, sampler.perturb_within(seed, 1.0)) <= 1.0);
    CHECK_THROWS_AS(sampler.perturb_within(seed, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sampler.perturb_within(seed, -0.1), std::invalid_argument);
}

TEST_CASE("perturbation distances are not concentrated near zero") {
    StateSampler sampler({4, 0});
    const PureState seed = sampler.haar_state(4);
    int above_half = 0;
    for (int i = 0; i < 10000; ++i) {
        const double d = pure_trace_distance(seed, sampler.perturb_within(seed, 0.1));
        CHECK(d > 0.0);
        CHECK(d <= 0.1);
        above_half += d > 0.05;
    }
    CHECK(above_half > 0);
}

TEST_CASE("perturbation sequence is reproducible") {
    StateSampler a({9, 4}), b({9, 4});
    PureState x = a.haar_state(4), y = b.haar_state(4);
    for (int i = 0; i < 50; ++i) {
        x = a.perturb_within(x, 0.3);
        y = b.perturb_within(y, 0.3);
        CHECK(x == y);
    }
}
