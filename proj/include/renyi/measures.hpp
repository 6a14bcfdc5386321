#pragma once

#include <array>
#include <span>
#include <string>

#include "renyi/linalg.hpp"

namespace renyi {

/// Renyi order. Values within 1e-9 of 1 collapse onto the von Neumann /
/// entanglement-of-formation branch.
class Alpha {
public:
    static constexpr double kEofTolerance = 1e-9;

    explicit Alpha(double value);

    double value() const { return value_; }
    bool is_eof() const { return value_ == 1.0; }

    bool operator==(const Alpha&) const = default;

private:
    double value_;
};

/// Assignment of qubits to the roles a1, a2 (Alice) and b1, b2 (Bob).
struct PairingLayout {
    int a1 = 0;
    int a2 = 1;
    int b1 = 2;
    int b2 = 3;

    static PairingLayout canonical() { return {}; }

    /// Throws std::invalid_argument unless all four are distinct and < n_qubits.
    void validate(int n_qubits) const;
    /// The layout with (a1<->a2) and (b1<->b2) exchanged.
    PairingLayout exchanged() const { return {a2, a1, b2, b1}; }

    bool operator==(const PairingLayout&) const = default;
};

/// All entanglement terms (bits) entering the superadditivity and
/// second-order monogamy residuals of one 4-qubit state.
struct ResidualReport {
    Alpha alpha{2.0};
    double e_bipartite = 0.0; // E_{a1 a2 | b1 b2}
    double e_a1b1 = 0.0;
    double e_a2b2 = 0.0;
    double e_a1b2 = 0.0;
    double e_a2b1 = 0.0;
    double ss_residual = 0.0;
    double monogamy_residual = 0.0;
};

/// Residuals below this count as genuine violations.
inline constexpr double kViolationThreshold = -1e-7;

inline bool is_violation(double residual) { return residual < kViolationThreshold; }

/// Wootters concurrence of a two-qubit density matrix via the spin-flip
/// construction. Spectral weights below kConcurrenceRankCutoff are treated as
/// exact zeros.
double concurrence(const DensityMatrix& rho);

inline constexpr double kConcurrenceRankCutoff = 1e-14;

/// Concurrence of rho = W W^dagger for any 4 x k factor W. The lambdas are the
/// singular values of W^T (sigma_y (x) sigma_y) W.
double concurrence_from_factor(const CMatrix& w);

double renyi_entropy(const DensityMatrix& rho, Alpha alpha);
double renyi_entropy(std::span<const double> spectrum, Alpha alpha);

/// Two-qubit Renyi entanglement as a function of the concurrence.
double renyi_from_concurrence(double c, Alpha alpha);

/// Entanglement of the (i, j) two-qubit reduction of a pure state.
double pair_entanglement(const PureState& psi, int i, int j, Alpha alpha);

/// Renyi entropy of the reduction of psi onto partition_a (any order).
double bipartite_pure_entanglement(const PureState& psi, const SubsystemMask& partition_a,
                                   Alpha alpha);

ResidualReport residual_report(const PureState& psi, const PairingLayout& layout, Alpha alpha);

/// E_{a1a2|b1b2} - E_{a1|b1} - E_{a2|b2}, with the cross terms filled in too.
inline ResidualReport ss_residual(const PureState& psi, const PairingLayout& layout, Alpha alpha) {
    return residual_report(psi, layout, alpha);
}

inline ResidualReport monogamy2_residual(const PureState& psi, const PairingLayout& layout,
                                         Alpha alpha) {
    return residual_report(psi, layout, alpha);
}

enum class Objective { ss, monogamy2 };

std::string to_string(Objective objective);
Objective objective_from_string(const std::string& name);

double objective_value(const ResidualReport& report, Objective objective);

/// Only evaluates the terms the objective needs.
double evaluate_objective(const PureState& psi, const PairingLayout& layout, Alpha alpha,
                          Objective objective);

/// R2 between `focus` and the rest minus the sum of pairwise R2 terms.
/// Non-negative for every pure state.
double ckw_r2_residual(const PureState& psi, int focus);

/// -log2(1 - sum/2) + sum_i log2(1 - c_i/2) for squared concurrences c_i in
/// [0, 1] with sum <= 1.
double sum_inequality_residual(std::span<const double> c_squared);

/// The six pairwise entanglements of a 4-qubit state, ordered
/// (01, 02, 03, 12, 13, 23).
std::array<double, 6> all_pair_entanglements(const PureState& psi, Alpha alpha);

} // namespace renyi
