#include "renyi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace renyi {

namespace {

const Eigen::Matrix4cd& spin_flip() {
    static const Eigen::Matrix4cd s = [] {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(0, 3) = m(3, 0) = -1.0;
        m(1, 2) = m(2, 1) = 1.0;
        return m;
    }();
    return s;
}

double log2_of_one_plus(double t) { return std::log1p(t) / std::numbers::ln2; }

// Reduces a 4 x k coefficient matrix to a 4 x min(k, 4) factor of the same
// Gram matrix.
CMatrix compress_factor(const CMatrix& m) {
    if (m.cols() <= 4) return m;
    Eigen::HouseholderQR<CMatrix> qr(m.adjoint());
    const CMatrix r = qr.matrixQR().topRows(4).triangularView<Eigen::Upper>();
    return r.adjoint();
}

} // namespace

Alpha::Alpha(double value) : value_(value) {
    if (!std::isfinite(value) || value < 1.0 - kEofTolerance)
        throw std::invalid_argument("alpha must be a finite value >= 1");
    if (std::abs(value - 1.0) < kEofTolerance) value_ = 1.0;
}

void PairingLayout::validate(int n_qubits) const {
    const std::array<int, 4> q{a1, a2, b1, b2};
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0 || q[i] >= n_qubits)
            throw std::invalid_argument("layout index " + std::to_string(q[i]) + " out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (q[i] == q[j]) throw std::invalid_argument("layout indices must be distinct");
    }
}

double concurrence_from_factor(const CMatrix& w) {
    if (w.rows() != 4) throw std::invalid_argument("concurrence requires a two-qubit factor");
    const CMatrix f = compress_factor(w);
    const CMatrix tau = f.transpose() * spin_flip() * f;
    Eigen::JacobiSVD<CMatrix> svd(tau);
    Eigen::VectorXd s = svd.singularValues(); // already descending
    double c = s.size() > 0 ? s[0] : 0.0;
    for (Eigen::Index i = 1; i < s.size(); ++i) c -= s[i];
    return std::clamp(c, 0.0, 1.0);
}

double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw std::invalid_argument("concurrence requires a 4x4 density matrix");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.entries());
    if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    if (ev.minCoeff() < -kEigenClampTolerance)
        throw NumericError("density matrix is not positive semidefinite");
    CMatrix w(4, 0);
    for (Eigen::Index i = 0; i < 4; ++i) {
        if (ev[i] <= kConcurrenceRankCutoff) continue;
        w.conservativeResize(4, w.cols() + 1);
        w.col(w.cols() - 1) = solver.eigenvectors().col(i) * std::sqrt(ev[i]);
    }
    return concurrence_from_factor(w);
}

double renyi_entropy(std::span<const double> spectrum, Alpha alpha) {
    if (alpha.is_eof()) {
        double h = 0.0;
        for (double p : spectrum)
            if (p > 0.0) h -= p * std::log2(p);
        return h;
    }
    return std::log2(trace_power(spectrum, alpha.value())) / (1.0 - alpha.value());
}

double renyi_entropy(const DensityMatrix& rho, Alpha alpha) {
    const auto spectrum = hermitian_eigenvalues(rho);
    return renyi_entropy(spectrum, alpha);
}

double renyi_from_concurrence(double c, Alpha alpha) {
    constexpr double tol = 1e-12;
    if (!(c >= -tol && c <= 1.0 + tol))
        throw std::invalid_argument("concurrence " + std::to_string(c) + " outside [0, 1]");
    c = std::clamp(c, 0.0, 1.0);
    if (c == 0.0) return 0.0;
    const double root = std::sqrt((1.0 - c) * (1.0 + c));
    // y = 1 - x = (1 - sqrt(1 - c^2)) / 2, written without cancellation.
    const double y = c * c / (2.0 * (1.0 + root));
    const double x = 1.0 - y;
    if (alpha.is_eof()) {
        double h = -y * std::log2(y);
        if (x > 0.0) h -= x * std::log2(x);
        return h;
    }
    const double a = alpha.value();
    // x^a + y^a - 1, keeping precision when y is tiny.
    const double excess = std::expm1(a * std::log1p(-y)) + std::pow(y, a);
    return log2_of_one_plus(excess) / (1.0 - a);
}

double pair_entanglement(const PureState& psi, int i, int j, Alpha alpha) {
    if (i == j) throw std::invalid_argument("pair entanglement needs two distinct qubits");
    const SubsystemMask mask{std::min(i, j), std::max(i, j)};
    const CMatrix m = bipartite_coefficients(psi, mask);
    return renyi_from_concurrence(concurrence_from_factor(m), alpha);
}

double bipartite_pure_entanglement(const PureState& psi, const SubsystemMask& partition_a,
                                   Alpha alpha) {
    if (partition_a.size() >= static_cast<std::size_t>(psi.n_qubits()))
        throw std::invalid_argument("partition must be a proper subset of the qubits");
    return renyi_entropy(partial_trace(psi, partition_a), alpha);
}

namespace {

double alice_bob_entanglement(const PureState& psi, const PairingLayout& layout, Alpha alpha) {
    return bipartite_pure_entanglement(
        psi, SubsystemMask{std::min(layout.a1, layout.a2), std::max(layout.a1, layout.a2)}, alpha);
}

void check_four_qubits(const PureState& psi, const PairingLayout& layout) {
    if (psi.n_qubits() != 4) throw std::invalid_argument("residuals are defined for 4-qubit states");
    layout.validate(4);
}

} // namespace

ResidualReport residual_report(const PureState& psi, const PairingLayout& layout, Alpha alpha) {
    check_four_qubits(psi, layout);
    ResidualReport r;
    r.alpha = alpha;
    r.e_bipartite = alice_bob_entanglement(psi, layout, alpha);
    r.e_a1b1 = pair_entanglement(psi, layout.a1, layout.b1, alpha);
    r.e_a2b2 = pair_entanglement(psi, layout.a2, layout.b2, alpha);
    r.e_a1b2 = pair_entanglement(psi, layout.a1, layout.b2, alpha);
    r.e_a2b1 = pair_entanglement(psi, layout.a2, layout.b1, alpha);
    r.ss_residual = r.e_bipartite - r.e_a1b1 - r.e_a2b2;
    r.monogamy_residual = r.ss_residual - r.e_a1b2 - r.e_a2b1;
    return r;
}

std::string to_string(Objective objective) {
    return objective == Objective::ss ? "ss" : "monogamy2";
}

Objective objective_from_string(const std::string& name) {
    if (name == "ss") return Objective::ss;
    if (name == "monogamy2") return Objective::monogamy2;
    throw std::invalid_argument("unknown objective '" + name + "' (expected ss or monogamy2)");
}

double objective_value(const ResidualReport& report, Objective objective) {
    return objective == Objective::ss ? report.ss_residual : report.monogamy_residual;
}

double evaluate_objective(const PureState& psi, const PairingLayout& layout, Alpha alpha,
                          Objective objective) {
    check_four_qubits(psi, layout);
    double v = alice_bob_entanglement(psi, layout, alpha) -
               pair_entanglement(psi, layout.a1, layout.b1, alpha) -
               pair_entanglement(psi, layout.a2, layout.b2, alpha);
    if (objective == Objective::monogamy2)
        v = v - pair_entanglement(psi, layout.a1, layout.b2, alpha) -
            pair_entanglement(psi, layout.a2, layout.b1, alpha);
    return v;
}

double ckw_r2_residual(const PureState& psi, int focus) {
    const int n = psi.n_qubits();
    if (n < 3) throw std::invalid_argument("CKW residual needs at least 3 qubits");
    if (focus < 0 || focus >= n) throw std::out_of_range("focus qubit out of range");
    const double purity = trace_power(partial_trace(psi, SubsystemMask{focus}), 2.0);
    const double tangle = 2.0 * (1.0 - purity);
    const double bipartite = -std::log2((2.0 - tangle) / 2.0);
    double pairs = 0.0;
    for (int q = 0; q < n; ++q)
        if (q != focus) pairs += pair_entanglement(psi, focus, q, Alpha(2.0));
    return bipartite - pairs;
}

double sum_inequality_residual(std::span<const double> c_squared) {
    constexpr double tol = 1e-12;
    double total = 0.0;
    double rhs = 0.0;
    for (double c2 : c_squared) {
        if (!(c2 >= 0.0 && c2 <= 1.0))
            throw std::invalid_argument("squared concurrence " + std::to_string(c2) +
                                        " outside [0, 1]");
        total += c2;
        rhs -= log2_of_one_plus(-c2 / 2.0);
    }
    if (total > 1.0 + tol) throw std::invalid_argument("squared concurrences sum above 1");
    const double lhs = -log2_of_one_plus(-total / 2.0);
    return lhs - rhs;
}

std::array<double, 6> all_pair_entanglements(const PureState& psi, Alpha alpha) {
    if (psi.n_qubits() != 4) throw std::invalid_argument("expected a 4-qubit state");
    std::array<double, 6> out{};
    std::size_t k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) out[k++] = pair_entanglement(psi, i, j, alpha);
    return out;
}

} // namespace renyi
