#include "renyi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace renyi {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-10;
constexpr double kTraceTolerance = 1e-10;

int qubits_for_dim(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    if ((std::size_t{1} << n) != dim || n < 1 || n > kMaxQubits)
        throw std::invalid_argument("dimension " + std::to_string(dim) +
                                    " is not 2^n with 1 <= n <= 8");
    return n;
}

// Maps a full basis index to its (kept, rest) indices. Qubit 0 is the MSB.
struct Split {
    std::vector<int> kept;
    std::vector<int> rest;
    int n;

    std::size_t sub_index(std::size_t full, const std::vector<int>& qubits) const {
        std::size_t out = 0;
        for (int q : qubits) out = (out << 1) | ((full >> (n - 1 - q)) & 1u);
        return out;
    }
};

} // namespace

PureState::PureState(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits)
        throw std::invalid_argument("qubit count must be in [1, 8], got " +
                                    std::to_string(n_qubits_));
    if (amplitudes_.size() != (Eigen::Index{1} << n_qubits_))
        throw std::invalid_argument("amplitude vector length must be 2^n_qubits");
    const double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance))
        throw NumericError("state norm deviates from 1 by " + std::to_string(norm - 1.0));
}

PureState PureState::normalized(int n_qubits, CVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericError("cannot normalize a zero vector");
    amplitudes /= norm;
    return PureState(n_qubits, std::move(amplitudes));
}

PureState PureState::basis(int n_qubits, std::size_t index) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
    const auto dim = Eigen::Index{1} << n_qubits;
    if (static_cast<Eigen::Index>(index) >= dim) throw std::out_of_range("basis index out of range");
    CVector v = CVector::Zero(dim);
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return PureState(n_qubits, std::move(v));
}

PureState PureState::from_amplitudes(std::span<const cplx> amplitudes) {
    const int n = qubits_for_dim(amplitudes.size());
    CVector v(static_cast<Eigen::Index>(amplitudes.size()));
    std::copy(amplitudes.begin(), amplitudes.end(), v.begin());
    return PureState(n, std::move(v));
}

PureState PureState::tensor(const PureState& other) const {
    const int n = n_qubits_ + other.n_qubits_;
    if (n > kMaxQubits) throw std::invalid_argument("tensor product exceeds 8 qubits");
    CVector v(amplitudes_.size() * other.amplitudes_.size());
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i)
        v.segment(i * other.amplitudes_.size(), other.amplitudes_.size()) =
            amplitudes_[i] * other.amplitudes_;
    return PureState::normalized(n, std::move(v));
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw std::invalid_argument("density matrix must be square");
    qubits_for_dim(static_cast<std::size_t>(entries_.rows()));
    const double herm_dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm_dev <= kHermitianTolerance))
        throw NumericError("matrix is not Hermitian (deviation " + std::to_string(herm_dev) + ")");
    const cplx tr = entries_.trace();
    if (!(std::abs(tr - 1.0) <= kTraceTolerance))
        throw NumericError("trace deviates from 1 (" + std::to_string(tr.real()) + ")");
}

int DensityMatrix::n_qubits() const { return qubits_for_dim(dim()); }

DensityMatrix DensityMatrix::projector(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
    const auto d = static_cast<Eigen::Index>(probabilities.size());
    CMatrix m = CMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = probabilities[static_cast<std::size_t>(i)];
    return DensityMatrix(std::move(m));
}

SubsystemMask::SubsystemMask(std::initializer_list<int> kept)
    : SubsystemMask(std::vector<int>(kept)) {}

SubsystemMask::SubsystemMask(std::vector<int> kept) : kept_(std::move(kept)) {
    if (kept_.empty()) throw std::invalid_argument("subsystem mask is empty");
    if (kept_.front() < 0) throw std::out_of_range("negative qubit index in mask");
    for (std::size_t i = 1; i < kept_.size(); ++i)
        if (kept_[i] <= kept_[i - 1])
            throw std::invalid_argument("mask indices must be strictly increasing");
}

void SubsystemMask::check_range(int n_qubits) const {
    if (kept_.back() >= n_qubits)
        throw std::out_of_range("qubit index " + std::to_string(kept_.back()) +
                                " out of range for " + std::to_string(n_qubits) + " qubits");
}

SubsystemMask SubsystemMask::complement(int n_qubits) const {
    check_range(n_qubits);
    std::vector<int> rest;
    for (int q = 0; q < n_qubits; ++q)
        if (!std::binary_search(kept_.begin(), kept_.end(), q)) rest.push_back(q);
    return SubsystemMask(std::move(rest));
}

CMatrix bipartite_coefficients(const PureState& state, const SubsystemMask& keep) {
    const int n = state.n_qubits();
    keep.check_range(n);
    Split split{keep.kept(), {}, n};
    for (int q = 0; q < n; ++q)
        if (!std::binary_search(split.kept.begin(), split.kept.end(), q)) split.rest.push_back(q);
    const auto rows = Eigen::Index{1} << split.kept.size();
    const auto cols = Eigen::Index{1} << split.rest.size();
    CMatrix m(rows, cols);
    for (std::size_t i = 0; i < state.dim(); ++i)
        m(static_cast<Eigen::Index>(split.sub_index(i, split.kept)),
          static_cast<Eigen::Index>(split.sub_index(i, split.rest))) = state[i];
    return m;
}

DensityMatrix partial_trace(const PureState& state, const SubsystemMask& keep) {
    const CMatrix m = bipartite_coefficients(state, keep);
    CMatrix rho = m * m.adjoint();
    // Remove the O(eps) anti-Hermitian part left by the product.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemMask& keep) {
    const int n = rho.n_qubits();
    keep.check_range(n);
    Split split{keep.kept(), {}, n};
    for (int q = 0; q < n; ++q)
        if (!std::binary_search(split.kept.begin(), split.kept.end(), q)) split.rest.push_back(q);
    const auto dk = Eigen::Index{1} << split.kept.size();
    CMatrix out = CMatrix::Zero(dk, dk);
    const auto& e = rho.entries();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        const auto ti = split.sub_index(i, split.rest);
        const auto ki = static_cast<Eigen::Index>(split.sub_index(i, split.kept));
        for (std::size_t j = 0; j < rho.dim(); ++j) {
            if (split.sub_index(j, split.rest) != ti) continue;
            out(ki, static_cast<Eigen::Index>(split.sub_index(j, split.kept))) +=
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityMatrix(std::move(out));
}

std::vector<double> hermitian_eigenvalues(const DensityMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.entries(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    std::vector<double> out(ev.begin(), ev.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    for (double& v : out) {
        if (v < -kEigenClampTolerance)
            throw NumericError("eigenvalue " + std::to_string(v) + " below -1e-8: matrix is not PSD");
        if (v < 0.0) v = 0.0;
    }
    return out;
}

double trace_power(std::span<const double> spectrum, double alpha) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("trace_power requires alpha >= 1");
    double s = 0.0;
    for (double v : spectrum)
        if (v > 0.0) s += alpha == 2.0 ? v * v : std::pow(v, alpha);
    return s;
}

double trace_power(const DensityMatrix& m, double alpha) {
    const auto spectrum = hermitian_eigenvalues(m);
    return trace_power(spectrum, alpha);
}

double pure_trace_distance(const PureState& a, const PureState& b) {
    if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("states have different qubit counts");
    const cplx overlap = a.amplitudes().dot(b.amplitudes());
    const double d = (b.amplitudes() - overlap * a.amplitudes()).norm();
    return std::clamp(d, 0.0, 1.0);
}

bool is_unitary(const Matrix2c& u, double tol) {
    return ((u.adjoint() * u) - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= tol;
}

PureState apply_local_unitary(const PureState& state, int qubit, const Matrix2c& u) {
    const int n = state.n_qubits();
    if (qubit < 0 || qubit >= n) throw std::out_of_range("qubit index out of range");
    if (!is_unitary(u)) throw NumericError("single-qubit gate is not unitary within 1e-10");
    const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
    CVector out = state.amplitudes();
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & bit) continue;
        const auto i0 = static_cast<Eigen::Index>(i);
        const auto i1 = static_cast<Eigen::Index>(i | bit);
        const cplx a0 = state[i], a1 = state[i | bit];
        out[i0] = u(0, 0) * a0 + u(0, 1) * a1;
        out[i1] = u(1, 0) * a0 + u(1, 1) * a1;
    }
    // Unitaries preserve the norm only up to 1e-10; renormalize so the
    // state invariant (1e-12) holds.
    return PureState::normalized(n, std::move(out));
}

namespace gates {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c pauli_x() {
    Matrix2c m;
    m << 0, 1, 1, 0;
    return m;
}
Matrix2c pauli_y() {
    Matrix2c m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
Matrix2c pauli_z() {
    Matrix2c m;
    m << 1, 0, 0, -1;
    return m;
}
Matrix2c hadamard() {
    Matrix2c m;
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}
} // namespace gates

namespace states {
PureState bell() {
    CVector v = CVector::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return PureState::normalized(2, std::move(v));
}
PureState singlet() {
    CVector v = CVector::Zero(4);
    v[1] = 1.0 / std::sqrt(2.0);
    v[2] = -1.0 / std::sqrt(2.0);
    return PureState::normalized(2, std::move(v));
}
PureState ghz(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
    CVector v = CVector::Zero(Eigen::Index{1} << n_qubits);
    v[0] = v[v.size() - 1] = 1.0;
    return PureState::normalized(n_qubits, std::move(v));
}
PureState w(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
    CVector v = CVector::Zero(Eigen::Index{1} << n_qubits);
    for (int q = 0; q < n_qubits; ++q) v[Eigen::Index{1} << q] = 1.0;
    return PureState::normalized(n_qubits, std::move(v));
}
PureState plus() {
    CVector v(2);
    v << 1.0, 1.0;
    return PureState::normalized(1, std::move(v));
}
PureState bell02_bell13() {
    // |Phi+>_{02} (x) |Phi+>_{13}: nonzero on indices where bit0==bit2 and bit1==bit3.
    CVector v = CVector::Zero(16);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) v[(a << 3) | (b << 2) | (a << 1) | b] = 0.5;
    return PureState::normalized(4, std::move(v));
}
} // namespace states

} // namespace renyi
