#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace renyi {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr int kMaxQubits = 8;

/// Raised when a numerical object fails its validity checks (non-PSD matrix,
/// non-unitary gate, de-normalized state).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalized pure state on n qubits. Qubit 0 is the most significant bit of
/// the computational-basis index.
class PureState {
public:
    /// Validates the norm (1e-12) and the 2^n length.
    PureState(int n_qubits, CVector amplitudes);

    /// Rescales `amplitudes` to unit norm first. Throws on a zero vector.
    static PureState normalized(int n_qubits, CVector amplitudes);

    /// Computational basis state |index>.
    static PureState basis(int n_qubits, std::size_t index);

    static PureState from_amplitudes(std::span<const cplx> amplitudes);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector& amplitudes() const { return amplitudes_; }
    cplx operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

    /// Tensor product, `*this` occupying the leading (most significant) qubits.
    PureState tensor(const PureState& other) const;

    /// Exact amplitude equality.
    bool operator==(const PureState& other) const {
        return n_qubits_ == other.n_qubits_ && amplitudes_ == other.amplitudes_;
    }

private:
    int n_qubits_;
    CVector amplitudes_;
};

/// Hermitian, PSD, unit-trace matrix.
class DensityMatrix {
public:
    /// Checks hermiticity (1e-10 entrywise) and trace (1e-10). Positivity is
    /// checked lazily by hermitian_eigenvalues.
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix projector(const PureState& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);
    static DensityMatrix diagonal(std::span<const double> probabilities);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    int n_qubits() const;
    const CMatrix& entries() const { return entries_; }

private:
    CMatrix entries_;
};

/// Ordered, strictly increasing list of qubit indices.
class SubsystemMask {
public:
    SubsystemMask(std::initializer_list<int> kept);
    explicit SubsystemMask(std::vector<int> kept);

    const std::vector<int>& kept() const { return kept_; }
    std::size_t size() const { return kept_.size(); }

    /// Throws std::out_of_range when any index is >= n_qubits.
    void check_range(int n_qubits) const;
    /// Indices in [0, n_qubits) not in the mask, increasing.
    SubsystemMask complement(int n_qubits) const;

private:
    std::vector<int> kept_;
};

DensityMatrix partial_trace(const PureState& state, const SubsystemMask& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemMask& keep);

/// Reshapes a pure state into the dim(keep) x dim(rest) coefficient matrix,
/// so that partial_trace(state, keep) == M * M^dagger.
CMatrix bipartite_coefficients(const PureState& state, const SubsystemMask& keep);

inline constexpr double kEigenClampTolerance = 1e-8;

/// Descending eigenvalues. Values in [-1e-8, 0) are clamped to zero; anything
/// more negative throws NumericError.
std::vector<double> hermitian_eigenvalues(const DensityMatrix& m);

/// Sum of lambda_i^alpha over the clamped spectrum. alpha >= 1.
double trace_power(const DensityMatrix& m, double alpha);
double trace_power(std::span<const double> spectrum, double alpha);

/// sqrt(1 - |<a|b>|^2), evaluated as the norm of the component of b
/// orthogonal to a so that distances down to ~1e-16 stay accurate.
double pure_trace_distance(const PureState& a, const PureState& b);

PureState apply_local_unitary(const PureState& state, int qubit, const Matrix2c& u);

bool is_unitary(const Matrix2c& u, double tol = 1e-10);

namespace gates {
Matrix2c identity();
Matrix2c pauli_x();
Matrix2c pauli_y();
Matrix2c pauli_z();
Matrix2c hadamard();
} // namespace gates

namespace states {
/// (|00> + |11>)/sqrt(2)
PureState bell();
/// (|01> - |10>)/sqrt(2)
PureState singlet();
PureState ghz(int n_qubits);
PureState w(int n_qubits);
PureState plus();
/// Bell pairs on qubits (0,2) and (1,3) of a 4-qubit register.
PureState bell02_bell13();
} // namespace states

} // namespace renyi
