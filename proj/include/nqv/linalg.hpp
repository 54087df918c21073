#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nqv/errors.hpp"

namespace nqv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Numerical acceptance bands for the typed operator wrappers.
struct Tolerances {
    double herm = 1e-9;   // Hermiticity residual, max-norm
    double psd = 1e-7;    // how far below zero an eigenvalue may dip
    double trace = 1e-9;  // trace slack for density operators
};

// An ordered tuple of distinct qubit names. The first name is the most
// significant bit of the computational basis index.
class VarTuple {
  public:
    VarTuple() = default;
    explicit VarTuple(std::vector<std::string> names);
    VarTuple(std::initializer_list<std::string> names);

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }
    Eigen::Index dim() const { return Eigen::Index(1) << names_.size(); }
    const std::string& operator[](std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }

    bool contains(const std::string& name) const;
    std::optional<std::size_t> position(const std::string& name) const;
    bool subset_of(const VarTuple& other) const;
    bool disjoint_from(const VarTuple& other) const;

    // Concatenation; throws DisjointnessError on shared names.
    VarTuple concat(const VarTuple& other) const;
    // Names of this tuple not present in `other`, original order kept.
    VarTuple minus(const VarTuple& other) const;

    bool operator==(const VarTuple& other) const = default;

    // Space separated name list, e.g. "q1 q2".
    std::string str() const;

    auto begin() const { return names_.begin(); }
    auto end() const { return names_.end(); }

  private:
    std::vector<std::string> names_;
};

// A square matrix acting on the Hilbert space of a named register.
struct LabeledOperator {
    VarTuple vars;
    Matrix mat;

    LabeledOperator() = default;
    LabeledOperator(VarTuple vars_, Matrix mat_);

    Eigen::Index dim() const { return mat.rows(); }
};

// For two orderings of the same variable set, the basis re-index table:
// entry [x] is the index in `src` order of the basis state numbered x in
// `dst` order.
std::vector<Eigen::Index> index_map(const VarTuple& src, const VarTuple& dst);

// Kronecker product on disjoint registers; a's variables end up most
// significant.
LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b);

// Cylinder extension: pad with identity on target \ op.vars and permute into
// target order. Requires op.vars to be a subset of target.
LabeledOperator extend(const LabeledOperator& op, const VarTuple& target);
Matrix extend_matrix(const Matrix& m, const VarTuple& from, const VarTuple& target);

// Typed wrappers -------------------------------------------------------------

// Hermitian M with 0 <= M <= I (within tolerance).
struct QuantumPredicate {
    LabeledOperator op;
    static QuantumPredicate checked(LabeledOperator op, const Tolerances& tol = {});
};

// Positive semidefinite, trace at most 1 (within tolerance). Subnormalized
// states are deliberately allowed.
struct DensityOperator {
    LabeledOperator op;
    static DensityOperator checked(LabeledOperator op, const Tolerances& tol = {});
    double trace() const { return op.mat.trace().real(); }
};

// A super-operator in Kraus form. Trace-nonincreasing: sum E^dag E <= I.
struct SuperOperator {
    VarTuple vars;
    std::vector<Matrix> kraus;

    SuperOperator() = default;
    SuperOperator(VarTuple vars_, std::vector<Matrix> kraus_);
    static SuperOperator checked(VarTuple vars, std::vector<Matrix> kraus,
                                 const Tolerances& tol = {});

    Eigen::Index dim() const { return vars.dim(); }
};

// Two-outcome projective measurement {P0, P1}, P0 + P1 = I.
struct ProjectiveMeasurement {
    VarTuple vars;
    Matrix p0;
    Matrix p1;
    static ProjectiveMeasurement checked(VarTuple vars, Matrix p0, Matrix p1,
                                         const Tolerances& tol = {});
};

// Channel algebra -------------------------------------------------------------

SuperOperator extend(const SuperOperator& e, const VarTuple& target);

// E(rho) = sum_k E_k rho E_k^dag, with e extended onto rho's register first.
DensityOperator apply(const SuperOperator& e, const DensityOperator& rho);
// Same action on a bare matrix over the register `on`.
Matrix apply_matrix(const SuperOperator& e, const Matrix& a, const VarTuple& on);

// Kraus adjoint {E_k^dag}; implements the Heisenberg picture E^dag.
SuperOperator adjoint(const SuperOperator& e);
// E^dag(A) without materializing the adjoint channel.
Matrix apply_adjoint(const SuperOperator& e, const Matrix& a, const VarTuple& on);

// Composition f . e ("f after e") on the union register. Kraus factors with
// negligible norm are dropped; the zero channel keeps one zero Kraus factor.
SuperOperator compose(const SuperOperator& f, const SuperOperator& e);

// Pointwise sum of channel actions (Kraus list union) on the union register.
SuperOperator add(const SuperOperator& a, const SuperOperator& b);

// Trace out all variables not in `keep`.
DensityOperator partial_trace(const DensityOperator& rho, const VarTuple& keep);
Matrix partial_trace_matrix(const Matrix& m, const VarTuple& vars, const VarTuple& keep);

// Hermitian eigendecomposition ------------------------------------------------

struct EigResult {
    Eigen::VectorXd values;  // descending
    Vector top;              // unit eigenvector for values(0)
};

// Rejects non-Hermitian input (within tol.herm), then symmetrizes and solves.
EigResult eig_hermitian(const LabeledOperator& a, const Tolerances& tol = {});
EigResult eig_hermitian(const Matrix& m, const Tolerances& tol = {});

double max_eigenvalue(const Matrix& herm);
double min_eigenvalue(const Matrix& herm);

// Channel fingerprints ---------------------------------------------------------

// The matrix T with vec(E(rho)) = T vec(rho) (column-major vec). Channels are
// equal iff their transfer matrices agree; used for set deduplication.
Matrix transfer_matrix(const SuperOperator& e);

// Choi matrix sum_k vec(E_k) vec(E_k)^dag; E is completely positive iff it is
// PSD, and E <= F iff choi(F) - choi(E) is PSD.
Matrix choi_matrix(const SuperOperator& e);

bool channel_equal(const SuperOperator& a, const SuperOperator& b, double tol = 1e-10);

// Small helpers ----------------------------------------------------------------

Matrix identity(Eigen::Index d);
Vector basis_ket(Eigen::Index i, Eigen::Index d);
bool approx_equal(const Matrix& a, const Matrix& b, double tol);
bool is_hermitian(const Matrix& m, double tol);

}  // namespace nqv
