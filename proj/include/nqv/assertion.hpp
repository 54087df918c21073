#pragma once

#include <vector>

#include "nqv/linalg.hpp"

namespace nqv {

// A finite, nonempty set of quantum predicates over a common register.
// Satisfaction degree of a state is the minimum expectation over members.
struct Assertion {
    VarTuple vars;
    std::vector<Matrix> preds;

    Assertion() = default;
    Assertion(VarTuple vars_, std::vector<Matrix> preds_);

    std::size_t size() const { return preds.size(); }

    // Re-labels every member onto `target` (>= vars) and deduplicates.
    Assertion extended_to(const VarTuple& target) const;

    // Validates every member as a predicate; throws ValidationError.
    void check(const Tolerances& tol = {}) const;
};

// Appends a predicate unless an entrywise-equal member (within tol) exists.
void insert_dedup(std::vector<Matrix>& preds, Matrix m, double tol = 1e-10);

// min over members of Re tr(M rho), with rho given over `rho_vars` >= vars.
double expectation(const Matrix& rho, const VarTuple& rho_vars, const Assertion& theta);
double expectation(const DensityOperator& rho, const Assertion& theta);

}  // namespace nqv
