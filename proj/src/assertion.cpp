#include "nqv/assertion.hpp"

#include <cmath>
#include <limits>

namespace nqv {

Assertion::Assertion(VarTuple vars_, std::vector<Matrix> preds_)
    : vars(std::move(vars_)), preds(std::move(preds_)) {
    if (preds.empty())
        throw ValidationError("assertion over [" + vars.str() + "] must not be empty");
    for (const auto& m : preds)
        if (m.rows() != vars.dim() || m.cols() != vars.dim())
            throw ValidationError("assertion member does not match register [" + vars.str() + "]");
}

void insert_dedup(std::vector<Matrix>& preds, Matrix m, double tol) {
    for (const auto& p : preds)
        if (approx_equal(p, m, tol)) return;
    preds.push_back(std::move(m));
}

Assertion Assertion::extended_to(const VarTuple& target) const {
    std::vector<Matrix> out;
    out.reserve(preds.size());
    for (const auto& m : preds) insert_dedup(out, extend_matrix(m, vars, target));
    return Assertion(target, std::move(out));
}

void Assertion::check(const Tolerances& tol) const {
    for (const auto& m : preds)
        QuantumPredicate::checked(LabeledOperator(vars, m), tol);
}

double expectation(const Matrix& rho, const VarTuple& rho_vars, const Assertion& theta) {
    const Assertion ext = theta.vars == rho_vars ? theta : theta.extended_to(rho_vars);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : ext.preds) {
        const Complex tr = (m * rho).trace();
        if (std::abs(tr.imag()) > 1e-9)
            throw ValidationError("expectation has non-real value; predicate or state corrupt");
        best = std::min(best, tr.real());
    }
    return best;
}

double expectation(const DensityOperator& rho, const Assertion& theta) {
    return expectation(rho.op.mat, rho.op.vars, theta);
}

}  // namespace nqv
