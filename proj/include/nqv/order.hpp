#pragma once

#include <optional>
#include <vector>

#include "nqv/assertion.hpp"
#include "nqv/linalg.hpp"

namespace nqv {

struct OrderParams {
    double tol_accept = 1e-7;  // acceptance band around zero
    int max_iters = 2000;      // mirror-descent budget per target
};

enum class OrderVerdict { Holds, Fails, Inconclusive };

const char* verdict_name(OrderVerdict v);

// Proof that min over the simplex of lambda_max(sum_j lambda_j M_j - N) lies
// below the acceptance band: the achieving weights plus the residual.
struct HoldsCertificate {
    Eigen::VectorXd lambda;
    double residual;
};

// Refuting state: min_j tr((M_j - N) rho) = margin > tolerance, so rho
// satisfies theta strictly better than the psi member it violates.
struct FailsWitness {
    Matrix rho;          // PSD, unit trace, rank one
    std::size_t target;  // index into psi
    double margin;
};

// Outcome for a single psi member.
struct TargetReport {
    OrderVerdict verdict = OrderVerdict::Inconclusive;
    std::optional<HoldsCertificate> holds;
    std::optional<FailsWitness> fails;
    double lower;  // certified bracket around the optimum
    double upper;
    int iterations = 0;
};

struct OrderDecision {
    OrderVerdict verdict = OrderVerdict::Inconclusive;
    VarTuple vars;  // common register the comparison ran on
    std::vector<TargetReport> targets;
    std::optional<FailsWitness> witness;  // first refuted target, if any
};

// a <= b in the Loewner order, i.e. b - a is PSD within tol.
bool loewner_le(const LabeledOperator& a, const LabeledOperator& b, double tol);

// Decides theta <=_inf psi: for every member N of psi, whether some convex
// combination of theta's members sits below N. Every verdict carries a
// certificate that is re-verified exactly before returning; a certificate
// that fails its re-check raises InternalCertificateError.
OrderDecision inf_le(const Assertion& theta, const Assertion& psi, const OrderParams& params = {});

// Removes duplicates and members that dominate another member. Satisfaction
// degrees are unchanged: the minimum never lived on a dominating member.
Assertion prune(const Assertion& theta, double tol = 1e-10);

}  // namespace nqv
