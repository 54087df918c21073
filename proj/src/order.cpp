#include "nqv/order.hpp"

#include <cmath>
#include <limits>

namespace nqv {

const char* verdict_name(OrderVerdict v) {
    switch (v) {
        case OrderVerdict::Holds: return "holds";
        case OrderVerdict::Fails: return "fails";
        case OrderVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool loewner_le(const LabeledOperator& a, const LabeledOperator& b, double tol) {
    const VarTuple target = a.vars.concat(b.vars.minus(a.vars));
    const Matrix am = extend_matrix(a.mat, a.vars, target);
    const Matrix bm = extend_matrix(b.mat, b.vars, target);
    if (!is_hermitian(am, 1e-9) || !is_hermitian(bm, 1e-9))
        throw HermiticityError("Loewner comparison needs Hermitian operands");
    return min_eigenvalue(bm - am) >= -tol;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exact re-checks; a failure here means the solver produced garbage.
void verify_holds(const std::vector<Matrix>& diffs, const HoldsCertificate& cert, double tol) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < cert.lambda.size(); ++j) {
        if (cert.lambda(j) < -1e-12)
            throw InternalCertificateError("holds certificate has a negative weight");
        sum += cert.lambda(j);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw InternalCertificateError("holds certificate weights do not sum to one");
    Matrix h = Matrix::Zero(diffs[0].rows(), diffs[0].cols());
    for (std::size_t j = 0; j < diffs.size(); ++j) h += cert.lambda(Eigen::Index(j)) * diffs[j];
    if (max_eigenvalue(h) > tol + 1e-12)
        throw InternalCertificateError("holds certificate residual exceeds tolerance");
}

void verify_fails(const std::vector<Matrix>& diffs, const FailsWitness& wit, double tol) {
    if (!is_hermitian(wit.rho, 1e-9) || std::abs(wit.rho.trace().real() - 1.0) > 1e-9 ||
        min_eigenvalue(wit.rho) < -1e-9)
        throw InternalCertificateError("fails witness is not a unit-trace state");
    double margin = kInf;
    for (const auto& d : diffs) margin = std::min(margin, (d * wit.rho).trace().real());
    if (margin <= tol)
        throw InternalCertificateError("fails witness margin does not refute the target");
}

TargetReport decide_target(const std::vector<Matrix>& diffs, std::size_t target_index,
                           const OrderParams& params) {
    TargetReport rep;
    rep.lower = -kInf;
    rep.upper = kInf;
    const std::size_t m = diffs.size();

    if (m == 1) {
        const EigResult eig = eig_hermitian(diffs[0]);
        const double top = eig.values(0);
        rep.iterations = 1;
        rep.lower = rep.upper = top;
        if (top <= params.tol_accept) {
            rep.verdict = OrderVerdict::Holds;
            rep.holds = HoldsCertificate{Eigen::VectorXd::Ones(1), top};
        } else {
            rep.verdict = OrderVerdict::Fails;
            rep.fails = FailsWitness{Matrix(eig.top * eig.top.adjoint()), target_index, top};
        }
        return rep;
    }

    // Exponentiated-gradient descent over the simplex for
    //   v* = min_lambda lambda_max(sum_j lambda_j (M_j - N)).
    // Any iterate bounds v* from above; any unit vector bounds it from below
    // through min_j <v|M_j - N|v>.
    double lipschitz = 0.0;
    for (const auto& d : diffs) {
        const EigResult e = eig_hermitian(d);
        lipschitz = std::max(lipschitz,
                             std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1))));
    }
    lipschitz = std::max(lipschitz, 1e-300);

    Eigen::VectorXd lambda = Eigen::VectorXd::Constant(Eigen::Index(m), 1.0 / double(m));
    Eigen::VectorXd best_lambda = lambda;
    Vector best_vec;
    const double logm = std::log(double(m));

    for (int t = 0; t < params.max_iters; ++t) {
        Matrix h = Matrix::Zero(diffs[0].rows(), diffs[0].cols());
        for (std::size_t j = 0; j < m; ++j) h += lambda(Eigen::Index(j)) * diffs[j];
        const EigResult eig = eig_hermitian(h);
        rep.iterations = t + 1;

        if (eig.values(0) < rep.upper) {
            rep.upper = eig.values(0);
            best_lambda = lambda;
        }
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(Eigen::Index(m));
        double floor = kInf;
        for (std::size_t j = 0; j < m; ++j) {
            grad(Eigen::Index(j)) = (eig.top.adjoint() * diffs[j] * eig.top)(0).real();
            floor = std::min(floor, grad(Eigen::Index(j)));
        }
        if (floor > rep.lower) {
            rep.lower = floor;
            best_vec = eig.top;
        }

        if (rep.upper <= params.tol_accept) {
            rep.verdict = OrderVerdict::Holds;
            rep.holds = HoldsCertificate{best_lambda, rep.upper};
            return rep;
        }
        if (rep.lower > params.tol_accept) {
            rep.verdict = OrderVerdict::Fails;
            rep.fails = FailsWitness{Matrix(best_vec * best_vec.adjoint()), target_index, rep.lower};
            return rep;
        }

        const double step = std::sqrt(logm / double(t + 1)) / lipschitz;
        // Multiplicative update in log space, normalized for stability.
        Eigen::VectorXd logl = (lambda.array().max(1e-300).log() - step * grad.array()).matrix();
        logl.array() -= logl.maxCoeff();
        lambda = logl.array().exp().matrix();
        lambda /= lambda.sum();
    }
    rep.verdict = OrderVerdict::Inconclusive;
    return rep;
}

}  // namespace

OrderDecision inf_le(const Assertion& theta, const Assertion& psi, const OrderParams& params) {
    const VarTuple target = theta.vars.concat(psi.vars.minus(theta.vars));
    const Assertion th = theta.extended_to(target);
    const Assertion ps = psi.extended_to(target);

    OrderDecision dec;
    dec.vars = target;
    dec.verdict = OrderVerdict::Holds;
    for (std::size_t ni = 0; ni < ps.preds.size(); ++ni) {
        std::vector<Matrix> diffs;
        diffs.reserve(th.preds.size());
        for (const auto& mj : th.preds) diffs.push_back(mj - ps.preds[ni]);

        TargetReport rep = decide_target(diffs, ni, params);
        if (rep.verdict == OrderVerdict::Holds)
            verify_holds(diffs, *rep.holds, params.tol_accept);
        else if (rep.verdict == OrderVerdict::Fails)
            verify_fails(diffs, *rep.fails, params.tol_accept);

        if (rep.verdict == OrderVerdict::Fails && !dec.witness) dec.witness = rep.fails;
        if (rep.verdict == OrderVerdict::Fails)
            dec.verdict = OrderVerdict::Fails;
        else if (rep.verdict == OrderVerdict::Inconclusive && dec.verdict == OrderVerdict::Holds)
            dec.verdict = OrderVerdict::Inconclusive;
        dec.targets.push_back(std::move(rep));
    }
    return dec;
}

Assertion prune(const Assertion& theta, double tol) {
    std::vector<Matrix> unique;
    for (const auto& m : theta.preds) insert_dedup(unique, m, tol);

    const auto le = [&](const Matrix& a, const Matrix& b) {
        return min_eigenvalue(b - a) >= -tol;
    };
    std::vector<bool> drop(unique.size(), false);
    for (std::size_t j = 0; j < unique.size(); ++j) {
        for (std::size_t i = 0; i < unique.size() && !drop[j]; ++i) {
            if (i == j) continue;
            // Drop the dominating member; on mutual domination the earlier
            // index survives.
            if (le(unique[i], unique[j]) && !(le(unique[j], unique[i]) && j < i)) drop[j] = true;
        }
    }
    std::vector<Matrix> kept;
    for (std::size_t j = 0; j < unique.size(); ++j)
        if (!drop[j]) kept.push_back(unique[j]);
    if (kept.empty()) kept.push_back(unique.front());
    return Assertion(theta.vars, std::move(kept));
}

}  // namespace nqv
