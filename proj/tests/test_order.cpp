#include <cmath>

#include "doctest.h"
#include "nqv/order.hpp"
#include "testutil.hpp"

using namespace nqv;
using testutil::Rng;

namespace {

Eigen::VectorXd random_simplex(std::size_t m, Rng& g) {
    std::exponential_distribution<double> e(1.0);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index(m));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = e(g) + 1e-3;
    return v / v.sum();
}

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("loewner comparison") {
    const LabeledOperator half({"q"}, 0.5 * identity(2));
    const LabeledOperator full({"q"}, identity(2));
    CHECK(loewner_le(half, full, 1e-10));
    CHECK_FALSE(loewner_le(full, half, 1e-10));
    // Shared-variable extension: X on q against I on (q, r).
    CHECK(loewner_le({{"q"}, 0.5 * (identity(2) + gates::X())}, {{"q", "r"}, identity(4)},
                     1e-10));
    CHECK_THROWS_AS(
        loewner_le({{"q"}, Matrix(gates::X() * gates::Z())}, {{"q"}, identity(2)}, 1e-10),
        HermiticityError);
}

TEST_CASE("singleton comparisons take the exact eigenvalue path") {
    const VarTuple reg{"q"};
    const Matrix p0 = testutil::basis_proj(0, 2);

    SUBCASE("a projector sits below the identity") {
        const OrderDecision dec = inf_le(Assertion(reg, {p0}), Assertion(reg, {identity(2)}));
        CHECK(dec.verdict == OrderVerdict::Holds);
        REQUIRE(dec.targets.size() == 1);
        CHECK(dec.targets[0].iterations == 1);  // no descent needed
        REQUIRE(dec.targets[0].holds.has_value());
        CHECK(dec.targets[0].holds->residual <= 0.0);
    }
    SUBCASE("the identity does not sit below a projector") {
        const OrderDecision dec = inf_le(Assertion(reg, {identity(2)}), Assertion(reg, {p0}));
        CHECK(dec.verdict == OrderVerdict::Fails);
        REQUIRE(dec.witness.has_value());
        CHECK(dec.witness->margin == doctest::Approx(1.0).epsilon(1e-9));
        // The refuting state is the excited basis state, where I - P0 gaps.
        CHECK(approx_equal(dec.witness->rho, testutil::basis_proj(1, 2), 1e-9));
    }
}

TEST_CASE("two basis projectors against the mixed-state bound") {
    const VarTuple reg{"q"};
    const Assertion theta(reg, {testutil::basis_proj(0, 2), testutil::basis_proj(1, 2)});
    const Assertion psi(reg, {0.5 * identity(2)});

    const OrderDecision dec = inf_le(theta, psi);
    CHECK(dec.verdict == OrderVerdict::Holds);
    REQUIRE(dec.targets.size() == 1);
    const HoldsCertificate& cert = *dec.targets[0].holds;
    REQUIRE(cert.lambda.size() == 2);
    CHECK(std::abs(cert.lambda(0) - 0.5) <= 1e-9);
    CHECK(std::abs(cert.lambda(1) - 0.5) <= 1e-9);
    CHECK(cert.residual <= 1e-9);

    // Dropping one member breaks the bound: |0><0| alone exceeds I/2 at |0>.
    const OrderDecision bad = inf_le(Assertion(reg, {testutil::basis_proj(0, 2)}), psi);
    CHECK(bad.verdict == OrderVerdict::Fails);
    REQUIRE(bad.witness.has_value());
    CHECK(std::abs(bad.witness->margin - 0.5) <= 1e-9);
    CHECK(approx_equal(bad.witness->rho, testutil::basis_proj(0, 2), 1e-8));
}

TEST_CASE("planted feasible instances certify within the budget") {
    Rng g(41);
    const VarTuple reg{"q1", "q2"};
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t m = 2 + std::size_t(trial % 4);
        std::vector<Matrix> members;
        for (std::size_t j = 0; j < m; ++j) members.push_back(testutil::random_predicate(4, g));
        const Eigen::VectorXd lam = random_simplex(m, g);
        Matrix mix = Matrix::Zero(4, 4);
        for (std::size_t j = 0; j < m; ++j) mix += lam(Eigen::Index(j)) * members[j];
        // Scale so the planted combination clears the target by a wide band.
        const Matrix n = (mix + 0.3 * identity(4)) / 1.3;
        for (auto& mj : members) mj /= 1.3;

        const OrderDecision dec = inf_le(Assertion(reg, members), Assertion(reg, {n}));
        REQUIRE(dec.verdict == OrderVerdict::Holds);
        CHECK(dec.targets[0].holds->residual <= 1e-7);
    }
}

TEST_CASE("planted infeasible instances are refuted with a verified witness") {
    Rng g(43);
    const VarTuple reg{"q1", "q2"};
    std::uniform_real_distribution<double> u(0.8, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t m = 2 + std::size_t(trial % 4);
        const Vector v = testutil::random_ket(4, g);
        const Matrix vv = v * v.adjoint();
        const Matrix perp = identity(4) - vv;
        double c = 1.0;
        std::vector<Matrix> members;
        for (std::size_t j = 0; j < m; ++j) {
            const double a = u(g);
            c = std::min(c, a);
            // Share the top eigenvector so the gap is visible immediately.
            members.push_back(a * vv + 0.1 * (perp * testutil::random_predicate(4, g) * perp));
        }
        const Matrix n = (c - 0.25) * vv;

        const OrderDecision dec = inf_le(Assertion(reg, members), Assertion(reg, {n}));
        REQUIRE(dec.verdict == OrderVerdict::Fails);
        const FailsWitness& w = *dec.witness;
        CHECK(w.margin >= 0.2);
        CHECK(std::abs(w.rho.trace().real() - 1.0) < 1e-9);
        // The witness is essentially the planted direction.
        CHECK((w.rho * vv).trace().real() > 0.95);
    }
}

TEST_CASE("each target gets its own report") {
    const VarTuple reg{"q"};
    const Assertion theta(reg, {testutil::basis_proj(0, 2), testutil::basis_proj(1, 2)});
    const Matrix plus = 0.5 * (identity(2) + gates::X());
    const Assertion psi(reg, {0.5 * identity(2), Matrix(0.1 * plus)});

    const OrderDecision dec = inf_le(theta, psi);
    CHECK(dec.verdict == OrderVerdict::Fails);  // the second target is refuted
    REQUIRE(dec.targets.size() == 2);
    CHECK(dec.targets[0].verdict == OrderVerdict::Holds);
    CHECK(dec.targets[1].verdict == OrderVerdict::Fails);
    REQUIRE(dec.witness.has_value());
    CHECK(dec.witness->target == 1);
    // Both basis expectations are one half at the refuting state while the
    // target expectation vanishes there.
    CHECK(dec.witness->margin == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(approx_equal(dec.witness->rho, identity(2) - plus, 1e-7));
}

TEST_CASE("a zero iteration budget is answered honestly") {
    const VarTuple reg{"q"};
    const Assertion theta(reg, {testutil::basis_proj(0, 2), testutil::basis_proj(1, 2)});
    OrderParams params;
    params.max_iters = 0;
    const OrderDecision dec = inf_le(theta, Assertion(reg, {0.5 * identity(2)}), params);
    CHECK(dec.verdict == OrderVerdict::Inconclusive);
    CHECK(dec.targets[0].iterations == 0);
    CHECK(dec.targets[0].lower <= dec.targets[0].upper);
    CHECK_FALSE(dec.targets[0].holds.has_value());
    CHECK_FALSE(dec.targets[0].fails.has_value());
}

TEST_CASE("boundary instances stay inconclusive rather than guessing") {
    // The optimum is exactly zero at the nonuniform weights (0.3, 0.7), and
    // no state refutes the target, so neither certificate is reachable at
    // the default tolerance. The honest answer is inconclusive.
    const VarTuple reg{"q"};
    const Assertion theta(reg, {diag2(1.0, 0.0), diag2(0.6, 0.8)});
    const Assertion psi(reg, {diag2(0.72, 0.56)});
    const OrderDecision dec = inf_le(theta, psi);
    CHECK(dec.verdict == OrderVerdict::Inconclusive);
    const TargetReport& rep = dec.targets[0];
    CHECK(rep.iterations == 2000);
    CHECK(rep.upper >= 0.0);       // never dips below the true optimum
    CHECK(rep.upper <= 0.05);      // but descent got close to it
    CHECK(rep.lower <= 1e-7);
}

TEST_CASE("pruning drops dominating members and preserves satisfaction") {
    Rng g(47);
    const VarTuple reg{"q1", "q2"};
    for (int trial = 0; trial < 8; ++trial) {
        const Matrix base = 0.9 * testutil::random_predicate(4, g);
        const Matrix above = base + 0.05 * identity(4);
        const Matrix other = testutil::random_predicate(4, g);
        const Assertion full(reg, {base, above, other, base});  // duplicate too
        const Assertion kept = prune(full);

        CHECK(kept.size() <= 2);
        for (int s = 0; s < 10; ++s) {
            const Matrix rho = testutil::random_density(4, g, true);
            CHECK(expectation(rho, reg, full) ==
                  doctest::Approx(expectation(rho, reg, kept)).epsilon(1e-10));
        }
    }
    SUBCASE("incomparable members all survive") {
        const Assertion pair(reg, {extend_matrix(testutil::basis_proj(0, 2), {"q1"}, reg),
                                   extend_matrix(testutil::basis_proj(1, 2), {"q1"}, reg)});
        CHECK(prune(pair).size() == 2);
    }
}

TEST_CASE("comparisons extend onto the union register") {
    const Assertion theta(VarTuple{"q"}, {identity(2)});
    const Assertion psi(VarTuple{"r"}, {0.5 * identity(2)});
    const OrderDecision dec = inf_le(theta, psi);
    CHECK(dec.vars == (VarTuple{"q", "r"}));
    CHECK(dec.verdict == OrderVerdict::Fails);
    CHECK(dec.witness->rho.rows() == 4);
}

TEST_CASE("verdict names match the report vocabulary") {
    CHECK(std::string(verdict_name(OrderVerdict::Holds)) == "holds");
    CHECK(std::string(verdict_name(OrderVerdict::Fails)) == "fails");
    CHECK(std::string(verdict_name(OrderVerdict::Inconclusive)) == "inconclusive");
}
