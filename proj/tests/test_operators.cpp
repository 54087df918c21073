#include <cmath>

#include "doctest.h"
#include "nqv/linalg.hpp"
#include "testutil.hpp"

using namespace nqv;
using testutil::Rng;

namespace {
const double S2 = 0.7071067811865476;  // 1/sqrt(2)

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}
}  // namespace

TEST_CASE("variable tuples") {
    VarTuple qs{"q1", "q2", "q3"};
    CHECK(qs.size() == 3);
    CHECK(qs.dim() == 8);
    CHECK(qs.contains("q2"));
    CHECK_FALSE(qs.contains("q4"));
    CHECK(*qs.position("q3") == 2);
    CHECK(qs.str() == "q1 q2 q3");

    VarTuple sub{"q3", "q1"};
    CHECK(sub.subset_of(qs));
    CHECK_FALSE(qs.subset_of(sub));
    CHECK(qs.minus(sub) == VarTuple{"q2"});
    CHECK(VarTuple{"a"}.disjoint_from(VarTuple{"b"}));
    CHECK_FALSE(qs.disjoint_from(sub));

    CHECK((VarTuple{"a"}.concat(VarTuple{"b", "c"})) == (VarTuple{"a", "b", "c"}));
    CHECK_THROWS_AS(qs.concat(sub), DisjointnessError);
    CHECK_THROWS_AS(VarTuple({"q", "q"}), DisjointnessError);
}

TEST_CASE("index map relabels basis states") {
    // Basis index x in (q2 q1) order picks bit q2 as the high bit; the same
    // physical state in (q1 q2) order is its bit reversal.
    VarTuple src{"q1", "q2"};
    VarTuple dst{"q2", "q1"};
    const auto map = index_map(src, dst);
    REQUIRE(map.size() == 4);
    CHECK(map[0] == 0);
    CHECK(map[1] == 2);  // |q2=0,q1=1> is index 2 in (q1 q2) order
    CHECK(map[2] == 1);
    CHECK(map[3] == 3);
}

TEST_CASE("frozen gate matrices") {
    CHECK(approx_equal(gates::H(), mat2(S2, S2, S2, -S2), 1e-15));
    CHECK(approx_equal(gates::X(), mat2(0, 1, 1, 0), 1e-15));
    CHECK(approx_equal(gates::Z(), mat2(1, 0, 0, -1), 1e-15));
    CHECK(approx_equal(gates::Y(), mat2(0, Complex(0, -1), Complex(0, 1), 0), 1e-15));
    Matrix cx(4, 4);
    cx << 1, 0, 0, 0,
          0, 1, 0, 0,
          0, 0, 0, 1,
          0, 0, 1, 0;
    CHECK(approx_equal(gates::CX(), cx, 1e-15));
}

TEST_CASE("tensor places the first factor most significant") {
    LabeledOperator x({"a"}, gates::X());
    LabeledOperator z({"b"}, gates::Z());
    const LabeledOperator xz = tensor(x, z);
    CHECK(xz.vars == (VarTuple{"a", "b"}));
    // <10| X (x) Z |00> = <1|X|0><0|Z|0> = 1
    CHECK(std::abs(xz.mat(2, 0) - Complex(1)) < 1e-15);
    CHECK(std::abs(xz.mat(0, 0)) < 1e-15);
    CHECK_THROWS_AS(tensor(x, LabeledOperator({"a"}, gates::Z())), DisjointnessError);
}

TEST_CASE("cylinder extension pads and permutes") {
    SUBCASE("identity padding on a fresh variable") {
        const Matrix ext = extend_matrix(gates::X(), {"q"}, {"p", "q"});
        LabeledOperator oracle = tensor(LabeledOperator({"p"}, identity(2)),
                                        LabeledOperator({"q"}, gates::X()));
        CHECK(approx_equal(ext, oracle.mat, 1e-15));
    }
    SUBCASE("pure permutation agrees with an index-level oracle") {
        Rng g(7);
        const Matrix u = testutil::random_unitary(4, g);
        const Matrix perm = extend_matrix(u, {"q1", "q2"}, {"q2", "q1"});
        // Swapping the register order conjugates by the bit-reversal
        // permutation: entry (x, y) moves to (rev x, rev y).
        Matrix oracle(4, 4);
        const Eigen::Index rev[4] = {0, 2, 1, 3};
        for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 4; ++c) oracle(rev[r], rev[c]) = u(r, c);
        CHECK(approx_equal(perm, oracle, 1e-14));
    }
    SUBCASE("target must contain the operator variables") {
        CHECK_THROWS_AS(extend_matrix(gates::X(), {"q"}, {"p", "r"}), ExtensionError);
    }
}

TEST_CASE("typed wrappers validate their matrices") {
    SUBCASE("predicates live in [0, I]") {
        CHECK_NOTHROW(QuantumPredicate::checked({{"q"}, 0.5 * identity(2)}));
        CHECK_THROWS_AS(QuantumPredicate::checked({{"q"}, 2.0 * identity(2)}), ValidationError);
        CHECK_THROWS_AS(QuantumPredicate::checked({{"q"}, -0.1 * identity(2)}), ValidationError);
        CHECK_THROWS_AS(QuantumPredicate::checked({{"q"}, mat2(0, 1, 0, 0)}), ValidationError);
    }
    SUBCASE("density operators are PSD with trace at most one") {
        CHECK_NOTHROW(DensityOperator::checked({{"q"}, 0.3 * identity(2)}));  // subnormalized
        CHECK_THROWS_AS(DensityOperator::checked({{"q"}, identity(2)}), ValidationError);
        CHECK_THROWS_AS(DensityOperator::checked({{"q"}, mat2(1, 0, 0, -0.1)}), ValidationError);
    }
    SUBCASE("channels are trace nonincreasing") {
        CHECK_NOTHROW(SuperOperator::checked({"q"}, {S2 * gates::X(), S2 * gates::Z()}));
        CHECK_THROWS_AS(SuperOperator::checked({"q"}, {std::sqrt(2.0) * identity(2)}),
                        ValidationError);
    }
    SUBCASE("measurements are complementary projectors") {
        const Matrix p0 = testutil::basis_proj(0, 2);
        CHECK_NOTHROW(ProjectiveMeasurement::checked({"q"}, p0, identity(2) - p0));
        CHECK_THROWS_AS(ProjectiveMeasurement::checked({"q"}, p0, p0), ValidationError);
        CHECK_THROWS_AS(
            ProjectiveMeasurement::checked({"q"}, 0.5 * identity(2), 0.5 * identity(2)),
            ValidationError);
    }
}

TEST_CASE("channel application and the Heisenberg adjoint are trace dual") {
    Rng g(11);
    const VarTuple reg{"q1", "q2"};
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix u = testutil::random_unitary(4, g);
        const Matrix p = testutil::basis_proj(Eigen::Index(trial % 4), 4);
        SuperOperator e(reg, {u * p, 0.5 * (identity(4) - p)});
        const Matrix rho = testutil::random_density(4, g, true);
        const Matrix a = testutil::random_predicate(4, g);
        const Complex lhs = (apply_adjoint(e, a, reg) * rho).trace();
        const Complex rhs = (a * apply_matrix(e, rho, reg)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("composition and sum act as expected on transfer matrices") {
    Rng g(13);
    const VarTuple reg{"q"};
    const Matrix u = testutil::random_unitary(2, g);
    const Matrix v = testutil::random_unitary(2, g);
    SuperOperator eu(reg, {u});
    SuperOperator ev(reg, {v});

    const SuperOperator both = compose(ev, eu);  // ev after eu
    CHECK(approx_equal(transfer_matrix(both), transfer_matrix(ev) * transfer_matrix(eu), 1e-12));
    CHECK(channel_equal(both, SuperOperator(reg, {v * u})));

    const SuperOperator sum = add(SuperOperator(reg, {S2 * u}), SuperOperator(reg, {S2 * v}));
    const Matrix rho = testutil::random_density(2, g);
    const Matrix expect = 0.5 * (u * rho * u.adjoint()) + 0.5 * (v * rho * v.adjoint());
    CHECK(approx_equal(apply_matrix(sum, rho, reg), expect, 1e-12));
}

TEST_CASE("composition joins disjoint registers") {
    SuperOperator on_a({"a"}, {gates::X()});
    SuperOperator on_b({"b"}, {gates::H()});
    const SuperOperator joint = compose(on_b, on_a);
    CHECK(joint.vars.contains("a"));
    CHECK(joint.vars.contains("b"));
    const Matrix rho = testutil::basis_proj(0, 4);
    const Matrix out = apply_matrix(joint, rho, joint.vars);
    CHECK(std::abs(out.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("partial trace") {
    Rng g(17);
    const VarTuple reg{"q1", "q2"};
    SUBCASE("discards an uncorrelated factor") {
        const Matrix ra = testutil::random_density(2, g);
        const Matrix rb = testutil::random_density(2, g, true);
        LabeledOperator joint = tensor(LabeledOperator({"q1"}, ra), LabeledOperator({"q2"}, rb));
        const Matrix kept = partial_trace_matrix(joint.mat, reg, {"q1"});
        CHECK(approx_equal(kept, rb.trace().real() * ra, 1e-12));
    }
    SUBCASE("maximally entangled pair reduces to the mixed state") {
        Vector bell(4);
        bell << S2, 0, 0, S2;
        const Matrix rho = bell * bell.adjoint();
        CHECK(approx_equal(partial_trace_matrix(rho, reg, {"q2"}), 0.5 * identity(2), 1e-12));
    }
    SUBCASE("tracing everything yields the scalar trace") {
        const Matrix rho = testutil::random_density(4, g, true);
        const Matrix scalar = partial_trace_matrix(rho, reg, {});
        REQUIRE(scalar.rows() == 1);
        CHECK(std::abs(scalar(0, 0) - rho.trace()) < 1e-12);
    }
}

TEST_CASE("hermitian eigensolver") {
    Matrix m(2, 2);
    m << 2, Complex(0, -1), Complex(0, 1), 2;
    const EigResult eig = eig_hermitian(m);
    CHECK(eig.values(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eig.values(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((m * eig.top - eig.values(0) * eig.top).norm() < 1e-9);
    CHECK(std::abs(eig.top.norm() - 1.0) < 1e-12);

    CHECK_THROWS_AS(eig_hermitian(mat2(0, 1, 0, 0)), HermiticityError);
    CHECK(max_eigenvalue(gates::Z()) == doctest::Approx(1.0));
    CHECK(min_eigenvalue(gates::Z()) == doctest::Approx(-1.0));
}

TEST_CASE("choi matrix certifies complete positivity") {
    Rng g(19);
    const VarTuple reg{"q"};
    const Matrix u = testutil::random_unitary(2, g);
    const Matrix choi = choi_matrix(SuperOperator(reg, {u}));
    CHECK(min_eigenvalue(choi) > -1e-10);
    // A unitary channel's Choi matrix is rank one with trace d.
    CHECK(max_eigenvalue(choi) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(choi.trace().real() - 2.0) < 1e-10);
}

TEST_CASE("channel identity is invariant under Kraus remixing") {
    const Matrix p0 = testutil::basis_proj(0, 2);
    const Matrix p1 = testutil::basis_proj(1, 2);
    SuperOperator plain({"q"}, {p0, p1});
    // A unitary rotation of the Kraus list leaves the channel unchanged.
    SuperOperator mixed({"q"}, {S2 * (p0 + p1), S2 * (p0 - p1)});
    CHECK(channel_equal(plain, mixed));
    CHECK(approx_equal(transfer_matrix(plain), transfer_matrix(mixed), 1e-12));
    SuperOperator other({"q"}, {p0});
    CHECK_FALSE(channel_equal(plain, other));
}

TEST_CASE("basis kets are MSB first") {
    // In register order (q1 q2), |q1=1, q2=0> has index 2.
    const Vector v = basis_ket(2, 4);
    CHECK(std::abs(v(2) - Complex(1)) < 1e-15);
    CHECK(v.norm() == doctest::Approx(1.0));
}
