#include "nqv/env.hpp"

#include <cmath>

namespace nqv {

namespace gates {

Matrix I() { return Matrix::Identity(2, 2); }

Matrix X() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix Y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix Z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix H() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << s, s, s, -s;
    return m;
}

Matrix CX() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

}  // namespace gates

std::size_t OperatorDef::arity() const {
    const Eigen::Index d = dim();
    std::size_t n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    return n;
}

OperatorEnv OperatorEnv::with_builtins() {
    OperatorEnv env;
    const auto mat = [&](const char* name, Matrix m) {
        env.defs_[name] = OperatorDef{std::move(m), std::nullopt, true};
    };
    const auto meas = [&](const char* name, Matrix p0, Matrix p1) {
        env.defs_[name] =
            OperatorDef{std::nullopt, std::make_pair(std::move(p0), std::move(p1)), true};
    };
    mat("I", gates::I());
    mat("Zero", Matrix::Zero(2, 2));
    mat("X", gates::X());
    mat("Y", gates::Y());
    mat("Z", gates::Z());
    mat("H", gates::H());
    mat("CX", gates::CX());

    const Vector zero = basis_ket(0, 2), one = basis_ket(1, 2);
    const double s = 1.0 / std::sqrt(2.0);
    const Vector plus = s * (zero + one), minus = s * (zero - one);
    const Matrix p0 = zero * zero.adjoint(), p1 = one * one.adjoint();
    const Matrix pp = plus * plus.adjoint(), pm = minus * minus.adjoint();
    mat("P0", p0);
    mat("P1", p1);
    mat("Pp", pp);
    mat("Pm", pm);
    meas("M01", p0, p1);
    meas("Mpm", pp, pm);
    return env;
}

void OperatorEnv::define(const std::string& name, OperatorDef def, SourceLoc loc) {
    auto [it, inserted] = defs_.emplace(name, std::move(def));
    if (!inserted) {
        const std::string kind = it->second.builtin ? "builtin" : "earlier definition";
        throw DuplicateName("name '" + name + "' at " + loc.str() + " collides with a " + kind);
    }
}

const OperatorDef* OperatorEnv::find(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
}

const OperatorDef& OperatorEnv::resolve(const std::string& name, SourceLoc loc) const {
    const OperatorDef* def = find(name);
    if (!def) throw UnknownName("unknown operator '" + name + "' at " + loc.str());
    return *def;
}

namespace {

void check_in_register(const VarTuple& vars, const VarTuple& reg, SourceLoc loc) {
    for (const auto& v : vars)
        if (!reg.contains(v))
            throw UnknownName("qubit '" + v + "' at " + loc.str() +
                              " is not in the proof register [" + reg.str() + "]");
}

void check_arity(const std::string& name, const OperatorDef& def, const VarTuple& vars,
                 SourceLoc loc) {
    if (def.arity() != vars.size())
        throw ArityMismatch("operator '" + name + "' at " + loc.str() + " acts on " +
                            std::to_string(def.arity()) + " qubit(s) but is applied to [" +
                            vars.str() + "]");
}

void check_statement(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                     const Tolerances& tol) {
    check_in_register(node.vars, reg, node.loc);
    switch (node.kind) {
        case NodeKind::Unitary: {
            const OperatorDef& def = env.resolve(node.op_name, node.loc);
            if (def.is_measurement())
                throw NotUnitary("'" + node.op_name + "' at " + node.loc.str() +
                                 " is a measurement, not a gate");
            check_arity(node.op_name, def, node.vars, node.loc);
            const Matrix& u = *def.mat;
            if ((u.adjoint() * u - identity(u.rows())).cwiseAbs().maxCoeff() > tol.herm)
                throw NotUnitary("'" + node.op_name + "' at " + node.loc.str() +
                                 " is not unitary");
            break;
        }
        case NodeKind::If:
        case NodeKind::While: {
            const OperatorDef& def = env.resolve(node.op_name, node.loc);
            if (!def.is_measurement())
                throw NotMeasurement("'" + node.op_name + "' at " + node.loc.str() +
                                     " is not a measurement");
            check_arity(node.op_name, def, node.vars, node.loc);
            break;
        }
        default:
            break;
    }
    for (const auto& c : node.children) check_statement(c, env, reg, tol);
    if (node.kind == NodeKind::While && node.invariant)
        for (const auto& t : node.invariant->terms) check_in_register(t.vars, reg, t.loc);
}

// Invariant terms must bind as predicates even before the transformer runs.
void check_invariant_terms(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                           const Tolerances& tol) {
    if (node.kind == NodeKind::While && node.invariant)
        bind_assertion(*node.invariant, env, reg, tol);
    for (const auto& c : node.children) check_invariant_terms(c, env, reg, tol);
}

}  // namespace

Assertion bind_assertion(const AssertionExpr& expr, const OperatorEnv& env, const VarTuple& reg,
                         const Tolerances& tol) {
    std::vector<Matrix> preds;
    for (const auto& t : expr.terms) {
        const OperatorDef& def = env.resolve(t.name, t.loc);
        if (def.is_measurement())
            throw NotPredicate("'" + t.name + "' at " + t.loc.str() +
                               " is a measurement, not a predicate");
        check_arity(t.name, def, t.vars, t.loc);
        check_in_register(t.vars, reg, t.loc);
        try {
            QuantumPredicate::checked(LabeledOperator(t.vars, *def.mat), tol);
        } catch (const ValidationError& e) {
            throw NotPredicate("'" + t.name + "' at " + t.loc.str() +
                               " is not a predicate: " + e.what());
        }
        insert_dedup(preds, extend_matrix(*def.mat, t.vars, reg));
    }
    return Assertion(reg, std::move(preds));
}

CheckedProof typecheck(const ProofDecl& proof, const OperatorEnv& env, const Tolerances& tol) {
    CheckedProof out;
    out.name = proof.name;
    out.reg = proof.reg;
    out.body = proof.body;
    out.env = env;
    out.tol = tol;

    check_statement(proof.body, env, proof.reg, tol);
    check_invariant_terms(proof.body, env, proof.reg, tol);
    if (proof.pre) out.pre = bind_assertion(*proof.pre, env, proof.reg, tol);
    out.post = bind_assertion(proof.post, env, proof.reg, tol);
    return out;
}

}  // namespace nqv
