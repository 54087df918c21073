#pragma once

#include <map>
#include <optional>
#include <string>

#include "nqv/assertion.hpp"
#include "nqv/ast.hpp"
#include "nqv/linalg.hpp"

namespace nqv {

// A named operator: either a plain square matrix (usable as gate or
// predicate, checked at the use site) or a two-outcome measurement.
struct OperatorDef {
    std::optional<Matrix> mat;
    std::optional<std::pair<Matrix, Matrix>> meas;  // {P0, P1}
    bool builtin = false;

    bool is_measurement() const { return meas.has_value(); }
    Eigen::Index dim() const { return mat ? mat->rows() : meas->first.rows(); }
    std::size_t arity() const;
};

class OperatorEnv {
  public:
    // The reserved names: I, Zero, X, Y, Z, H, CX, P0, P1, Pp, Pm and the
    // measurements M01 (computational basis) and Mpm (Hadamard basis).
    static OperatorEnv with_builtins();

    void define(const std::string& name, OperatorDef def, SourceLoc loc = {});
    bool has(const std::string& name) const { return defs_.count(name) > 0; }
    const OperatorDef* find(const std::string& name) const;

    // Lookup that throws UnknownName with the use location.
    const OperatorDef& resolve(const std::string& name, SourceLoc loc = {}) const;

    const std::map<std::string, OperatorDef>& all() const { return defs_; }

  private:
    std::map<std::string, OperatorDef> defs_;
};

namespace gates {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
Matrix H();
Matrix CX();
}  // namespace gates

// A proof term whose names, arities and operator roles have been checked.
struct CheckedProof {
    std::string name;
    VarTuple reg;
    ProgramNode body;
    std::optional<Assertion> pre;  // over reg
    Assertion post;                // over reg
    OperatorEnv env;
    Tolerances tol;
};

// Resolves an assertion's terms against env, validates each as a predicate
// and extends everything onto reg.
Assertion bind_assertion(const AssertionExpr& expr, const OperatorEnv& env, const VarTuple& reg,
                         const Tolerances& tol = {});

// Validates a parsed proof against an environment. Checks that every name
// resolves, arities match, gates are unitary, branch conditions are
// measurements, assertion terms are predicates, and all variables lie in the
// declared register.
CheckedProof typecheck(const ProofDecl& proof, const OperatorEnv& env, const Tolerances& tol = {});

}  // namespace nqv
