#pragma once

#include <string>
#include <vector>

#include "nqv/ast.hpp"
#include "nqv/env.hpp"
#include "nqv/wlp.hpp"

namespace nqv {

// Display identity of a predicate matrix: a source term for operators the
// user loaded, or an auto-allocated VARk for everything the transformer
// produced fresh.
struct NamedPredicate {
    std::string name;
    VarTuple display_vars;  // as written for source terms, the register for VARk
    Matrix full;            // extended onto the register
    bool generated;
};

// Hands out names for assertion members. Matching is numeric (entrywise
// within 1e-9) against user-loaded source terms first, then against already
// named predicates; VAR numbering therefore follows the order assertions were
// created in. Builtins are never matched: their extensions get fresh names.
class PredicateNamer {
  public:
    PredicateNamer(VarTuple reg, double match_tol = 1e-9);

    // Register a `name[vars]` source term as a naming candidate.
    void add_source_term(const std::string& name, const VarTuple& vars, const Matrix& natural);
    // Collect candidates from every assertion written in a proof.
    void add_proof_terms(const ProofDecl& proof, const OperatorEnv& env);

    const NamedPredicate& name_for(const Matrix& full);
    // Assign names to every assertion of a transform, in creation order.
    void scan(const TransformResult& result);

    std::string render(const Assertion& a);
    const std::vector<NamedPredicate>& entries() const { return entries_; }
    const NamedPredicate* find(const std::string& name) const;

  private:
    VarTuple reg_;
    double match_tol_;
    std::vector<NamedPredicate> entries_;
    int next_var_ = 0;
};

// Deterministic fixed-precision matrix rendering: 6 significant digits,
// exact zeros as 0.
std::string format_matrix(const Matrix& m);
std::string format_weights(const Eigen::VectorXd& v);

// The annotated listing for a verified proof: every statement prefixed with
// its derived precondition, invariants and outer pre/post as written.
std::string render_outline(const ProofDecl& proof, const TransformResult& result,
                           PredicateNamer& namer);

}  // namespace nqv
