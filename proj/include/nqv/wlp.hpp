#pragma once

#include <optional>
#include <vector>

#include "nqv/assertion.hpp"
#include "nqv/ast.hpp"
#include "nqv/env.hpp"
#include "nqv/order.hpp"

namespace nqv {

enum class RuleTag { Skip, Abort, Init, Unit, Seq, NDet, Meas, While, Imp, Union };

const char* rule_name(RuleTag r);

// One backward transformation: the node at `path` took `post` to `pre`.
struct TransformStep {
    std::vector<int> path;  // child indices from the proof body root
    RuleTag rule;
    Assertion post;
    Assertion pre;
};

// The order decision backing one while statement's invariant.
struct InvariantCheck {
    std::vector<int> path;
    OrderDecision decision;
};

struct TransformOptions {
    std::size_t cap = 4096;      // assertion-set size limit
    bool prune_each_step = true; // drop dominating members after every rule
    double dedup_tol = 1e-10;
    OrderParams order;           // invariant decision parameters
    Tolerances tol;
};

struct TransformResult {
    Assertion pre;
    // Steps in creation order: sequences are walked back to front, so inner
    // results appear before the assertions derived from them.
    std::vector<TransformStep> steps;
    std::vector<InvariantCheck> invariants;
};

// A while statement whose annotated invariant the order engine rejected (or
// could not decide). Carries the decision for reporting.
struct InvalidInvariant : VerifierError {
    OrderDecision decision;
    std::vector<int> path;
    InvalidInvariant(const std::string& what, OrderDecision decision_, std::vector<int> path_)
        : VerifierError(what), decision(std::move(decision_)), path(std::move(path_)) {}
};

// Weakest liberal precondition transformer (partial correctness). While
// statements need an invariant annotation; its validity is decided on the
// spot and InvalidInvariant raised when it does not hold.
TransformResult wlp(const ProgramNode& program, const Assertion& post, const OperatorEnv& env,
                    const VarTuple& reg, const TransformOptions& opts = {});

// Weakest precondition transformer (total correctness); loop-free only.
TransformResult wp_loopfree(const ProgramNode& program, const Assertion& post,
                            const OperatorEnv& env, const VarTuple& reg,
                            const TransformOptions& opts = {});

// Decides whether `inv` is a valid invariant for `while_node` against the
// loop postcondition `post`: inv <=_inf wlp(body, P0(post) + P1(inv)).
OrderDecision check_invariant(const Assertion& inv, const ProgramNode& while_node,
                              const Assertion& post, const OperatorEnv& env, const VarTuple& reg,
                              const TransformOptions& opts = {});

}  // namespace nqv
