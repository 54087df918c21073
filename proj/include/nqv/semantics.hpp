#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nqv/assertion.hpp"
#include "nqv/ast.hpp"
#include "nqv/env.hpp"
#include "nqv/linalg.hpp"

namespace nqv {

struct SemanticsOptions {
    std::size_t cap = 4096;        // max channels per set
    bool allow_truncation = false; // cap behavior: mark truncated vs throw
    double dedup_tol = 1e-10;      // channel identity threshold
};

// The denotation of a statement: finitely many channels over the register,
// one per scheduler resolution, deduplicated by action.
struct SemanticsSet {
    VarTuple vars;
    std::vector<SuperOperator> elems;
    bool truncated = false;
};

// Channels for the primitive statements, already on the full register.
SuperOperator skip_channel(const VarTuple& reg);
SuperOperator abort_channel(const VarTuple& reg);
SuperOperator init_channel(const VarTuple& targets, const VarTuple& reg);
SuperOperator unitary_channel(const Matrix& u, const VarTuple& on, const VarTuple& reg);
SuperOperator projector_channel(const Matrix& p, const VarTuple& on, const VarTuple& reg);

// Structural denotation of a loop-free statement. Throws LoopPresentError on
// a while statement and SetExplosionError past the cap.
SemanticsSet denote_loopfree(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                             const SemanticsOptions& opts = {});

// Denotation with every loop unrolled `depth` body rounds; the result
// under-approximates the full denotation and rises toward it with depth.
SemanticsSet denote_bounded(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                            int depth, const SemanticsOptions& opts = {});

// The depth-n unrolling of one while statement under an explicit scheduler:
// entry i picks the body channel for round i+1 out of `body`. An empty
// scheduler yields the pure exit channel.
SuperOperator bounded_loop_channel(const ProgramNode& while_node, const OperatorEnv& env,
                                   const VarTuple& reg, const std::vector<SuperOperator>& body,
                                   const std::vector<std::size_t>& scheduler);

// Deterministic state sampling for the empirical checker: computational basis
// states and the maximally mixed state first, Haar-style pure and mixed
// sub-normalized states after.
std::vector<Matrix> sample_states(Eigen::Index dim, int count, std::uint64_t seed);

enum class Mode { Partial, Total };

struct Counterexample {
    Matrix rho;          // input state over the register
    Matrix sigma;        // offending output state
    int sample_index;
    int channel_index;
    double lhs;          // Exp(rho |= pre)
    double rhs;          // Exp(sigma |= post) [+ trace gap in partial mode]
};

struct EmpiricalResult {
    bool violated = false;
    std::optional<Counterexample> witness;
    int samples_run = 0;
};

// One-sided falsifier for a correctness formula: samples states, pushes them
// through every channel of the (depth-bounded) denotation and tests the
// defining inequality with slack 1e-7. Finding nothing proves nothing.
EmpiricalResult check_formula_empirical(const Assertion& pre, const ProgramNode& program,
                                        const Assertion& post, const OperatorEnv& env,
                                        const VarTuple& reg, Mode mode, int depth, int samples,
                                        std::uint64_t seed,
                                        const SemanticsOptions& opts = {});

}  // namespace nqv
