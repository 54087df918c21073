#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nqv/ast.hpp"
#include "nqv/env.hpp"
#include "nqv/order.hpp"
#include "nqv/outline.hpp"
#include "nqv/semantics.hpp"
#include "nqv/wlp.hpp"

namespace nqv {

// Process exit codes. Holds also covers "all corpus entries pass" and
// "precondition computed" runs that had nothing to refute.
enum class Outcome : int { Holds = 0, Fails = 1, Inconclusive = 2, Error = 3 };

struct VerifyOptions {
    double epsilon = 1e-7;     // acceptance band of the order engine
    int max_iters = 2000;      // per-target optimization budget
    int oracle_depth = 0;      // >0 cross-checks verified formulas empirically
    int oracle_samples = 200;  // states per cross-checked formula
    std::string save_dir;      // when set, generated predicates land here as qmat files
    std::uint64_t seed = 1;    // sampling seed for the cross-check
    Mode mode = Mode::Partial;
    std::size_t cap = 4096;    // assertion-set size limit
    Tolerances tol;
};

// Everything produced while verifying one proof declaration.
struct ProofOutcome {
    std::string name;
    bool has_user_pre = false;
    // Verdict of "user precondition <=_inf computed precondition"; Holds when
    // the file gave no precondition and we only report the computed one.
    OrderVerdict verdict = OrderVerdict::Holds;
    std::optional<OrderDecision> implication;
    TransformResult transform;
    std::vector<NamedPredicate> predicates;  // every named assertion member
    std::string outline;                     // annotated listing
    std::optional<EmpiricalResult> cross_check;
};

struct VerifyResult {
    Outcome outcome = Outcome::Holds;
    std::string report;  // deterministic; what the CLI prints
    std::vector<ProofOutcome> proofs;
};

// Core runner over parsed declarations; `base_dir` anchors relative load
// paths. Errors (bad files, bad types, invalid invariants) escape as
// exceptions for the caller to render.
VerifyResult run_declarations(const DeclarationFile& file, const std::string& base_dir,
                              const VerifyOptions& opts = {});

// Front door: read, parse, run, and render any error into the report instead
// of throwing. The outcome carries what happened.
VerifyResult verify_file(const std::string& path, const VerifyOptions& opts = {});
VerifyResult verify_source(const std::string& source, const std::string& base_dir,
                           const VerifyOptions& opts = {});

// Runs the bundled case studies against their expected verdicts, plus a
// direct channel-level check that the error correction program restores the
// data qubit. Prints one line per entry; returns 0 iff everything matched.
int run_corpus(const std::string& corpus_dir, std::ostream& out);

}  // namespace nqv
