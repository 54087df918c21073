#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nqv/linalg.hpp"

namespace nqv {

struct SourceLoc {
    int line = 0;
    int column = 0;
    std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

// One `name[vars]` term of a written assertion.
struct AssertionTerm {
    std::string name;
    VarTuple vars;
    SourceLoc loc;
};

// A written assertion `{ t1 t2 ... }`.
struct AssertionExpr {
    std::vector<AssertionTerm> terms;
    SourceLoc loc;
};

enum class NodeKind { Skip, Abort, Init, Unitary, Seq, NDet, If, While };

// Program statements. Sequences and nondeterministic choices are kept n-ary
// and flattened, so nesting order of the source never shows in the tree.
struct ProgramNode {
    NodeKind kind = NodeKind::Skip;
    SourceLoc loc;

    VarTuple vars;        // Init: target tuple; Unitary/If/While: operand tuple
    std::string op_name;  // Unitary: gate; If/While: measurement

    // Seq/NDet: all children; If: {then, else}; While: {body}
    std::vector<ProgramNode> children;

    std::optional<AssertionExpr> invariant;  // While only

    static ProgramNode skip(SourceLoc loc = {});
    static ProgramNode abort(SourceLoc loc = {});
    static ProgramNode init(VarTuple vars, SourceLoc loc = {});
    static ProgramNode unitary(VarTuple vars, std::string op, SourceLoc loc = {});
    static ProgramNode seq(std::vector<ProgramNode> stmts);
    static ProgramNode ndet(std::vector<ProgramNode> branches);
    static ProgramNode if_then_else(std::string op, VarTuple vars, ProgramNode then_branch,
                                    ProgramNode else_branch, SourceLoc loc = {});
    static ProgramNode while_loop(std::string op, VarTuple vars, ProgramNode body,
                                  std::optional<AssertionExpr> invariant, SourceLoc loc = {});

    bool operator==(const ProgramNode& other) const;
    bool contains_while() const;
};

// Variables a statement touches, in first-appearance order.
VarTuple free_vars(const ProgramNode& node);

// Top-level declarations ------------------------------------------------------

struct LoadDecl {
    std::string name;
    std::string path;
    SourceLoc loc;
};

struct ProofDecl {
    std::string name;
    VarTuple reg;
    std::optional<AssertionExpr> pre;
    ProgramNode body;
    AssertionExpr post;
    SourceLoc loc;
};

struct ShowCmd {
    std::string name;
    SourceLoc loc;
};

using Declaration = std::variant<LoadDecl, ProofDecl, ShowCmd>;

struct DeclarationFile {
    std::vector<Declaration> decls;
};

// Pretty printing -------------------------------------------------------------

std::string pretty(const ProgramNode& node, int indent = 0);
std::string pretty(const AssertionExpr& a);
std::string pretty(const DeclarationFile& f);

}  // namespace nqv
