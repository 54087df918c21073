#include "nqv/ast.hpp"

#include <algorithm>
#include <sstream>

namespace nqv {

ProgramNode ProgramNode::skip(SourceLoc loc) {
    ProgramNode n;
    n.kind = NodeKind::Skip;
    n.loc = loc;
    return n;
}

ProgramNode ProgramNode::abort(SourceLoc loc) {
    ProgramNode n;
    n.kind = NodeKind::Abort;
    n.loc = loc;
    return n;
}

ProgramNode ProgramNode::init(VarTuple vars, SourceLoc loc) {
    ProgramNode n;
    n.kind = NodeKind::Init;
    n.vars = std::move(vars);
    n.loc = loc;
    return n;
}

ProgramNode ProgramNode::unitary(VarTuple vars, std::string op, SourceLoc loc) {
    ProgramNode n;
    n.kind = NodeKind::Unitary;
    n.vars = std::move(vars);
    n.op_name = std::move(op);
    n.loc = loc;
    return n;
}

ProgramNode ProgramNode::seq(std::vector<ProgramNode> stmts) {
    std::vector<ProgramNode> flat;
    for (auto& s : stmts) {
        if (s.kind == NodeKind::Seq)
            for (auto& c : s.children) flat.push_back(std::move(c));
        else
            flat.push_back(std::move(s));
    }
    if (flat.size() == 1) return std::move(flat.front());
    ProgramNode n;
    n.kind = NodeKind::Seq;
    if (!flat.empty()) n.loc = flat.front().loc;
    n.children = std::move(flat);
    return n;
}

ProgramNode ProgramNode::ndet(std::vector<ProgramNode> branches) {
    std::vector<ProgramNode> flat;
    for (auto& b : branches) {
        if (b.kind == NodeKind::NDet)
            for (auto& c : b.children) flat.push_back(std::move(c));
        else
            flat.push_back(std::move(b));
    }
    if (flat.size() == 1) return std::move(flat.front());
    ProgramNode n;
    n.kind = NodeKind::NDet;
    if (!flat.empty()) n.loc = flat.front().loc;
    n.children = std::move(flat);
    return n;
}

ProgramNode ProgramNode::if_then_else(std::string op, VarTuple vars, ProgramNode then_branch,
                                      ProgramNode else_branch, SourceLoc loc) {
    ProgramNode n;
    n.kind = NodeKind::If;
    n.op_name = std::move(op);
    n.vars = std::move(vars);
    n.loc = loc;
    n.children.push_back(std::move(then_branch));
    n.children.push_back(std::move(else_branch));
    return n;
}

ProgramNode ProgramNode::while_loop(std::string op, VarTuple vars, ProgramNode body,
                                    std::optional<AssertionExpr> invariant, SourceLoc loc) {
    ProgramNode n;
    n.kind = NodeKind::While;
    n.op_name = std::move(op);
    n.vars = std::move(vars);
    n.loc = loc;
    n.children.push_back(std::move(body));
    n.invariant = std::move(invariant);
    return n;
}

namespace {

bool terms_equal(const AssertionExpr& a, const AssertionExpr& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (a.terms[i].name != b.terms[i].name || !(a.terms[i].vars == b.terms[i].vars))
            return false;
    return true;
}

}  // namespace

bool ProgramNode::operator==(const ProgramNode& other) const {
    if (kind != other.kind || !(vars == other.vars) || op_name != other.op_name)
        return false;
    if (invariant.has_value() != other.invariant.has_value()) return false;
    if (invariant && !terms_equal(*invariant, *other.invariant)) return false;
    return children == other.children;
}

bool ProgramNode::contains_while() const {
    if (kind == NodeKind::While) return true;
    for (const auto& c : children)
        if (c.contains_while()) return true;
    return false;
}

namespace {

void collect_vars(const ProgramNode& node, std::vector<std::string>& acc) {
    for (const auto& v : node.vars)
        if (std::find(acc.begin(), acc.end(), v) == acc.end()) acc.push_back(v);
    for (const auto& c : node.children) collect_vars(c, acc);
}

}  // namespace

VarTuple free_vars(const ProgramNode& node) {
    std::vector<std::string> acc;
    collect_vars(node, acc);
    return VarTuple(std::move(acc));
}

namespace {

std::string spaces(int n) { return std::string(std::size_t(n), ' '); }

std::string pretty_inv(const AssertionExpr& a) {
    std::ostringstream out;
    out << "{ inv: ";
    for (const auto& t : a.terms) out << t.name << "[" << t.vars.str() << "] ";
    out << "}";
    return out.str();
}

void print_node(std::ostream& out, const ProgramNode& node, int indent) {
    const std::string ind = spaces(indent);
    switch (node.kind) {
        case NodeKind::Skip:
            out << ind << "skip";
            break;
        case NodeKind::Abort:
            out << ind << "abort";
            break;
        case NodeKind::Init:
            out << ind << "[" << node.vars.str() << "] :=0";
            break;
        case NodeKind::Unitary:
            out << ind << "[" << node.vars.str() << "] *= " << node.op_name;
            break;
        case NodeKind::Seq:
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (i) out << ";\n";
                print_node(out, node.children[i], indent);
            }
            break;
        case NodeKind::NDet:
            out << ind << "(\n";
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (i) out << "\n" << ind << "#\n";
                print_node(out, node.children[i], indent + 2);
            }
            out << "\n" << ind << ")";
            break;
        case NodeKind::If:
            out << ind << "if " << node.op_name << "[" << node.vars.str() << "] then\n";
            print_node(out, node.children[0], indent + 2);
            if (node.children[1].kind != NodeKind::Skip) {
                out << "\n" << ind << "else\n";
                print_node(out, node.children[1], indent + 2);
            }
            out << "\n" << ind << "end";
            break;
        case NodeKind::While:
            if (node.invariant) out << ind << pretty_inv(*node.invariant) << ";\n";
            out << ind << "while " << node.op_name << "[" << node.vars.str() << "] do\n";
            print_node(out, node.children[0], indent + 2);
            out << "\n" << ind << "end";
            break;
    }
}

}  // namespace

std::string pretty(const ProgramNode& node, int indent) {
    std::ostringstream out;
    print_node(out, node, indent);
    return out.str();
}

std::string pretty(const AssertionExpr& a) {
    std::ostringstream out;
    out << "{ ";
    for (const auto& t : a.terms) out << t.name << "[" << t.vars.str() << "] ";
    out << "}";
    return out.str();
}

std::string pretty(const DeclarationFile& f) {
    std::ostringstream out;
    for (const auto& d : f.decls) {
        if (const auto* load = std::get_if<LoadDecl>(&d)) {
            out << "def " << load->name << " := load \"" << load->path << "\" end\n";
        } else if (const auto* proof = std::get_if<ProofDecl>(&d)) {
            out << "def " << proof->name << " := proof [" << proof->reg.str() << "] :\n";
            if (proof->pre) out << "  " << pretty(*proof->pre) << ";\n";
            out << pretty(proof->body, 2) << ";\n";
            out << "  " << pretty(proof->post) << "\n";
            out << "end\n";
        } else if (const auto* show = std::get_if<ShowCmd>(&d)) {
            out << "show " << show->name << " end\n";
        }
    }
    return out.str();
}

}  // namespace nqv
