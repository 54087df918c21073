#include "nqv/outline.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace nqv {

PredicateNamer::PredicateNamer(VarTuple reg, double match_tol)
    : reg_(std::move(reg)), match_tol_(match_tol) {}

void PredicateNamer::add_source_term(const std::string& name, const VarTuple& vars,
                                     const Matrix& natural) {
    for (const auto& e : entries_)
        if (!e.generated && e.name == name && e.display_vars == vars) return;
    entries_.push_back(NamedPredicate{name, vars, extend_matrix(natural, vars, reg_), false});
}

void PredicateNamer::add_proof_terms(const ProofDecl& proof, const OperatorEnv& env) {
    const auto add_expr = [&](const AssertionExpr& expr) {
        for (const auto& t : expr.terms) {
            const OperatorDef* def = env.find(t.name);
            if (!def || def->builtin || def->is_measurement()) continue;
            add_source_term(t.name, t.vars, *def->mat);
        }
    };
    if (proof.pre) add_expr(*proof.pre);
    add_expr(proof.post);
    const std::function<void(const ProgramNode&)> walk = [&](const ProgramNode& n) {
        if (n.kind == NodeKind::While && n.invariant) add_expr(*n.invariant);
        for (const auto& c : n.children) walk(c);
    };
    walk(proof.body);
}

const NamedPredicate& PredicateNamer::name_for(const Matrix& full) {
    for (const auto& e : entries_)
        if (approx_equal(e.full, full, match_tol_)) return e;
    std::string name = "VAR" + std::to_string(next_var_++);
    while (find(name)) name = "VAR" + std::to_string(next_var_++);
    entries_.push_back(NamedPredicate{std::move(name), reg_, full, true});
    return entries_.back();
}

void PredicateNamer::scan(const TransformResult& result) {
    for (const auto& step : result.steps)
        for (const auto& m : step.pre.preds) name_for(m);
}

std::string PredicateNamer::render(const Assertion& a) {
    std::ostringstream out;
    out << "{ ";
    for (const auto& m : a.preds) {
        const NamedPredicate& e = name_for(m);
        out << e.name << "[" << e.display_vars.str() << "] ";
    }
    out << "}";
    return out.str();
}

const NamedPredicate* PredicateNamer::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

namespace {

std::string format_double(double v) {
    if (v == 0.0) return "0";
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

std::string format_complex(const Complex& z) {
    const bool re0 = z.real() == 0.0, im0 = z.imag() == 0.0;
    if (re0 && im0) return "0";
    if (im0) return format_double(z.real());
    if (re0) return format_double(z.imag()) + "i";
    return format_double(z.real()) + (z.imag() > 0 ? "+" : "") + format_double(z.imag()) + "i";
}

}  // namespace

std::string format_matrix(const Matrix& m) {
    std::ostringstream out;
    out << "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << (r ? " [" : "[");
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ", ";
            out << format_complex(m(r, c));
        }
        out << "]";
        if (r + 1 < m.rows()) out << ",\n";
    }
    out << "]";
    return out.str();
}

std::string format_weights(const Eigen::VectorXd& v) {
    std::ostringstream out;
    out << "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out << ", ";
        out << format_double(v(i));
    }
    out << ")";
    return out.str();
}

namespace {

class OutlineRenderer {
  public:
    OutlineRenderer(const TransformResult& result, PredicateNamer& namer) : namer_(namer) {
        for (std::size_t i = 0; i < result.steps.size(); ++i)
            by_path_[result.steps[i].path] = &result.steps[i];
    }

    void render(std::ostream& out, const ProgramNode& node, std::vector<int> path, int indent) {
        const std::string ind(std::size_t(indent), ' ');
        switch (node.kind) {
            case NodeKind::Seq:
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (i) out << ";\n";
                    std::vector<int> p = path;
                    p.push_back(int(i));
                    render(out, node.children[i], std::move(p), indent);
                }
                break;
            case NodeKind::Skip:
            case NodeKind::Abort:
            case NodeKind::Init:
            case NodeKind::Unitary:
                out << ind << annotation(path) << "; " << pretty(node, 0);
                break;
            case NodeKind::NDet: {
                out << ind << annotation(path) << ";\n" << ind << "(\n";
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    if (i) out << "\n" << ind << "#\n";
                    std::vector<int> p = path;
                    p.push_back(int(i));
                    render(out, node.children[i], std::move(p), indent + 2);
                }
                out << "\n" << ind << ")";
                break;
            }
            case NodeKind::If: {
                out << ind << annotation(path) << ";\n";
                out << ind << "if " << node.op_name << "[" << node.vars.str() << "] then\n";
                std::vector<int> tp = path, ep = path;
                tp.push_back(0);
                ep.push_back(1);
                render(out, node.children[0], std::move(tp), indent + 2);
                out << "\n" << ind << "else\n";
                render(out, node.children[1], std::move(ep), indent + 2);
                out << "\n" << ind << "end";
                break;
            }
            case NodeKind::While: {
                out << ind << annotation(path) << ";\n";
                if (node.invariant)
                    out << ind << "{ inv: " << terms_of(*node.invariant) << "};\n";
                out << ind << "while " << node.op_name << "[" << node.vars.str() << "] do\n";
                std::vector<int> bp = path;
                bp.push_back(0);
                render(out, node.children[0], std::move(bp), indent + 2);
                out << "\n" << ind << "end";
                break;
            }
        }
    }

  private:
    PredicateNamer& namer_;
    std::map<std::vector<int>, const TransformStep*> by_path_;

    std::string annotation(const std::vector<int>& path) {
        auto it = by_path_.find(path);
        if (it == by_path_.end()) return "{ ? }";
        return namer_.render(it->second->pre);
    }

    static std::string terms_of(const AssertionExpr& a) {
        std::ostringstream out;
        for (const auto& t : a.terms) out << t.name << "[" << t.vars.str() << "] ";
        return out.str();
    }
};

}  // namespace

std::string render_outline(const ProofDecl& proof, const TransformResult& result,
                           PredicateNamer& namer) {
    std::ostringstream out;
    out << "proof [" << proof.reg.str() << "] :\n";
    if (proof.pre) out << "  " << pretty(*proof.pre) << ";\n";
    OutlineRenderer renderer(result, namer);
    renderer.render(out, proof.body, {}, 2);
    out << ";\n";
    out << "  " << pretty(proof.post) << "\n";
    out << "end";
    return out.str();
}

}  // namespace nqv
