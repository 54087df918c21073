#include "nqv/wlp.hpp"

#include <map>
#include <sstream>

#include "nqv/semantics.hpp"

namespace nqv {

const char* rule_name(RuleTag r) {
    switch (r) {
        case RuleTag::Skip: return "Skip";
        case RuleTag::Abort: return "Abort";
        case RuleTag::Init: return "Init";
        case RuleTag::Unit: return "Unit";
        case RuleTag::Seq: return "Seq";
        case RuleTag::NDet: return "NDet";
        case RuleTag::Meas: return "Meas";
        case RuleTag::While: return "While";
        case RuleTag::Imp: return "Imp";
        case RuleTag::Union: return "Union";
    }
    return "?";
}

namespace {

class Transformer {
  public:
    Transformer(const OperatorEnv& env, const VarTuple& reg, bool liberal,
                const TransformOptions& opts)
        : env_(env), reg_(reg), liberal_(liberal), opts_(opts) {}

    TransformResult run(const ProgramNode& program, const Assertion& post) {
        TransformResult res;
        res.pre = visit(program, post.extended_to(reg_), {}, res);
        return res;
    }

  private:
    const OperatorEnv& env_;
    const VarTuple& reg_;
    const bool liberal_;
    const TransformOptions& opts_;
    std::map<std::vector<int>, std::size_t> step_index_;

    // A node under an if is visited once per postcondition member; its
    // annotation is the union of the per-member results, kept at one step
    // per program point so the outline stays a single pass.
    void record_step(std::vector<int> path, RuleTag tag, const Assertion& post,
                     const Assertion& pre, TransformResult& res) {
        auto it = step_index_.find(path);
        if (it == step_index_.end()) {
            step_index_.emplace(path, res.steps.size());
            res.steps.push_back(TransformStep{std::move(path), tag, post, pre});
            return;
        }
        TransformStep& step = res.steps[it->second];
        for (const auto& m : post.preds) insert_dedup(step.post.preds, m, opts_.dedup_tol);
        for (const auto& m : pre.preds) insert_dedup(step.pre.preds, m, opts_.dedup_tol);
    }

    void guard(const std::vector<Matrix>& preds, const SourceLoc& loc) const {
        if (preds.size() > opts_.cap)
            throw SetExplosionError("assertion set at " + loc.str() + " exceeds " +
                                    std::to_string(opts_.cap) + " members");
    }

    Assertion finish(std::vector<Matrix> preds, const SourceLoc& loc) const {
        guard(preds, loc);
        Assertion a(reg_, std::move(preds));
        a.check(opts_.tol);
        if (opts_.prune_each_step) a = prune(a, opts_.dedup_tol);
        return a;
    }

    Assertion visit(const ProgramNode& node, const Assertion& post, std::vector<int> path,
                    TransformResult& res) {
        Assertion pre(reg_, {Matrix::Zero(reg_.dim(), reg_.dim())});
        RuleTag tag = RuleTag::Skip;
        switch (node.kind) {
            case NodeKind::Skip:
                tag = RuleTag::Skip;
                pre = post;
                break;
            case NodeKind::Abort: {
                tag = RuleTag::Abort;
                const Matrix bound = liberal_ ? identity(reg_.dim())
                                              : Matrix(Matrix::Zero(reg_.dim(), reg_.dim()));
                pre = finish({bound}, node.loc);
                break;
            }
            case NodeKind::Init: {
                tag = RuleTag::Init;
                const SuperOperator reset = init_channel(node.vars, reg_);
                std::vector<Matrix> preds;
                for (const auto& m : post.preds)
                    insert_dedup(preds, apply_adjoint(reset, m, reg_), opts_.dedup_tol);
                pre = finish(std::move(preds), node.loc);
                break;
            }
            case NodeKind::Unitary: {
                tag = RuleTag::Unit;
                const Matrix u =
                    extend_matrix(*env_.resolve(node.op_name, node.loc).mat, node.vars, reg_);
                std::vector<Matrix> preds;
                for (const auto& m : post.preds)
                    insert_dedup(preds, Matrix(u.adjoint() * m * u), opts_.dedup_tol);
                pre = finish(std::move(preds), node.loc);
                break;
            }
            case NodeKind::Seq: {
                tag = RuleTag::Seq;
                Assertion cur = post;
                for (std::size_t i = node.children.size(); i-- > 0;) {
                    std::vector<int> child_path = path;
                    child_path.push_back(int(i));
                    cur = visit(node.children[i], cur, std::move(child_path), res);
                }
                pre = std::move(cur);
                break;
            }
            case NodeKind::NDet: {
                tag = RuleTag::NDet;
                std::vector<Matrix> preds;
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    std::vector<int> child_path = path;
                    child_path.push_back(int(i));
                    const Assertion branch =
                        visit(node.children[i], post, std::move(child_path), res);
                    for (const auto& m : branch.preds) insert_dedup(preds, m, opts_.dedup_tol);
                }
                pre = finish(std::move(preds), node.loc);
                break;
            }
            case NodeKind::If: {
                tag = RuleTag::Meas;
                const auto& meas = *env_.resolve(node.op_name, node.loc).meas;
                const Matrix p0 = extend_matrix(meas.first, node.vars, reg_);
                const Matrix p1 = extend_matrix(meas.second, node.vars, reg_);
                // Branch results combine only within the postcondition member they
                // came from; pairing across members would admit mixtures that no
                // single execution produces and weaken the precondition.
                std::vector<Matrix> preds;
                for (const auto& m : post.preds) {
                    const Assertion single(reg_, {m});
                    std::vector<int> then_path = path, else_path = path;
                    then_path.push_back(0);
                    else_path.push_back(1);
                    const Assertion then_pre =
                        visit(node.children[0], single, std::move(then_path), res);
                    const Assertion else_pre =
                        visit(node.children[1], single, std::move(else_path), res);
                    for (const auto& mt : then_pre.preds)
                        for (const auto& me : else_pre.preds) {
                            insert_dedup(preds, Matrix(p1 * mt * p1 + p0 * me * p0),
                                         opts_.dedup_tol);
                            guard(preds, node.loc);
                        }
                }
                pre = finish(std::move(preds), node.loc);
                break;
            }
            case NodeKind::While: {
                tag = RuleTag::While;
                if (!liberal_)
                    throw LoopPresentError("while statement at " + node.loc.str() +
                                           " has no weakest precondition; only the liberal "
                                           "transformer handles loops");
                pre = visit_while(node, post, path, res);
                break;
            }
        }
        record_step(std::move(path), tag, post, pre, res);
        return pre;
    }

    // P0(psi) + P1(theta), the combined exit/continue obligation.
    Assertion loop_mix(const Matrix& p0, const Matrix& p1, const Assertion& psi,
                       const Assertion& theta, const SourceLoc& loc) {
        std::vector<Matrix> preds;
        for (const auto& m : psi.preds)
            for (const auto& n : theta.preds) {
                insert_dedup(preds, Matrix(p0 * m * p0 + p1 * n * p1), opts_.dedup_tol);
                guard(preds, loc);
            }
        return finish(std::move(preds), loc);
    }

    Assertion visit_while(const ProgramNode& node, const Assertion& post,
                          const std::vector<int>& path, TransformResult& res) {
        if (!node.invariant)
            throw MissingInvariant("while statement at " + node.loc.str() +
                                   " carries no invariant annotation");
        const Assertion inv = bind_assertion(*node.invariant, env_, reg_, opts_.tol);
        const auto& meas = *env_.resolve(node.op_name, node.loc).meas;
        const Matrix p0 = extend_matrix(meas.first, node.vars, reg_);
        const Matrix p1 = extend_matrix(meas.second, node.vars, reg_);

        const Assertion body_post = loop_mix(p0, p1, post, inv, node.loc);
        std::vector<int> body_path = path;
        body_path.push_back(0);
        const Assertion body_pre = visit(node.children[0], body_post, std::move(body_path), res);

        OrderDecision dec = inf_le(inv, body_pre, opts_.order);
        bool seen = false;
        for (const auto& ic : res.invariants)
            if (ic.path == path) { seen = true; break; }
        if (!seen) res.invariants.push_back(InvariantCheck{path, dec});
        if (dec.verdict != OrderVerdict::Holds) {
            std::ostringstream msg;
            msg << "the invariant " << pretty(*node.invariant) << " annotated at "
                << node.invariant->loc.str() << " is not a valid loop invariant";
            if (dec.verdict == OrderVerdict::Inconclusive)
                msg << " (the order check was inconclusive after "
                    << (dec.targets.empty() ? 0 : dec.targets.front().iterations)
                    << " iterations)";
            throw InvalidInvariant(msg.str(), std::move(dec), path);
        }
        return body_post;
    }
};

}  // namespace

TransformResult wlp(const ProgramNode& program, const Assertion& post, const OperatorEnv& env,
                    const VarTuple& reg, const TransformOptions& opts) {
    return Transformer(env, reg, true, opts).run(program, post);
}

TransformResult wp_loopfree(const ProgramNode& program, const Assertion& post,
                            const OperatorEnv& env, const VarTuple& reg,
                            const TransformOptions& opts) {
    return Transformer(env, reg, false, opts).run(program, post);
}

OrderDecision check_invariant(const Assertion& inv, const ProgramNode& while_node,
                              const Assertion& post, const OperatorEnv& env, const VarTuple& reg,
                              const TransformOptions& opts) {
    if (while_node.kind != NodeKind::While)
        throw ValidationError("check_invariant expects a while statement");
    const auto& meas = *env.resolve(while_node.op_name, while_node.loc).meas;
    const Matrix p0 = extend_matrix(meas.first, while_node.vars, reg);
    const Matrix p1 = extend_matrix(meas.second, while_node.vars, reg);

    const Assertion inv_ext = inv.extended_to(reg);
    const Assertion post_ext = post.extended_to(reg);
    std::vector<Matrix> preds;
    for (const auto& m : post_ext.preds)
        for (const auto& n : inv_ext.preds)
            insert_dedup(preds, Matrix(p0 * m * p0 + p1 * n * p1), opts.dedup_tol);
    Assertion body_post(reg, std::move(preds));
    body_post.check(opts.tol);
    if (opts.prune_each_step) body_post = prune(body_post, opts.dedup_tol);

    TransformResult body = wlp(while_node.children[0], body_post, env, reg, opts);
    return inf_le(inv_ext, body.pre, opts.order);
}

}  // namespace nqv
