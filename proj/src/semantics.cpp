#include "nqv/semantics.hpp"

#include <random>

namespace nqv {

namespace {

void insert_channel(SemanticsSet& set, SuperOperator e, const SemanticsOptions& opts,
                    const SourceLoc& loc) {
    for (const auto& have : set.elems)
        if (channel_equal(have, e, opts.dedup_tol)) return;
    if (set.elems.size() >= opts.cap) {
        if (opts.allow_truncation) {
            set.truncated = true;
            return;
        }
        throw SetExplosionError("denotation at " + loc.str() + " exceeds " +
                                std::to_string(opts.cap) + " channels");
    }
    set.elems.push_back(std::move(e));
}

}  // namespace

SuperOperator skip_channel(const VarTuple& reg) {
    return SuperOperator(reg, {identity(reg.dim())});
}

SuperOperator abort_channel(const VarTuple& reg) {
    return SuperOperator(reg, {Matrix::Zero(reg.dim(), reg.dim())});
}

SuperOperator init_channel(const VarTuple& targets, const VarTuple& reg) {
    // rho |-> sum_i |0><i| rho |i><0| on the target tuple.
    const Eigen::Index d = targets.dim();
    std::vector<Matrix> kraus;
    kraus.reserve(std::size_t(d));
    for (Eigen::Index i = 0; i < d; ++i)
        kraus.push_back(basis_ket(0, d) * basis_ket(i, d).adjoint());
    return extend(SuperOperator(targets, std::move(kraus)), reg);
}

SuperOperator unitary_channel(const Matrix& u, const VarTuple& on, const VarTuple& reg) {
    return extend(SuperOperator(on, {u}), reg);
}

SuperOperator projector_channel(const Matrix& p, const VarTuple& on, const VarTuple& reg) {
    return extend(SuperOperator(on, {p}), reg);
}

namespace {

SemanticsSet denote_rec(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                        int depth, bool bounded, const SemanticsOptions& opts) {
    SemanticsSet out;
    out.vars = reg;
    switch (node.kind) {
        case NodeKind::Skip:
            out.elems.push_back(skip_channel(reg));
            break;
        case NodeKind::Abort:
            out.elems.push_back(abort_channel(reg));
            break;
        case NodeKind::Init:
            out.elems.push_back(init_channel(node.vars, reg));
            break;
        case NodeKind::Unitary:
            out.elems.push_back(
                unitary_channel(*env.resolve(node.op_name, node.loc).mat, node.vars, reg));
            break;
        case NodeKind::Seq: {
            out.elems.push_back(skip_channel(reg));
            for (const auto& stmt : node.children) {
                const SemanticsSet step = denote_rec(stmt, env, reg, depth, bounded, opts);
                SemanticsSet next;
                next.vars = reg;
                next.truncated = out.truncated || step.truncated;
                for (const auto& done : out.elems)
                    for (const auto& e : step.elems)
                        insert_channel(next, compose(e, done), opts, node.loc);
                out = std::move(next);
            }
            break;
        }
        case NodeKind::NDet:
            for (const auto& branch : node.children) {
                const SemanticsSet bs = denote_rec(branch, env, reg, depth, bounded, opts);
                out.truncated = out.truncated || bs.truncated;
                for (const auto& e : bs.elems) insert_channel(out, e, opts, node.loc);
            }
            break;
        case NodeKind::If: {
            const auto& meas = *env.resolve(node.op_name, node.loc).meas;
            const SuperOperator p0 = projector_channel(meas.first, node.vars, reg);
            const SuperOperator p1 = projector_channel(meas.second, node.vars, reg);
            const SemanticsSet then_set =
                denote_rec(node.children[0], env, reg, depth, bounded, opts);
            const SemanticsSet else_set =
                denote_rec(node.children[1], env, reg, depth, bounded, opts);
            out.truncated = then_set.truncated || else_set.truncated;
            for (const auto& ft : then_set.elems)
                for (const auto& fe : else_set.elems)
                    insert_channel(out, add(compose(ft, p1), compose(fe, p0)), opts, node.loc);
            break;
        }
        case NodeKind::While: {
            if (!bounded)
                throw LoopPresentError("while statement at " + node.loc.str() +
                                       " has no finite denotation; use bounded unrolling");
            const auto& meas = *env.resolve(node.op_name, node.loc).meas;
            const SuperOperator exit = projector_channel(meas.first, node.vars, reg);
            const SuperOperator enter = projector_channel(meas.second, node.vars, reg);
            const SemanticsSet body = denote_rec(node.children[0], env, reg, depth, bounded, opts);
            out.truncated = body.truncated;
            // level k holds every k-round unrolling; the recursion adds one
            // leading round per level.
            SemanticsSet level;
            level.vars = reg;
            level.elems.push_back(exit);
            for (int k = 0; k < depth; ++k) {
                SemanticsSet next;
                next.vars = reg;
                next.truncated = level.truncated;
                for (const auto& e : body.elems)
                    for (const auto& f : level.elems)
                        insert_channel(next, add(exit, compose(f, compose(e, enter))), opts,
                                       node.loc);
                level = std::move(next);
            }
            out.elems = std::move(level.elems);
            out.truncated = out.truncated || level.truncated;
            break;
        }
    }
    return out;
}

}  // namespace

SemanticsSet denote_loopfree(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                             const SemanticsOptions& opts) {
    return denote_rec(node, env, reg, 0, false, opts);
}

SemanticsSet denote_bounded(const ProgramNode& node, const OperatorEnv& env, const VarTuple& reg,
                            int depth, const SemanticsOptions& opts) {
    return denote_rec(node, env, reg, depth, true, opts);
}

SuperOperator bounded_loop_channel(const ProgramNode& while_node, const OperatorEnv& env,
                                   const VarTuple& reg, const std::vector<SuperOperator>& body,
                                   const std::vector<std::size_t>& scheduler) {
    const auto& meas = *env.resolve(while_node.op_name, while_node.loc).meas;
    const SuperOperator exit = projector_channel(meas.first, while_node.vars, reg);
    const SuperOperator enter = projector_channel(meas.second, while_node.vars, reg);
    SuperOperator f = exit;
    for (std::size_t i = scheduler.size(); i-- > 0;) {
        const SuperOperator& round = body.at(scheduler[i]);
        f = add(exit, compose(f, compose(round, enter)));
    }
    return f;
}

std::vector<Matrix> sample_states(Eigen::Index dim, int count, std::uint64_t seed) {
    std::vector<Matrix> states;
    states.reserve(std::size_t(count));
    for (Eigen::Index i = 0; i < dim && int(states.size()) < count; ++i) {
        const Vector e = basis_ket(i, dim);
        states.push_back(e * e.adjoint());
    }
    if (int(states.size()) < count)
        states.push_back(Matrix::Identity(dim, dim) / double(dim));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto haar_ket = [&] {
        Vector v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
        v.normalize();
        return v;
    };
    while (int(states.size()) < count) {
        if (states.size() % 2 == 0) {
            const Vector v = haar_ket();
            states.push_back(v * v.adjoint());
        } else {
            // Sub-normalized mixture of a few pure states.
            Matrix rho = Matrix::Zero(dim, dim);
            double total = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double w = unif(rng);
                const Vector v = haar_ket();
                rho += w * (v * v.adjoint());
                total += w;
            }
            rho *= unif(rng) / total;  // random trace in (0, 1)
            states.push_back(std::move(rho));
        }
    }
    return states;
}

EmpiricalResult check_formula_empirical(const Assertion& pre, const ProgramNode& program,
                                        const Assertion& post, const OperatorEnv& env,
                                        const VarTuple& reg, Mode mode, int depth, int samples,
                                        std::uint64_t seed, const SemanticsOptions& opts) {
    constexpr double kSlack = 1e-7;
    const SemanticsSet sem = program.contains_while()
                                 ? denote_bounded(program, env, reg, depth, opts)
                                 : denote_loopfree(program, env, reg, opts);
    const Assertion pre_ext = pre.extended_to(reg);
    const Assertion post_ext = post.extended_to(reg);

    EmpiricalResult res;
    const std::vector<Matrix> states = sample_states(reg.dim(), samples, seed);
    for (int si = 0; si < int(states.size()); ++si) {
        const Matrix& rho = states[std::size_t(si)];
        const double lhs = expectation(rho, reg, pre_ext);
        for (int ci = 0; ci < int(sem.elems.size()); ++ci) {
            Matrix sigma = Matrix::Zero(reg.dim(), reg.dim());
            for (const auto& k : sem.elems[std::size_t(ci)].kraus)
                sigma += k * rho * k.adjoint();
            double rhs = expectation(sigma, reg, post_ext);
            if (mode == Mode::Partial)
                rhs += rho.trace().real() - sigma.trace().real();
            if (lhs > rhs + kSlack) {
                res.violated = true;
                res.witness = Counterexample{rho, std::move(sigma), si, ci, lhs, rhs};
                res.samples_run = si + 1;
                return res;
            }
        }
    }
    res.samples_run = int(states.size());
    return res;
}

}  // namespace nqv
