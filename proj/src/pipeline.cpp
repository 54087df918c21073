#include "nqv/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "nqv/parser.hpp"
#include "nqv/qmat.hpp"

namespace nqv {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

int qubits_of(Eigen::Index dim) {
    int n = 0;
    while ((Eigen::Index(1) << n) < dim) ++n;
    return n;
}

const char* kind_str(const OperatorDef& def) {
    if (def.is_measurement()) return "measurement";
    Matrix u = *def.mat;
    if (approx_equal(Matrix(u.adjoint() * u), identity(u.rows()), 1e-9)) return "unitary";
    return "hermitian";
}

std::string format_scalar(double v) {
    if (v == 0.0) return "0";
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

// Per-target report lines for an order decision, using `namer` to refer to
// the right-hand members by their display names.
void report_decision(std::ostringstream& out, const OrderDecision& dec, const Assertion& rhs,
                     PredicateNamer& namer) {
    for (std::size_t i = 0; i < dec.targets.size(); ++i) {
        const TargetReport& t = dec.targets[i];
        const NamedPredicate& n = namer.name_for(rhs.preds[i]);
        out << "  " << n.name << "[" << n.display_vars.str() << "]: ";
        switch (t.verdict) {
            case OrderVerdict::Holds:
                out << "holds, lambda = " << format_weights(t.holds->lambda)
                    << ", residual = " << format_scalar(t.holds->residual) << "\n";
                break;
            case OrderVerdict::Fails:
                out << "refuted, margin = " << format_scalar(t.fails->margin) << "\n";
                out << "  witness state:\n" << format_matrix(t.fails->rho) << "\n";
                break;
            case OrderVerdict::Inconclusive:
                out << "undecided after " << t.iterations << " iterations, bracket ["
                    << format_scalar(t.lower) << ", " << format_scalar(t.upper) << "]\n";
                break;
        }
    }
}

class Session {
  public:
    Session(const std::string& base_dir, const VerifyOptions& opts)
        : base_dir_(base_dir), opts_(opts), env_(OperatorEnv::with_builtins()) {}

    VerifyResult run(const DeclarationFile& file) {
        for (const auto& decl : file.decls) {
            if (const auto* load = std::get_if<LoadDecl>(&decl))
                run_load(*load);
            else if (const auto* proof = std::get_if<ProofDecl>(&decl))
                run_proof(*proof);
            else
                run_show(std::get<ShowCmd>(decl));
        }
        result_.outcome = fails_seen_ ? Outcome::Fails
                          : inconclusive_seen_ ? Outcome::Inconclusive
                                               : Outcome::Holds;
        result_.report = report_.str();
        return std::move(result_);
    }

  private:
    std::string base_dir_;
    VerifyOptions opts_;
    OperatorEnv env_;
    VerifyResult result_;
    std::ostringstream report_;
    bool fails_seen_ = false;
    bool inconclusive_seen_ = false;
    std::map<std::string, NamedPredicate> generated_;  // VARk of completed proofs

    void run_load(const LoadDecl& load) {
        QmatFile file = load_qmat(resolve_path(base_dir_, load.path), opts_.tol);
        OperatorDef def = to_operator_def(std::move(file));
        const int n = qubits_of(def.dim());
        report_ << "loaded " << load.name << " (" << kind_str(def) << ", " << n
                << (n == 1 ? " qubit" : " qubits") << ")\n";
        env_.define(load.name, std::move(def), load.loc);
    }

    void run_proof(const ProofDecl& proof) {
        CheckedProof cp = typecheck(proof, env_, opts_.tol);

        TransformOptions topts;
        topts.cap = opts_.cap;
        topts.order = OrderParams{opts_.epsilon, opts_.max_iters};
        topts.tol = opts_.tol;
        TransformResult tr = opts_.mode == Mode::Total
                                 ? wp_loopfree(cp.body, cp.post, env_, cp.reg, topts)
                                 : wlp(cp.body, cp.post, env_, cp.reg, topts);

        PredicateNamer namer(cp.reg);
        namer.add_proof_terms(proof, env_);
        namer.scan(tr);

        ProofOutcome po;
        po.name = proof.name;
        po.has_user_pre = cp.pre.has_value();
        po.transform = tr;

        if (cp.pre) {
            OrderDecision dec = inf_le(*cp.pre, tr.pre, topts.order);
            po.verdict = dec.verdict;
            report_ << "proof " << proof.name << " [" << cp.reg.str()
                    << "]: " << verdict_name(dec.verdict) << "\n";
            report_ << "  " << pretty(*proof.pre) << " <=_inf " << namer.render(tr.pre) << "\n";
            report_decision(report_, dec, tr.pre, namer);
            po.implication = std::move(dec);
        } else {
            po.verdict = OrderVerdict::Holds;
            report_ << "proof " << proof.name << " [" << cp.reg.str()
                    << "]: precondition computed\n";
            report_ << "  wlp = " << namer.render(tr.pre) << "\n";
        }
        for (std::size_t i = 0; i < tr.invariants.size(); ++i)
            report_ << "  loop invariant verified\n";

        if (opts_.oracle_depth > 0 && cp.pre && po.verdict == OrderVerdict::Holds) {
            SemanticsOptions sopts;
            sopts.cap = opts_.cap;
            EmpiricalResult er = check_formula_empirical(
                *cp.pre, cp.body, cp.post, env_, cp.reg, opts_.mode, opts_.oracle_depth,
                opts_.oracle_samples, opts_.seed, sopts);
            report_ << "  cross-check (depth " << opts_.oracle_depth << "): " << er.samples_run
                    << " states, ";
            if (er.violated) {
                report_ << "VIOLATION at sample " << er.witness->sample_index << ", channel "
                        << er.witness->channel_index << "\n";
                throw InternalCertificateError(
                    "proof " + proof.name +
                    " was accepted but the state-level cross-check found a violation");
            }
            report_ << "no violation found\n";
            po.cross_check = std::move(er);
        }

        po.outline = render_outline(proof, tr, namer);
        po.predicates = namer.entries();

        if (!opts_.save_dir.empty()) {
            std::filesystem::create_directories(opts_.save_dir);
            for (const auto& e : po.predicates)
                if (e.generated)
                    save_qmat_json(
                        (std::filesystem::path(opts_.save_dir) / (proof.name + "_" + e.name + ".json"))
                            .string(),
                        QmatKind::Hermitian, e.full);
        }

        if (po.verdict == OrderVerdict::Fails) fails_seen_ = true;
        if (po.verdict == OrderVerdict::Inconclusive) inconclusive_seen_ = true;
        for (const auto& e : po.predicates)
            if (e.generated) generated_[e.name] = e;
        result_.proofs.push_back(std::move(po));
    }

    void run_show(const ShowCmd& show) {
        report_ << "show " << show.name << ":\n";
        for (const auto& po : result_.proofs)
            if (po.name == show.name) {
                report_ << po.outline << "\n";
                return;
            }
        if (const OperatorDef* def = env_.find(show.name)) {
            if (def->is_measurement()) {
                report_ << "outcome 0:\n" << format_matrix(def->meas->first) << "\n";
                report_ << "outcome 1:\n" << format_matrix(def->meas->second) << "\n";
            } else {
                report_ << format_matrix(*def->mat) << "\n";
            }
            return;
        }
        const auto it = generated_.find(show.name);
        if (it != generated_.end()) {
            report_ << format_matrix(it->second.full) << "\n";
            return;
        }
        throw UnknownName("show at " + show.loc.str() + ": '" + show.name + "' is not defined");
    }
};

}  // namespace

VerifyResult run_declarations(const DeclarationFile& file, const std::string& base_dir,
                              const VerifyOptions& opts) {
    return Session(base_dir, opts).run(file);
}

VerifyResult verify_source(const std::string& source, const std::string& base_dir,
                           const VerifyOptions& opts) {
    try {
        return run_declarations(parse(source), base_dir, opts);
    } catch (const InvalidInvariant& e) {
        VerifyResult res;
        res.outcome = e.decision.verdict == OrderVerdict::Inconclusive ? Outcome::Inconclusive
                                                                       : Outcome::Error;
        res.report = std::string("error: ") + e.what() + "\n";
        return res;
    } catch (const VerifierError& e) {
        VerifyResult res;
        res.outcome = Outcome::Error;
        res.report = std::string("error: ") + e.what() + "\n";
        return res;
    }
}

VerifyResult verify_file(const std::string& path, const VerifyOptions& opts) {
    std::string source;
    try {
        source = read_file(path);
    } catch (const VerifierError& e) {
        VerifyResult res;
        res.outcome = Outcome::Error;
        res.report = std::string("error: ") + e.what() + "\n";
        return res;
    }
    return verify_source(source, std::filesystem::path(path).parent_path().string(), opts);
}

namespace {

// Channel-level spot check: every run of the error correction program must
// hand the data qubit back unchanged. Feeds |+> through all channels of the
// denotation and compares reduced states.
bool errcorr_channels_ok(const std::string& corpus_dir, std::string& detail) {
    const std::string path = corpus_dir + "/errcorr.nqpv";
    DeclarationFile file = parse(read_file(path));
    OperatorEnv env = OperatorEnv::with_builtins();
    const ProofDecl* proof = nullptr;
    for (const auto& decl : file.decls) {
        if (const auto* load = std::get_if<LoadDecl>(&decl))
            env.define(load->name, to_operator_def(load_qmat(resolve_path(corpus_dir, load->path))));
        else if (const auto* p = std::get_if<ProofDecl>(&decl)) {
            proof = p;
            break;
        }
    }
    if (!proof) {
        detail = "no proof declaration found";
        return false;
    }
    SemanticsSet sem = denote_loopfree(proof->body, env, proof->reg);
    if (sem.elems.size() != 4) {
        detail = "expected 4 channels, got " + std::to_string(sem.elems.size());
        return false;
    }

    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const Matrix data = plus * plus.adjoint();
    Matrix rho = Matrix::Zero(8, 8);
    // data qubit is the leading factor of the register, ancillas start at |00>
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) rho(r * 4, c * 4) = data(r, c);

    const VarTuple keep({proof->reg.names().front()});
    for (std::size_t i = 0; i < sem.elems.size(); ++i) {
        const Matrix out = apply_matrix(sem.elems[i], rho, proof->reg);
        const Matrix reduced = partial_trace_matrix(out, proof->reg, keep);
        if (!approx_equal(reduced, data, 1e-10)) {
            detail = "channel " + std::to_string(i) + " altered the data qubit";
            return false;
        }
    }
    return true;
}

}  // namespace

int run_corpus(const std::string& corpus_dir, std::ostream& out) {
    struct Entry {
        const char* file;
        Outcome expected;
        const char* needle;  // must appear in the report
    };
    const Entry entries[] = {
        {"qwalk.nqpv", Outcome::Holds, "proof pf [q1 q2]: holds"},
        {"qwalk_bad_inv.nqpv", Outcome::Error, "is not a valid loop invariant"},
        {"errcorr.nqpv", Outcome::Holds, ""},
        {"deutsch.nqpv", Outcome::Holds, "proof pf [q q1 q2]: holds"},
        {"skip_half.nqpv", Outcome::Fails, "refuted"},
        {"errcorr6.nqpv", Outcome::Holds, ""},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const std::string path = corpus_dir + "/" + e.file;
        std::string note;
        bool ok = false;
        try {
            VerifyResult res = verify_file(path, VerifyOptions{});
            ok = res.outcome == e.expected &&
                 (*e.needle == '\0' || res.report.find(e.needle) != std::string::npos);
            if (!ok)
                note = "outcome " + std::to_string(int(res.outcome)) + ", expected " +
                       std::to_string(int(e.expected));
        } catch (const std::exception& ex) {
            note = ex.what();
        }
        out << (ok ? "[pass] " : "[FAIL] ") << e.file << (note.empty() ? "" : "  (" + note + ")")
            << "\n";
        if (!ok) ++failures;
    }

    std::string detail;
    bool channels_ok = false;
    try {
        channels_ok = errcorr_channels_ok(corpus_dir, detail);
    } catch (const std::exception& ex) {
        detail = ex.what();
    }
    out << (channels_ok ? "[pass] " : "[FAIL] ")
        << "errcorr channels preserve the data qubit"
        << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
    if (!channels_ok) ++failures;

    out << (failures == 0 ? "all corpus entries passed\n"
                          : std::to_string(failures) + " corpus entries failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace nqv
