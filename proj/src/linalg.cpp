#include "nqv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace nqv {

namespace {

// Norm below which a Kraus factor contributes nothing detectable.
constexpr double kNegligibleKraus = 1e-14;

std::string join_names(const std::vector<std::string>& names) {
    std::ostringstream out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ' ';
        out << names[i];
    }
    return out.str();
}

}  // namespace

VarTuple::VarTuple(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second)
            throw DisjointnessError("duplicate variable '" + n + "' in tuple [" +
                                    join_names(names_) + "]");
    }
}

VarTuple::VarTuple(std::initializer_list<std::string> names)
    : VarTuple(std::vector<std::string>(names)) {}

bool VarTuple::contains(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::optional<std::size_t> VarTuple::position(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return std::size_t(it - names_.begin());
}

bool VarTuple::subset_of(const VarTuple& other) const {
    return std::all_of(names_.begin(), names_.end(),
                       [&](const std::string& n) { return other.contains(n); });
}

bool VarTuple::disjoint_from(const VarTuple& other) const {
    return std::none_of(names_.begin(), names_.end(),
                        [&](const std::string& n) { return other.contains(n); });
}

VarTuple VarTuple::concat(const VarTuple& other) const {
    if (!disjoint_from(other))
        throw DisjointnessError("registers [" + str() + "] and [" + other.str() +
                                "] overlap");
    std::vector<std::string> names = names_;
    names.insert(names.end(), other.names_.begin(), other.names_.end());
    return VarTuple(std::move(names));
}

VarTuple VarTuple::minus(const VarTuple& other) const {
    std::vector<std::string> names;
    for (const auto& n : names_)
        if (!other.contains(n)) names.push_back(n);
    return VarTuple(std::move(names));
}

std::string VarTuple::str() const { return join_names(names_); }

LabeledOperator::LabeledOperator(VarTuple vars_, Matrix mat_)
    : vars(std::move(vars_)), mat(std::move(mat_)) {
    if (mat.rows() != mat.cols() || mat.rows() != vars.dim())
        throw ValidationError("operator on [" + vars.str() + "] must be " +
                              std::to_string(vars.dim()) + "x" + std::to_string(vars.dim()) +
                              ", got " + std::to_string(mat.rows()) + "x" +
                              std::to_string(mat.cols()));
}

std::vector<Eigen::Index> index_map(const VarTuple& src, const VarTuple& dst) {
    if (src.size() != dst.size() || !dst.subset_of(src))
        throw ExtensionError("index_map requires the same variable set, got [" + src.str() +
                             "] vs [" + dst.str() + "]");
    const std::size_t n = dst.size();
    std::vector<int> shift(n);  // dst position -> left shift in src index
    for (std::size_t p = 0; p < n; ++p)
        shift[p] = int(n - 1 - *src.position(dst[p]));
    std::vector<Eigen::Index> map(std::size_t(1) << n);
    for (Eigen::Index x = 0; x < (Eigen::Index(1) << n); ++x) {
        Eigen::Index y = 0;
        for (std::size_t p = 0; p < n; ++p) {
            const Eigen::Index bit = (x >> (n - 1 - p)) & 1;
            y |= bit << shift[p];
        }
        map[std::size_t(x)] = y;
    }
    return map;
}

LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b) {
    VarTuple vars = a.vars.concat(b.vars);  // throws on overlap
    Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i)
        for (Eigen::Index j = 0; j < a.dim(); ++j)
            out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = a.mat(i, j) * b.mat;
    return LabeledOperator(std::move(vars), std::move(out));
}

Matrix extend_matrix(const Matrix& m, const VarTuple& from, const VarTuple& target) {
    if (!from.subset_of(target))
        throw ExtensionError("cannot extend operator on [" + from.str() +
                             "] to register [" + target.str() + "]");
    if (from == target) return m;
    const VarTuple rest = target.minus(from);
    const VarTuple full = from.concat(rest);
    const auto map = index_map(full, target);
    const std::size_t k = rest.size();
    const Eigen::Index mask = (Eigen::Index(1) << k) - 1;
    Matrix out = Matrix::Zero(target.dim(), target.dim());
    for (Eigen::Index r = 0; r < target.dim(); ++r) {
        const Eigen::Index fr = map[std::size_t(r)];
        for (Eigen::Index c = 0; c < target.dim(); ++c) {
            const Eigen::Index fc = map[std::size_t(c)];
            if ((fr & mask) == (fc & mask)) out(r, c) = m(fr >> k, fc >> k);
        }
    }
    return out;
}

LabeledOperator extend(const LabeledOperator& op, const VarTuple& target) {
    return LabeledOperator(target, extend_matrix(op.mat, op.vars, target));
}

bool is_hermitian(const Matrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

QuantumPredicate QuantumPredicate::checked(LabeledOperator op, const Tolerances& tol) {
    if (!is_hermitian(op.mat, tol.herm))
        throw ValidationError("predicate on [" + op.vars.str() + "] is not Hermitian");
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(
            Matrix((op.mat + op.mat.adjoint()) / 2.0), Eigen::EigenvaluesOnly)
            .eigenvalues();
    if (ev.minCoeff() < -tol.psd)
        throw ValidationError("predicate on [" + op.vars.str() +
                              "] has a negative eigenvalue " + std::to_string(ev.minCoeff()));
    if (ev.maxCoeff() > 1.0 + tol.psd)
        throw ValidationError("predicate on [" + op.vars.str() + "] exceeds identity, top eigenvalue " +
                              std::to_string(ev.maxCoeff()));
    return QuantumPredicate{std::move(op)};
}

DensityOperator DensityOperator::checked(LabeledOperator op, const Tolerances& tol) {
    if (!is_hermitian(op.mat, tol.herm))
        throw ValidationError("density operator on [" + op.vars.str() + "] is not Hermitian");
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(
            Matrix((op.mat + op.mat.adjoint()) / 2.0), Eigen::EigenvaluesOnly)
            .eigenvalues();
    if (ev.minCoeff() < -tol.psd)
        throw ValidationError("density operator on [" + op.vars.str() +
                              "] is not positive semidefinite");
    const double tr = op.mat.trace().real();
    if (tr > 1.0 + tol.trace)
        throw ValidationError("density operator on [" + op.vars.str() + "] has trace " +
                              std::to_string(tr) + " > 1");
    return DensityOperator{std::move(op)};
}

SuperOperator::SuperOperator(VarTuple vars_, std::vector<Matrix> kraus_)
    : vars(std::move(vars_)), kraus(std::move(kraus_)) {
    if (kraus.empty())
        throw ValidationError("super-operator on [" + vars.str() + "] needs at least one Kraus factor");
    for (const auto& k : kraus)
        if (k.rows() != vars.dim() || k.cols() != vars.dim())
            throw ValidationError("Kraus factor shape does not match register [" + vars.str() + "]");
}

SuperOperator SuperOperator::checked(VarTuple vars, std::vector<Matrix> kraus,
                                     const Tolerances& tol) {
    SuperOperator e(std::move(vars), std::move(kraus));
    Matrix s = Matrix::Zero(e.dim(), e.dim());
    for (const auto& k : e.kraus) s += k.adjoint() * k;
    const double top = max_eigenvalue(Matrix((s + s.adjoint()) / 2.0));
    if (top > 1.0 + tol.psd)
        throw ValidationError("super-operator on [" + e.vars.str() +
                              "] increases trace, sum E^dag E has eigenvalue " +
                              std::to_string(top));
    return e;
}

ProjectiveMeasurement ProjectiveMeasurement::checked(VarTuple vars, Matrix p0, Matrix p1,
                                                     const Tolerances& tol) {
    const Eigen::Index d = vars.dim();
    if (p0.rows() != d || p0.cols() != d || p1.rows() != d || p1.cols() != d)
        throw ValidationError("measurement blocks do not match register [" + vars.str() + "]");
    for (const Matrix* p : {&p0, &p1}) {
        if (!is_hermitian(*p, tol.herm))
            throw ValidationError("measurement projector is not Hermitian");
        if ((*p * *p - *p).cwiseAbs().maxCoeff() > tol.herm * 10)
            throw ValidationError("measurement block is not idempotent");
    }
    if ((p0 + p1 - identity(d)).cwiseAbs().maxCoeff() > tol.herm)
        throw ValidationError("measurement projectors do not sum to the identity");
    return ProjectiveMeasurement{std::move(vars), std::move(p0), std::move(p1)};
}

SuperOperator extend(const SuperOperator& e, const VarTuple& target) {
    if (e.vars == target) return e;
    std::vector<Matrix> kraus;
    kraus.reserve(e.kraus.size());
    for (const auto& k : e.kraus) kraus.push_back(extend_matrix(k, e.vars, target));
    return SuperOperator(target, std::move(kraus));
}

Matrix apply_matrix(const SuperOperator& e, const Matrix& a, const VarTuple& on) {
    const SuperOperator ext = extend(e, on);
    Matrix out = Matrix::Zero(on.dim(), on.dim());
    for (const auto& k : ext.kraus) out += k * a * k.adjoint();
    return out;
}

DensityOperator apply(const SuperOperator& e, const DensityOperator& rho) {
    if (!e.vars.subset_of(rho.op.vars))
        throw ExtensionError("channel acts on [" + e.vars.str() +
                             "] which is not contained in the state register [" +
                             rho.op.vars.str() + "]");
    return DensityOperator{
        LabeledOperator(rho.op.vars, apply_matrix(e, rho.op.mat, rho.op.vars))};
}

SuperOperator adjoint(const SuperOperator& e) {
    std::vector<Matrix> kraus;
    kraus.reserve(e.kraus.size());
    for (const auto& k : e.kraus) kraus.push_back(k.adjoint());
    return SuperOperator(e.vars, std::move(kraus));
}

Matrix apply_adjoint(const SuperOperator& e, const Matrix& a, const VarTuple& on) {
    const SuperOperator ext = extend(e, on);
    Matrix out = Matrix::Zero(on.dim(), on.dim());
    for (const auto& k : ext.kraus) out += k.adjoint() * a * k;
    return out;
}

namespace {

std::vector<Matrix> drop_negligible(std::vector<Matrix> kraus, Eigen::Index d) {
    std::vector<Matrix> kept;
    for (auto& k : kraus)
        if (k.norm() > kNegligibleKraus) kept.push_back(std::move(k));
    if (kept.empty()) kept.push_back(Matrix::Zero(d, d));
    return kept;
}

}  // namespace

SuperOperator compose(const SuperOperator& f, const SuperOperator& e) {
    const VarTuple target = e.vars.concat(f.vars.minus(e.vars));
    const SuperOperator ee = extend(e, target);
    const SuperOperator fe = extend(f, target);
    std::vector<Matrix> kraus;
    kraus.reserve(ee.kraus.size() * fe.kraus.size());
    for (const auto& ke : ee.kraus)
        for (const auto& kf : fe.kraus) kraus.push_back(kf * ke);
    return SuperOperator(target, drop_negligible(std::move(kraus), target.dim()));
}

SuperOperator add(const SuperOperator& a, const SuperOperator& b) {
    const VarTuple target = a.vars.concat(b.vars.minus(a.vars));
    const SuperOperator ae = extend(a, target);
    const SuperOperator be = extend(b, target);
    std::vector<Matrix> kraus = ae.kraus;
    kraus.insert(kraus.end(), be.kraus.begin(), be.kraus.end());
    return SuperOperator(target, drop_negligible(std::move(kraus), target.dim()));
}

Matrix partial_trace_matrix(const Matrix& m, const VarTuple& vars, const VarTuple& keep) {
    if (!keep.subset_of(vars))
        throw ExtensionError("cannot keep [" + keep.str() + "] when tracing a state on [" +
                             vars.str() + "]");
    const VarTuple rest = vars.minus(keep);
    const auto map = index_map(vars, keep.concat(rest));
    const Eigen::Index dk = keep.dim();
    const Eigen::Index dr = rest.dim();
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i)
        for (Eigen::Index j = 0; j < dk; ++j)
            for (Eigen::Index t = 0; t < dr; ++t)
                out(i, j) += m(map[std::size_t(i * dr + t)], map[std::size_t(j * dr + t)]);
    return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const VarTuple& keep) {
    return DensityOperator{
        LabeledOperator(keep, partial_trace_matrix(rho.op.mat, rho.op.vars, keep))};
}

EigResult eig_hermitian(const Matrix& m, const Tolerances& tol) {
    if (!is_hermitian(m, tol.herm))
        throw HermiticityError("matrix is not Hermitian within " + std::to_string(tol.herm));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix((m + m.adjoint()) / 2.0));
    const Eigen::VectorXd asc = solver.eigenvalues();
    EigResult res;
    res.values = asc.reverse();
    res.top = solver.eigenvectors().col(asc.size() - 1);
    return res;
}

EigResult eig_hermitian(const LabeledOperator& a, const Tolerances& tol) {
    return eig_hermitian(a.mat, tol);
}

double max_eigenvalue(const Matrix& herm) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(
               Matrix((herm + herm.adjoint()) / 2.0), Eigen::EigenvaluesOnly)
        .eigenvalues()
        .maxCoeff();
}

double min_eigenvalue(const Matrix& herm) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(
               Matrix((herm + herm.adjoint()) / 2.0), Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
}

Matrix transfer_matrix(const SuperOperator& e) {
    const Eigen::Index d = e.dim();
    Matrix t = Matrix::Zero(d * d, d * d);
    for (const auto& k : e.kraus) {
        // vec(E rho E^dag) = conj(E) (x) E vec(rho) for column-major vec.
        Matrix kc = k.conjugate();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                t.block(i * d, j * d, d, d) += kc(i, j) * k;
    }
    return t;
}

Matrix choi_matrix(const SuperOperator& e) {
    const Eigen::Index d = e.dim();
    Matrix j = Matrix::Zero(d * d, d * d);
    for (const auto& k : e.kraus) {
        Vector v(d * d);
        for (Eigen::Index c = 0; c < d; ++c) v.segment(c * d, d) = k.col(c);
        j += v * v.adjoint();
    }
    return j;
}

bool channel_equal(const SuperOperator& a, const SuperOperator& b, double tol) {
    if (!(a.vars == b.vars)) {
        if (a.vars.size() != b.vars.size() || !a.vars.subset_of(b.vars)) return false;
        return channel_equal(a, extend(b, a.vars), tol);
    }
    return approx_equal(transfer_matrix(a), transfer_matrix(b), tol);
}

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

Vector basis_ket(Eigen::Index i, Eigen::Index d) {
    Vector v = Vector::Zero(d);
    v(i) = 1.0;
    return v;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace nqv
