#include "aihs/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "aihs/kernels.hpp"

namespace aihs {

namespace {

void check_weights(const std::vector<double>& w, Index dim, bool allow_zero,
                   const char* what) {
    if (dim < 2) throw InvalidSpec(std::string(what) + ": dimension must be >= 2");
    if (static_cast<Index>(w.size()) < dim - 1)
        throw InvalidSpec(std::string(what) + ": weight sequence has length " +
                          std::to_string(w.size()) + ", need >= " + std::to_string(dim - 1));
    for (Index k = 0; k < dim - 1; ++k) {
        const double wk = w[static_cast<size_t>(k)];
        if (!std::isfinite(wk) || wk < 0.0 || (!allow_zero && wk == 0.0))
            throw InvalidSpec(std::string(what) + ": weight " + std::to_string(k) +
                              " is not a " + (allow_zero ? "finite nonnegative" : "positive") +
                              " real");
    }
}

CMatrix materialize(const StructureTag& tag, Index dim) {
    CMatrix m = CMatrix::Zero(dim, dim);
    if (const auto* f = std::get_if<ForwardShiftTag>(&tag)) {
        for (Index k = 0; k + 1 < dim; ++k) m(k + 1, k) = f->weights[static_cast<size_t>(k)];
    } else if (const auto* b = std::get_if<BackwardShiftTag>(&tag)) {
        for (Index k = 0; k + 1 < dim; ++k) m(k, k + 1) = b->weights[static_cast<size_t>(k)];
    } else if (const auto* d = std::get_if<DiagonalTag>(&tag)) {
        m.diagonal() = d->entries;
    } else if (const auto* n = std::get_if<NilpotentTag>(&tag)) {
        for (Index k = 0; k + 1 < dim; ++k) {
            const double wk = n->weights[static_cast<size_t>(k)];
            if (n->lower)
                m(k + 1, k) = wk;
            else
                m(k, k + 1) = wk;
        }
    }
    return m;
}

// Subdiagonal weights of the matrix lambda I - A for the chain-like tags:
// lower chains give a lower bidiagonal system, upper chains an upper one.
struct BidiagView {
    const std::vector<double>* weights;
    bool lower;
};

std::optional<BidiagView> bidiag_view(const StructureTag& tag) {
    if (const auto* f = std::get_if<ForwardShiftTag>(&tag)) return BidiagView{&f->weights, true};
    if (const auto* b = std::get_if<BackwardShiftTag>(&tag))
        return BidiagView{&b->weights, false};
    if (const auto* n = std::get_if<NilpotentTag>(&tag)) return BidiagView{&n->weights, n->lower};
    return std::nullopt;
}

// Solve (lambda I - A) h = b where A is the chain with the given weights.
// Lower chain: lambda h_0 = b_0, lambda h_k - w_{k-1} h_{k-1} = b_k.
// With transpose set, solves against A^T (the opposite chain); the weights
// are real, so this also covers A^H.
CVector solve_chain(Complex lambda, const BidiagView& v, const CVector& b, bool transpose) {
    const Index d = b.size();
    CVector h(d);
    const auto w = [&](Index k) -> double { return (*v.weights)[static_cast<size_t>(k)]; };
    bool lower = v.lower;
    if (transpose) lower = !lower;
    if (lower) {
        h(0) = b(0) / lambda;
        for (Index k = 1; k < d; ++k) h(k) = (b(k) + w(k - 1) * h(k - 1)) / lambda;
    } else {
        h(d - 1) = b(d - 1) / lambda;
        for (Index k = d - 2; k >= 0; --k) h(k) = (b(k) + w(k) * h(k + 1)) / lambda;
    }
    return h;
}

// Power iteration for the largest eigenvalue of (M^H M)^{-1} given a solver
// for M and M^H; returns the implied sigma_min of M. Three digits are enough
// for the singularity gate.
template <typename SolveM, typename SolveMH>
double sigma_min_by_inverse_iteration(Index d, SolveM&& solve_m, SolveMH&& solve_mh) {
    CVector v = CVector::Constant(d, Complex(1.0, 0.0));
    // deterministic, mildly rough start so no symmetry traps the iteration
    for (Index k = 0; k < d; ++k) v(k) += Complex(0.0, 1e-3 * static_cast<double>((k % 7) + 1));
    v /= v.norm();
    double mu_prev = 0.0;
    for (int it = 0; it < 48; ++it) {
        CVector z = solve_mh(v);
        CVector u = solve_m(z);
        const double mu = u.norm();
        if (!std::isfinite(mu) || mu == 0.0) return 0.0;
        u /= mu;
        if (it >= 4 && std::abs(mu - mu_prev) <= 1e-3 * mu) {
            mu_prev = mu;
            break;
        }
        mu_prev = mu;
        v.swap(u);
    }
    return mu_prev > 0.0 ? 1.0 / std::sqrt(mu_prev) : 0.0;
}

double power_iteration_norm(const OperatorRep& T, double rel_tol) {
    const Index d = T.dim();
    CVector v = CVector::Constant(d, Complex(1.0, 0.0));
    for (Index k = 0; k < d; ++k) v(k) += Complex(0.0, 1e-3 * static_cast<double>((k % 5) + 1));
    v /= v.norm();
    double sigma = 0.0;
    for (int it = 0; it < 20000; ++it) {
        CVector tv = T.apply(v);
        const double s = tv.norm();
        if (s == 0.0) return 0.0;
        CVector u = T.apply_adjoint(tv.conjugate()).conjugate();  // (T^H T) v
        const double un = u.norm();
        if (un == 0.0) return s;
        u /= un;
        if (it > 2 && std::abs(s - sigma) <= rel_tol * s) return s;
        sigma = s;
        v.swap(u);
    }
    return sigma;
}

}  // namespace

std::string structure_name(const StructureTag& tag) {
    if (std::holds_alternative<ForwardShiftTag>(tag)) return "forward_shift";
    if (std::holds_alternative<BackwardShiftTag>(tag)) return "backward_shift";
    if (std::holds_alternative<DiagonalTag>(tag)) return "diagonal";
    if (std::holds_alternative<NilpotentTag>(tag)) return "nilpotent";
    return "dense";
}

OperatorRep OperatorRep::forward_shift(Index dim, std::vector<double> weights) {
    check_weights(weights, dim, /*allow_zero=*/false, "forward_shift");
    weights.resize(static_cast<size_t>(dim - 1));
    return OperatorRep(dim, ForwardShiftTag{std::move(weights)});
}

OperatorRep OperatorRep::backward_shift(Index dim, std::vector<double> weights) {
    check_weights(weights, dim, /*allow_zero=*/false, "backward_shift");
    weights.resize(static_cast<size_t>(dim - 1));
    return OperatorRep(dim, BackwardShiftTag{std::move(weights)});
}

OperatorRep OperatorRep::diagonal(CVector entries) {
    if (entries.size() < 2) throw InvalidSpec("diagonal: dimension must be >= 2");
    if (!all_finite(entries)) throw InvalidSpec("diagonal: entries must be finite");
    const Index d = entries.size();
    return OperatorRep(d, DiagonalTag{std::move(entries)});
}

OperatorRep OperatorRep::nilpotent(Index dim, std::vector<double> weights, bool lower) {
    check_weights(weights, dim, /*allow_zero=*/true, "nilpotent");
    weights.resize(static_cast<size_t>(dim - 1));
    return OperatorRep(dim, NilpotentTag{std::move(weights), lower});
}

OperatorRep OperatorRep::dense(CMatrix matrix) {
    if (matrix.rows() != matrix.cols()) throw InvalidSpec("dense: matrix must be square");
    if (matrix.rows() < 2) throw InvalidSpec("dense: dimension must be >= 2");
    if (!all_finite(matrix)) throw InvalidSpec("dense: entries must be finite");
    OperatorRep op(matrix.rows(), DenseTag{});
    op.matrix_ = std::move(matrix);
    return op;
}

const CMatrix& OperatorRep::matrix() const {
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    if (!matrix_) matrix_ = materialize(structure_, dim_);
    return *matrix_;
}

CVector OperatorRep::apply(const CVector& x) const {
    const Index d = dim_;
    if (const auto* f = std::get_if<ForwardShiftTag>(&structure_)) {
        CVector y = CVector::Zero(d);
        for (Index k = 0; k + 1 < d; ++k) y(k + 1) = f->weights[static_cast<size_t>(k)] * x(k);
        return y;
    }
    if (const auto* b = std::get_if<BackwardShiftTag>(&structure_)) {
        CVector y = CVector::Zero(d);
        for (Index k = 0; k + 1 < d; ++k) y(k) = b->weights[static_cast<size_t>(k)] * x(k + 1);
        return y;
    }
    if (const auto* dg = std::get_if<DiagonalTag>(&structure_))
        return dg->entries.cwiseProduct(x);
    if (const auto* n = std::get_if<NilpotentTag>(&structure_)) {
        CVector y = CVector::Zero(d);
        for (Index k = 0; k + 1 < d; ++k) {
            const double wk = n->weights[static_cast<size_t>(k)];
            if (n->lower)
                y(k + 1) = wk * x(k);
            else
                y(k) = wk * x(k + 1);
        }
        return y;
    }
    return kernels::matvec(matrix(), x);
}

CVector OperatorRep::apply_adjoint(const CVector& x) const {
    if (is_dense()) return kernels::matvec_transpose(matrix(), x);
    return adjoint().apply(x);
}

CMatrix OperatorRep::apply_to_matrix(const CMatrix& B) const {
    if (is_dense()) return kernels::matmul(matrix(), B);
    CMatrix C(B.rows(), B.cols());
    for (Index j = 0; j < B.cols(); ++j) C.col(j) = apply(B.col(j));
    return C;
}

CMatrix OperatorRep::apply_adjoint_to_matrix(const CMatrix& B) const {
    if (is_dense()) {
        CMatrix At = matrix().transpose();
        return kernels::matmul(At, B);
    }
    const OperatorRep adj = adjoint();
    CMatrix C(B.rows(), B.cols());
    for (Index j = 0; j < B.cols(); ++j) C.col(j) = adj.apply(B.col(j));
    return C;
}

OperatorRep OperatorRep::adjoint() const {
    if (const auto* f = std::get_if<ForwardShiftTag>(&structure_))
        return OperatorRep(dim_, BackwardShiftTag{f->weights});
    if (const auto* b = std::get_if<BackwardShiftTag>(&structure_))
        return OperatorRep(dim_, ForwardShiftTag{b->weights});
    if (std::holds_alternative<DiagonalTag>(structure_)) return *this;
    if (const auto* n = std::get_if<NilpotentTag>(&structure_))
        return OperatorRep(dim_, NilpotentTag{n->weights, !n->lower});
    return dense(matrix().transpose());
}

OperatorRep OperatorRep::add_scaled(const OperatorRep& S, Complex z) const {
    if (S.dim() != dim_) throw InvalidSpec("add_scaled: dimension mismatch");
    return dense(matrix() + z * S.matrix());
}

CVector resolvent_solve(const OperatorRep& A, Complex lambda, const CVector& b,
                        const ResolventOptions& opts, SolveInfo* info) {
    const Index d = A.dim();
    if (b.size() != d) throw InvalidSpec("resolvent_solve: rhs dimension mismatch");
    const double bnorm = b.norm();
    SolveInfo local;

    // residual of a candidate solution, via the structured apply
    const auto residual = [&](const CVector& h) {
        return (lambda * h - A.apply(h) - b).norm();
    };

    CVector h;
    if (const auto* dg = std::get_if<DiagonalTag>(&A.structure())) {
        double smin = std::numeric_limits<double>::infinity();
        double smax = 0.0;
        for (Index k = 0; k < d; ++k) {
            const double a = std::abs(lambda - dg->entries(k));
            smin = std::min(smin, a);
            smax = std::max(smax, a);
        }
        local.sigma_min_est = smin;
        if (opts.check_singularity && smin < opts.singular_factor * smax)
            throw SingularResolvent("lambda within threshold of a diagonal entry: sigma_min = " +
                                        std::to_string(smin),
                                    smin);
        if (smin == 0.0)
            throw SingularResolvent("lambda is a diagonal entry", 0.0);
        h = (b.array() / (lambda - dg->entries.array())).matrix();
    } else if (const auto view = bidiag_view(A.structure())) {
        if (lambda == Complex(0.0, 0.0))
            throw SingularResolvent("lambda = 0 hits the truncated chain spectrum", 0.0);
        h = solve_chain(lambda, *view, b, /*transpose=*/false);
        if (opts.check_singularity) {
            // M = lambda I - A is triangular bidiagonal and M^H is the
            // opposite chain at conj(lambda), so both directions solve in O(D).
            auto solve_m = [&](const CVector& rhs) {
                return solve_chain(lambda, *view, rhs, false);
            };
            auto solve_mh = [&](const CVector& rhs) {
                return solve_chain(std::conj(lambda), *view, rhs, true);
            };
            // sigma_min(M^H) == sigma_min(M); iterate on (M^H M)^{-1}
            local.sigma_min_est = sigma_min_by_inverse_iteration(d, solve_m, solve_mh);
            double wmax = 0.0;
            for (double w : *view.value().weights) wmax = std::max(wmax, w);
            const double mnorm = std::abs(lambda) + wmax;
            if (local.sigma_min_est < opts.singular_factor * mnorm)
                throw SingularResolvent(
                    "lambda within threshold of the truncated spectrum: sigma_min = " +
                        std::to_string(local.sigma_min_est),
                    local.sigma_min_est);
        }
    } else {
        CMatrix M = (lambda * CMatrix::Identity(d, d)) - A.matrix();
        Eigen::PartialPivLU<CMatrix> lu(M);
        if (opts.check_singularity) {
            auto solve_m = [&](const CVector& rhs) { return CVector(lu.solve(rhs)); };
            auto solve_mh = [&](const CVector& rhs) { return CVector(lu.adjoint().solve(rhs)); };
            local.sigma_min_est = sigma_min_by_inverse_iteration(d, solve_m, solve_mh);
            const double mnorm = M.colwise().template lpNorm<1>().maxCoeff();
            if (local.sigma_min_est < opts.singular_factor * mnorm)
                throw SingularResolvent(
                    "lambda within threshold of the truncated spectrum: sigma_min = " +
                        std::to_string(local.sigma_min_est),
                    local.sigma_min_est);
        }
        h = lu.solve(b);
        // one refinement pass if the residual is above target
        if (bnorm > 0.0 && residual(h) > opts.tol_solve * bnorm) {
            CVector r = b - (lambda * h - A.apply(h));
            h += lu.solve(r);
            local.refinements = 1;
        }
    }

    local.residual_rel = bnorm > 0.0 ? residual(h) / bnorm : residual(h);
    if (info) *info = local;
    return h;
}

double operator_norm(const OperatorRep& T) {
    if (const auto* f = std::get_if<ForwardShiftTag>(&T.structure()))
        return *std::max_element(f->weights.begin(), f->weights.end());
    if (const auto* b = std::get_if<BackwardShiftTag>(&T.structure()))
        return *std::max_element(b->weights.begin(), b->weights.end());
    if (const auto* dg = std::get_if<DiagonalTag>(&T.structure()))
        return dg->entries.cwiseAbs().maxCoeff();
    if (const auto* n = std::get_if<NilpotentTag>(&T.structure()))
        return *std::max_element(n->weights.begin(), n->weights.end());
    if (T.dim() <= 512)
        return Eigen::BDCSVD<CMatrix>(T.matrix()).singularValues()(0);
    return power_iteration_norm(T, 1e-9);
}

CVector eigenvalues(const OperatorRep& T) {
    if (const auto* dg = std::get_if<DiagonalTag>(&T.structure())) return dg->entries;
    if (std::holds_alternative<ForwardShiftTag>(T.structure()) ||
        std::holds_alternative<BackwardShiftTag>(T.structure()) ||
        std::holds_alternative<NilpotentTag>(T.structure()))
        return CVector::Zero(T.dim());
    Eigen::ComplexEigenSolver<CMatrix> es(T.matrix(), /*computeEigenvectors=*/false);
    return es.eigenvalues();
}

double spectral_radius(const OperatorRep& T) {
    return eigenvalues(T).cwiseAbs().maxCoeff();
}

bool is_structurally_quasinilpotent(const OperatorRep& T) {
    return std::holds_alternative<NilpotentTag>(T.structure());
}

}  // namespace aihs
