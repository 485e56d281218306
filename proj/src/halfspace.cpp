#include "aihs/halfspace.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "aihs/kernels.hpp"

namespace aihs {

namespace {

// Orthonormal range/null split of the span of the given columns.
// Returns (range_basis D x r, null_basis D x (D - r)).
std::pair<CMatrix, CMatrix> range_and_complement(const CMatrix& A, double rank_cut) {
    const Index d = A.rows();
    Eigen::ColPivHouseholderQR<CMatrix> qr(A);
    qr.setThreshold(rank_cut);
    const Index r = qr.rank();
    CMatrix Q = qr.householderQ();
    return {Q.leftCols(r), Q.rightCols(d - r)};
}

}  // namespace

double HalfSpaceRep::annihilation_residual() const {
    double worst = 0.0;
    for (const auto& f : defining_functionals) {
        if (basis.cols() == 0) break;
        worst = std::max(worst, (f.transpose() * basis).cwiseAbs().maxCoeff());
    }
    return worst;
}

HalfSpaceRep preannihilator(const std::vector<CVector>& functionals, Index dim,
                            const PreannihilatorOptions& opts) {
    HalfSpaceRep hs;
    hs.defining_functionals = functionals;
    if (functionals.empty()) {
        hs.basis = CMatrix::Identity(dim, dim);
        hs.complement = CMatrix(dim, 0);
        hs.dim = dim;
        hs.codim_in_truncation = 0;
        return hs;
    }
    for (const auto& f : functionals) {
        if (f.size() != dim) throw InvalidSpec("preannihilator: functional dimension mismatch");
        if (f.norm() == 0.0) throw InvalidSpec("preannihilator: zero functional");
    }
    // {x : f(x) = 0} is the orthogonal complement of span{conj(f_i)}.
    CMatrix A(dim, static_cast<Index>(functionals.size()));
    for (Index j = 0; j < A.cols(); ++j) A.col(j) = functionals[static_cast<size_t>(j)].conjugate();
    auto [range, null] = range_and_complement(A, opts.rank_cut);
    hs.complement = std::move(range);
    hs.basis = std::move(null);
    hs.dim = hs.basis.cols();
    hs.codim_in_truncation = hs.complement.cols();
    hs.halfspace_proxy_flag = hs.codim_in_truncation > 0 && hs.codim_in_truncation <= dim / 8;
    return hs;
}

HalfSpaceRep halfspace_from_span(const std::vector<CVector>& span_vectors, Index dim) {
    if (span_vectors.empty()) throw InvalidSpec("halfspace_from_span: empty spanning set");
    CMatrix A(dim, static_cast<Index>(span_vectors.size()));
    for (Index j = 0; j < A.cols(); ++j) {
        if (span_vectors[static_cast<size_t>(j)].size() != dim)
            throw InvalidSpec("halfspace_from_span: vector dimension mismatch");
        A.col(j) = span_vectors[static_cast<size_t>(j)];
    }
    auto [range, null] = range_and_complement(A, 1e-12);
    HalfSpaceRep hs;
    hs.basis = std::move(range);
    hs.complement = std::move(null);
    hs.dim = hs.basis.cols();
    hs.codim_in_truncation = hs.complement.cols();
    // f(x) = <x, w> vanishes on the span exactly when w is in the complement
    hs.defining_functionals.reserve(static_cast<size_t>(hs.complement.cols()));
    for (Index j = 0; j < hs.complement.cols(); ++j)
        hs.defining_functionals.emplace_back(hs.complement.col(j).conjugate());
    hs.halfspace_proxy_flag = false;
    return hs;
}

DefectReport defect_estimate(const OperatorRep& T, const HalfSpaceRep& Y,
                             const DefectOptions& opts) {
    DefectReport rep;
    if (Y.basis.cols() == 0 || Y.complement.cols() == 0) {
        rep.threshold = opts.abs_cut;
        return rep;  // trivial or full subspace: nothing can leave it
    }
    // (I - P_Y) T B_Y = C (C^H T B_Y) with C the orthonormal complement, so
    // the singular values equal those of the small matrix M = C^H (T B_Y).
    // Evaluate in the cheaper association order.
    const Index d = T.dim();
    const Index r = Y.basis.cols();
    const Index k = Y.complement.cols();
    CMatrix M;
    if (T.is_dense() && k < r) {
        // (C^H T) B_Y : k x D times D x r
        CMatrix Ct = Y.complement.adjoint() * T.matrix();
        M = kernels::matmul(Ct, Y.basis);
    } else {
        CMatrix TB = T.apply_to_matrix(Y.basis);
        M = Y.complement.adjoint() * TB;
    }
    (void)d;
    Eigen::JacobiSVD<CMatrix> svd(M);
    const auto& sv = svd.singularValues();
    rep.residual_spectrum.assign(sv.data(), sv.data() + sv.size());
    const double s1 = sv.size() > 0 ? sv(0) : 0.0;
    rep.threshold = std::max(opts.rel_cut * s1, opts.abs_cut);
    for (double s : rep.residual_spectrum)
        if (s > rep.threshold) ++rep.defect;
    if (rep.residual_spectrum.size() >= 2 && rep.residual_spectrum[1] > 0.0)
        rep.gap = rep.residual_spectrum[0] / rep.residual_spectrum[1];
    else if (!rep.residual_spectrum.empty())
        rep.gap = std::numeric_limits<double>::infinity();
    return rep;
}

namespace {

// The floor keeps columns with A z = 0 (which lie in every subspace) from
// turning into 0/0: images below 1e-6 of the operator scale are measured
// against that scale instead of their own vanishing norm.
double invariance_residual_impl(const HalfSpaceRep& Z, const CMatrix& AB, double a_norm) {
    const double floor = 1e-6 * a_norm + 1e-300;
    double worst = 0.0;
    for (const auto& h : Z.defining_functionals) {
        const double hn = h.norm();
        const Eigen::RowVectorXcd vals = h.transpose() * AB;
        for (Index j = 0; j < AB.cols(); ++j) {
            const double den = hn * (AB.col(j).norm() + floor);
            worst = std::max(worst, std::abs(vals(j)) / den);
        }
    }
    return worst;
}

}  // namespace

double invariance_residual(const OperatorRep& A, const HalfSpaceRep& Z) {
    if (Z.basis.cols() == 0) return 0.0;
    return invariance_residual_impl(Z, A.apply_to_matrix(Z.basis), operator_norm(A));
}

double invariance_residual(const OperatorRep& T, const PerturbationRep& F,
                           const HalfSpaceRep& Z) {
    if (Z.basis.cols() == 0) return 0.0;
    CMatrix AB = T.apply_to_matrix(Z.basis);
    AB += F.apply_to_matrix(Z.basis);
    return invariance_residual_impl(Z, AB, operator_norm(T) + F.norm);
}

PerturbationRep perturbation_from_defect(const OperatorRep& T, const HalfSpaceRep& Y,
                                         const CVector& f, const CVector& c, double tol) {
    if (f.norm() == 0.0 && c.norm() == 0.0) return PerturbationRep::zero(T.dim());

    // precondition: T y - c(y) f lies in Y for every basis column
    CMatrix TB = T.apply_to_matrix(Y.basis);
    const Eigen::RowVectorXcd cy = c.transpose() * Y.basis;
    CMatrix R = TB - f * cy;
    // component outside Y
    R -= Y.basis * (Y.basis.adjoint() * R).eval();
    double worst = 0.0;
    for (Index j = 0; j < R.cols(); ++j) {
        const double scale = TB.col(j).norm() + f.norm() * std::abs(cy(j));
        if (scale > 0.0) worst = std::max(worst, R.col(j).norm() / scale);
    }
    if (worst > tol)
        throw DefectMismatch("perturbation_from_defect: T y - c(y) f leaves Y with relative "
                             "residual " + std::to_string(worst),
                             worst);
    return PerturbationRep::rank_one(-c, f);
}

}  // namespace aihs
