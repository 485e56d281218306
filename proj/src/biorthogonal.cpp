#include "aihs/biorthogonal.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace aihs {

namespace {

CMatrix rows_matrix(const std::vector<CVector>& rows, Index dim) {
    CMatrix S(static_cast<Index>(rows.size()), dim);
    for (Index i = 0; i < S.rows(); ++i) S.row(i) = rows[static_cast<size_t>(i)].transpose();
    return S;
}

// cond of the Hermitian Gram S S^H, computed from the singular values of S
double gram_condition(const CMatrix& S) {
    const auto sv = Eigen::JacobiSVD<CMatrix>(S).singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    const double c = sv(0) / smin;
    return c * c;
}

}  // namespace

std::vector<Index> select_subsequence(const ResolventFamily& fam, const SelectionOptions& opts) {
    if (fam.size() == 0) throw InvalidSpec("select_subsequence: empty family");
    std::vector<Index> selected;
    std::vector<CVector> rows;
    double last_norm = 0.0;
    const Index dim = fam.x_stars.front().size();
    for (Index n = 0; n < fam.size(); ++n) {
        const double nn = fam.norms[static_cast<size_t>(n)];
        if (!selected.empty() && nn < opts.gamma_growth * last_norm) continue;
        rows.push_back(fam.x_stars[static_cast<size_t>(n)]);
        if (gram_condition(rows_matrix(rows, dim)) > opts.kappa_max) {
            rows.pop_back();
            continue;
        }
        selected.push_back(n);
        last_norm = nn;
    }
    if (selected.size() < 2)
        throw TooFewSelected("select_subsequence: only " + std::to_string(selected.size()) +
                             " index survives the condition/growth gates");
    return selected;
}

BiorthogonalSystem dual_system(const std::vector<CVector>& x_stars, Index dim,
                               const DualOptions& opts) {
    if (x_stars.empty()) throw InvalidSpec("dual_system: no functionals");
    for (const auto& f : x_stars)
        if (f.size() != dim) throw InvalidSpec("dual_system: functional dimension mismatch");

    const Index k = static_cast<Index>(x_stars.size());
    const CMatrix S = rows_matrix(x_stars, dim);
    Eigen::JacobiSVD<CMatrix> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > opts.min_singular_value))
        throw RankDeficient("dual_system: functional matrix has sigma_min = " +
                                std::to_string(smin),
                            smin);

    // Minimum-norm solution of the bilinear system S X = I: X = V S^-1 U^H.
    const CMatrix X = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();

    BiorthogonalSystem bio;
    bio.indices.resize(static_cast<size_t>(k));
    for (Index i = 0; i < k; ++i) bio.indices[static_cast<size_t>(i)] = i;
    bio.x_stars = x_stars;
    bio.x_duals.reserve(static_cast<size_t>(k));
    for (Index j = 0; j < k; ++j) bio.x_duals.emplace_back(X.col(j));
    const double c = sv(0) / smin;
    bio.gram_cond = c * c;
    bio.m_bound = 0.0;
    for (const auto& x : bio.x_duals) bio.m_bound = std::max(bio.m_bound, x.norm());

    const CMatrix P = S * X;
    bio.max_pairing_residual = (P - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (bio.max_pairing_residual > opts.tol_biorthogonality)
        throw RankDeficient("dual_system: biorthogonality residual " +
                                std::to_string(bio.max_pairing_residual) + " above tolerance",
                            smin);
    return bio;
}

BiorthogonalSystem biorthogonalize(const ResolventFamily& fam, const SelectionOptions& sel,
                                   const DualOptions& dual) {
    const auto idx = select_subsequence(fam, sel);
    std::vector<CVector> chosen;
    chosen.reserve(idx.size());
    for (Index n : idx) chosen.push_back(fam.x_stars[static_cast<size_t>(n)]);
    BiorthogonalSystem bio = dual_system(chosen, fam.x_stars.front().size(), dual);
    bio.indices = idx;
    return bio;
}

}  // namespace aihs
