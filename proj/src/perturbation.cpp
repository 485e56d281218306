#include "aihs/perturbation.hpp"

#include <algorithm>
#include <cmath>

namespace aihs {

DefectOneResult defect_one_construction(const OperatorRep& T, const ResolventFamily& fam,
                                        const HalfSpaceRep& Z, const DefectOneOptions& opts) {
    DefectOneResult res;
    if (Z.basis.cols() == 0) throw InvalidSpec("defect_one_construction: Z is trivial");

    // e*(z) across the Z-basis
    const Eigen::RowVectorXcd ez = fam.e_star.transpose() * Z.basis;
    Index best = 0;
    double best_abs = 0.0;
    for (Index j = 0; j < ez.size(); ++j) {
        const double a = std::abs(ez(j));
        if (a > best_abs) {
            best_abs = a;
            best = j;
        }
    }
    res.max_estar_on_basis = best_abs;

    if (best_abs <= opts.tol_invariant) {
        // Z <= ker e*: h*_n(T z) = -e*(z) = 0, so Z is already invariant.
        res.already_invariant = true;
        res.invariance = invariance_residual(T, Z);
        res.defect = defect_estimate(T, Z, opts.defect);
        return res;
    }

    res.z0_index = best;
    const CVector z0 = Z.basis.col(best);
    CVector f = T.apply(z0);
    CVector alpha = fam.e_star / ez(best);

    // four-term cancellation h*_n(T z - alpha_z f) over the basis
    CMatrix TB = T.apply_to_matrix(Z.basis);
    const Eigen::RowVectorXcd az = alpha.transpose() * Z.basis;
    CMatrix R = TB - f * az;  // columns T z - alpha_z f
    double worst = 0.0;
    for (const auto& h : fam.h_stars) {
        const Eigen::RowVectorXcd vals = h.transpose() * R;
        worst = std::max(worst, vals.cwiseAbs().maxCoeff());
    }
    res.four_term_max = worst;

    res.F = PerturbationRep::rank_one(-alpha, f);
    res.f = std::move(f);
    res.alpha = std::move(alpha);
    res.invariance = invariance_residual(T, *res.F, Z);
    res.defect = defect_estimate(T, Z, opts.defect);
    return res;
}

SmallNormResult small_norm_rank_one(const OperatorRep& T, const ResolventFamily& fam,
                                    const BiorthogonalSystem& bio, double eps,
                                    const SmallNormOptions& opts) {
    if (eps <= 0.0) throw InvalidSpec("small_norm_rank_one: eps must be positive");
    if (std::abs(fam.e_star.norm() - 1.0) > opts.tol_estar_normalized)
        throw InvalidSpec("small_norm_rank_one: e* must be normalized");
    const Index k = bio.size();
    if (k < 2) throw TooFewSelected("small_norm_rank_one: need at least 2 biorthogonal pairs");

    // Drop smallest-norm h*_n first (family order is the schedule order, so
    // the largest contributions to the budget go first), keep >= min_tail.
    const double rhs = eps / bio.m_bound;
    std::vector<Index> tail(static_cast<size_t>(k));
    for (Index i = 0; i < k; ++i) tail[static_cast<size_t>(i)] = i;
    std::sort(tail.begin(), tail.end(), [&](Index a, Index b) {
        return fam.norms[static_cast<size_t>(bio.indices[static_cast<size_t>(a)])] <
               fam.norms[static_cast<size_t>(bio.indices[static_cast<size_t>(b)])];
    });
    const auto tail_sum = [&](size_t from) {
        double s = 0.0;
        for (size_t i = from; i < tail.size(); ++i)
            s += 1.0 / fam.norms[static_cast<size_t>(bio.indices[static_cast<size_t>(tail[i])])];
        return s;
    };
    size_t from = 0;
    while (static_cast<Index>(tail.size() - from) > opts.min_tail && tail_sum(from) >= rhs)
        ++from;
    const double sum = tail_sum(from);
    if (sum >= rhs) {
        const double achievable = sum * bio.m_bound;
        throw BudgetInfeasible(
            "small_norm_rank_one: minimal tail still needs eps > " + std::to_string(achievable),
            achievable);
    }

    SmallNormResult res;
    res.tail.assign(tail.begin() + static_cast<std::ptrdiff_t>(from), tail.end());
    std::sort(res.tail.begin(), res.tail.end());
    res.tail_sum = sum;
    res.budget_rhs = rhs;

    // f = sum over the tail of x_n / ||h*_n||
    CVector f = CVector::Zero(T.dim());
    for (Index i : res.tail) {
        const Index fam_idx = bio.indices[static_cast<size_t>(i)];
        f += bio.x_duals[static_cast<size_t>(i)] / fam.norms[static_cast<size_t>(fam_idx)];
    }
    res.f = f;
    res.F = PerturbationRep::rank_one(fam.e_star, f, eps);

    // unit pairing h*_n(f) = 1 on the tail
    double perr = 0.0;
    for (Index i : res.tail) {
        const Index fam_idx = bio.indices[static_cast<size_t>(i)];
        perr = std::max(perr,
                        std::abs(pair(fam.h_stars[static_cast<size_t>(fam_idx)], f) - 1.0));
    }
    res.max_unit_pairing_error = perr;
    if (perr > opts.tol_pairing)
        throw BudgetInfeasible("small_norm_rank_one: unit pairing residual " +
                                   std::to_string(perr) + " above tolerance",
                               perr);

    // Z from the tail functionals; (T+F) Z <= Z
    std::vector<CVector> tail_functionals;
    tail_functionals.reserve(res.tail.size());
    for (Index i : res.tail) {
        const Index fam_idx = bio.indices[static_cast<size_t>(i)];
        tail_functionals.push_back(fam.x_stars[static_cast<size_t>(fam_idx)]);
    }
    res.Z = preannihilator(tail_functionals, T.dim());
    res.invariance = invariance_residual(T, res.F, res.Z);
    return res;
}

}  // namespace aihs
