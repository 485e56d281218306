#include "aihs/perturbation_rep.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace aihs {

namespace {

Index dim_of(const std::vector<PerturbationRep::Pair>& pairs) {
    return pairs.empty() ? 0 : pairs.front().functional.size();
}

}  // namespace

double perturbation_norm(const std::vector<PerturbationRep::Pair>& pairs) {
    if (pairs.empty()) return 0.0;
    if (pairs.size() == 1) return pairs[0].functional.norm() * pairs[0].vector.norm();
    // F = V C^T with thin factors; ||F|| = sigma_1(R_V R_C^T) after thin QR
    // of both sides.
    const Index d = dim_of(pairs);
    const Index r = static_cast<Index>(pairs.size());
    CMatrix V(d, r), C(d, r);
    for (Index i = 0; i < r; ++i) {
        V.col(i) = pairs[static_cast<size_t>(i)].vector;
        C.col(i) = pairs[static_cast<size_t>(i)].functional;
    }
    Eigen::HouseholderQR<CMatrix> qv(V), qc(C);
    const CMatrix Rv = qv.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const CMatrix Rc = qc.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    // F = Qv Rv (Qc Rc)^T = Qv (Rv Rc^T) Qc^T; Qc^T has orthonormal rows
    // only up to conjugation, which leaves singular values unchanged.
    return Eigen::JacobiSVD<CMatrix>(Rv * Rc.transpose()).singularValues()(0);
}

PerturbationRep PerturbationRep::zero(Index dim) {
    PerturbationRep p;
    p.pairs.push_back({CVector::Zero(dim), CVector::Zero(dim)});
    p.norm = 0.0;
    return p;
}

PerturbationRep PerturbationRep::rank_one(CVector functional, CVector vector,
                                          std::optional<double> budget) {
    if (functional.size() != vector.size())
        throw InvalidSpec("rank_one: functional/vector dimension mismatch");
    if (!all_finite(functional) || !all_finite(vector))
        throw InvalidSpec("rank_one: entries must be finite");
    PerturbationRep p;
    p.pairs.push_back({std::move(functional), std::move(vector)});
    p.norm = perturbation_norm(p.pairs);
    p.epsilon_budget = budget;
    if (budget && !(p.norm < *budget))
        throw BudgetInfeasible("rank_one: norm " + std::to_string(p.norm) +
                                   " does not fit the budget " + std::to_string(*budget),
                               p.norm);
    return p;
}

PerturbationRep PerturbationRep::finite_rank(std::vector<Pair> pairs,
                                             std::optional<double> budget) {
    if (pairs.empty()) throw InvalidSpec("finite_rank: no pairs");
    const Index d = pairs.front().functional.size();
    for (const auto& pr : pairs) {
        if (pr.functional.size() != d || pr.vector.size() != d)
            throw InvalidSpec("finite_rank: inconsistent dimensions");
        if (!all_finite(pr.functional) || !all_finite(pr.vector))
            throw InvalidSpec("finite_rank: entries must be finite");
    }
    PerturbationRep p;
    p.pairs = std::move(pairs);
    p.norm = perturbation_norm(p.pairs);
    p.epsilon_budget = budget;
    if (budget && !(p.norm < *budget))
        throw BudgetInfeasible("finite_rank: norm " + std::to_string(p.norm) +
                                   " does not fit the budget " + std::to_string(*budget),
                               p.norm);
    return p;
}

bool PerturbationRep::is_zero() const {
    for (const auto& pr : pairs)
        if (pr.functional.norm() != 0.0 && pr.vector.norm() != 0.0) return false;
    return true;
}

Index PerturbationRep::ambient_dim() const { return dim_of(pairs); }

CVector PerturbationRep::apply(const CVector& x) const {
    CVector y = CVector::Zero(x.size());
    for (const auto& pr : pairs) y += pair(pr.functional, x) * pr.vector;
    return y;
}

CMatrix PerturbationRep::apply_to_matrix(const CMatrix& B) const {
    CMatrix Y = CMatrix::Zero(B.rows(), B.cols());
    for (const auto& pr : pairs) {
        const Eigen::RowVectorXcd coeffs = pr.functional.transpose() * B;
        Y.noalias() += pr.vector * coeffs;
    }
    return Y;
}

CMatrix PerturbationRep::matrix() const {
    const Index d = ambient_dim();
    CMatrix F = CMatrix::Zero(d, d);
    for (const auto& pr : pairs) F.noalias() += pr.vector * pr.functional.transpose();
    return F;
}

OperatorRep PerturbationRep::materialize(const OperatorRep& base) const {
    if (base.dim() != ambient_dim())
        throw InvalidSpec("materialize: base dimension mismatch");
    return OperatorRep::dense(base.matrix() + matrix());
}

PerturbationRep PerturbationRep::add(const PerturbationRep& other) const {
    if (other.ambient_dim() != ambient_dim())
        throw InvalidSpec("add: dimension mismatch");
    PerturbationRep p;
    p.pairs = pairs;
    p.pairs.insert(p.pairs.end(), other.pairs.begin(), other.pairs.end());
    p.norm = perturbation_norm(p.pairs);
    return p;
}

Index PerturbationRep::numerical_rank(double rel_cut) const {
    const Index r = static_cast<Index>(pairs.size());
    const Index d = ambient_dim();
    CMatrix V(d, r), C(d, r);
    for (Index i = 0; i < r; ++i) {
        V.col(i) = pairs[static_cast<size_t>(i)].vector;
        C.col(i) = pairs[static_cast<size_t>(i)].functional;
    }
    Eigen::HouseholderQR<CMatrix> qv(V), qc(C);
    const CMatrix Rv = qv.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const CMatrix Rc = qc.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const auto sv = Eigen::JacobiSVD<CMatrix>(Rv * Rc.transpose()).singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_cut * sv(0)) ++rank;
    return rank;
}

}  // namespace aihs
