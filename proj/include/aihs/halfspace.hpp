// Pre-annihilators, defect estimation and the defect <-> rank-one
// perturbation equivalence. A HalfSpaceRep carries the defining functionals
// together with an orthonormal basis of the subspace they annihilate and an
// orthonormal basis of its complement; at truncation, "half-space" is a
// proxy (N defining functionals, N << D) recorded by halfspace_proxy_flag.

#pragma once

#include <vector>

#include "aihs/operator_core.hpp"
#include "aihs/perturbation_rep.hpp"

namespace aihs {

struct HalfSpaceRep {
    std::vector<CVector> defining_functionals;
    CMatrix basis;       // D x dim, orthonormal columns, f(b) = 0 for all f
    CMatrix complement;  // D x codim, orthonormal columns spanning the rest
    Index dim = 0;
    Index codim_in_truncation = 0;
    bool halfspace_proxy_flag = false;  // set when codim <= D/8 stands in for "infinite"

    Index ambient_dim() const { return basis.rows(); }
    // max |f_i(b_j)| over functionals and basis columns
    double annihilation_residual() const;
};

struct PreannihilatorOptions {
    double rank_cut = 1e-10;  // relative cut for dependent functionals
};

// Basis of {x : f(x) = 0 for all supplied f}. Dependent functionals reduce
// the codimension (rank is detected, not assumed). An empty list yields the
// whole space.
HalfSpaceRep preannihilator(const std::vector<CVector>& functionals, Index dim,
                            const PreannihilatorOptions& opts = {});

// Subspace given by a spanning set instead of functionals; the defining
// functionals are synthesized so preannihilator(functionals) == span.
HalfSpaceRep halfspace_from_span(const std::vector<CVector>& span_vectors, Index dim);

struct DefectReport {
    Index defect = 0;
    std::vector<double> residual_spectrum;  // singular values of (I - P_Y) T B_Y
    double threshold = 0.0;
    double gap = 0.0;  // sigma_1 / sigma_2 when at least two values exist
};

struct DefectOptions {
    double rel_cut = 1e-8;   // sigma cut at rel_cut * sigma_1 ...
    double abs_cut = 1e-10;  // ... floored by abs_cut
};

// Numerical rank of the out-of-subspace compression (I - P_Y) T B_Y.
DefectReport defect_estimate(const OperatorRep& T, const HalfSpaceRep& Y,
                             const DefectOptions& opts = {});

// max over basis z and functionals h of |h(Az)| / (||h|| ||Az|| + floor).
double invariance_residual(const OperatorRep& A, const HalfSpaceRep& Z);

// Same residual for A = T + F without materializing the sum.
double invariance_residual(const OperatorRep& T, const PerturbationRep& F,
                           const HalfSpaceRep& Z);

// Rank-one realization of defect one: given f with T Y <= Y + span{f} and a
// global functional c with T y - c(y) f in Y, returns F = -c (x) f so that
// Y is invariant for T + F. DefectMismatch when the precondition residual
// exceeds tol.
PerturbationRep perturbation_from_defect(const OperatorRep& T, const HalfSpaceRep& Y,
                                         const CVector& f, const CVector& c,
                                         double tol = 1e-8);

}  // namespace aihs
