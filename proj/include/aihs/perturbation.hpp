// The two headline constructions.
//
// defect_one_construction: from a resolvent family and Z = preannihilator of
// its functionals, either certifies T Z <= Z (already invariant) or produces
// f = T z_0 and the functional alpha = e*/e*(z_0) with F = -alpha (x) f such
// that Z is invariant for T + F and T Z <= Z + span{f} (defect one).
//
// small_norm_rank_one: given a biorthogonal system over the family, selects
// a tail with sum 1/||h*_n|| < eps / M, sets f = sum x_n / ||h*_n|| and
// F = e* (x) f, so that ||F|| <= eps, h*_n(f) = 1 on the tail, and the
// pre-annihilator Z of the tail functionals is invariant for T + F.

#pragma once

#include <optional>
#include <vector>

#include "aihs/biorthogonal.hpp"
#include "aihs/halfspace.hpp"
#include "aihs/perturbation_rep.hpp"
#include "aihs/resolvent_family.hpp"

namespace aihs {

struct DefectOneResult {
    bool already_invariant = false;
    std::optional<CVector> f;       // T z_0 (non-invariant branch)
    std::optional<CVector> alpha;   // e* / e*(z_0)
    std::optional<PerturbationRep> F;
    Index z0_index = -1;            // basis column realizing max |e*(z)|
    double max_estar_on_basis = 0.0;
    double invariance = 0.0;        // residual of (T+F) Z <= Z (or T Z <= Z)
    double four_term_max = 0.0;     // max_n,z |h*_n(T z - alpha_z f)|
    DefectReport defect;            // defect estimate of T on Z
};

struct DefectOneOptions {
    double tol_invariant = 1e-10;  // |e*(z)| <= tol ||z|| => kernel branch
    double tol_residual = 1e-8;
    DefectOptions defect;
};

DefectOneResult defect_one_construction(const OperatorRep& T, const ResolventFamily& fam,
                                        const HalfSpaceRep& Z,
                                        const DefectOneOptions& opts = {});

struct SmallNormResult {
    PerturbationRep F{};            // e* (x) f
    HalfSpaceRep Z;                 // preannihilator of the tail functionals
    CVector f;
    std::vector<Index> tail;        // positions into bio.indices
    double tail_sum = 0.0;          // sum of 1/||h*_n|| over the tail
    double budget_rhs = 0.0;        // eps / M
    double max_unit_pairing_error = 0.0;  // max_n |h*_n(f) - 1|
    double invariance = 0.0;
};

struct SmallNormOptions {
    Index min_tail = 2;            // keep at least this many functionals
    double tol_pairing = 1e-8;
    double tol_estar_normalized = 1e-12;
};

// Requires ||e*|| = 1. BudgetInfeasible reports the achievable epsilon when
// even the shortest admissible tail violates the budget.
SmallNormResult small_norm_rank_one(const OperatorRep& T, const ResolventFamily& fam,
                                    const BiorthogonalSystem& bio, double eps,
                                    const SmallNormOptions& opts = {});

}  // namespace aihs
