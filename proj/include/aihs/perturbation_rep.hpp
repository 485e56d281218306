// Finite-rank perturbations as functional/vector pairs:
//   F x = sum_i c_i(x) v_i   (bilinear pairing, no conjugation).
// Rank one is the common case F = c (x) v with ||F|| = ||c|| ||v||.

#pragma once

#include <optional>
#include <vector>

#include "aihs/errors.hpp"
#include "aihs/operator_core.hpp"
#include "aihs/types.hpp"

namespace aihs {

struct PerturbationRep {
    struct Pair {
        CVector functional;
        CVector vector;
    };

    std::vector<Pair> pairs;  // size 1 => rank one
    double norm = 0.0;
    std::optional<double> epsilon_budget;

    static PerturbationRep zero(Index dim);
    static PerturbationRep rank_one(CVector functional, CVector vector,
                                    std::optional<double> budget = std::nullopt);
    static PerturbationRep finite_rank(std::vector<Pair> pairs,
                                       std::optional<double> budget = std::nullopt);

    bool is_zero() const;
    Index ambient_dim() const;

    CVector apply(const CVector& x) const;
    CMatrix apply_to_matrix(const CMatrix& B) const;

    OperatorRep materialize(const OperatorRep& base) const;  // base + F, dense
    CMatrix matrix() const;                                  // F alone

    // Sum as a single finite-rank perturbation (pairs concatenated).
    PerturbationRep add(const PerturbationRep& other) const;

    // Numerical rank of the materialized F at the given relative cut.
    Index numerical_rank(double rel_cut = 1e-10) const;
};

// Largest singular value of F: exact product for rank one, small SVD of the
// reduced cross matrix otherwise (never materializes the D x D form).
double perturbation_norm(const std::vector<PerturbationRep::Pair>& pairs);

}  // namespace aihs
