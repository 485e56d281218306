// Finite analogue of the dual-system selection: pick a well-conditioned
// subsequence of the normalized functionals (x*_n) and construct bounded
// vectors (x_n) with x*_i(x_j) = delta_ij under the bilinear pairing. The
// duals are the minimum-norm solution, which keeps the bound M = max ||x_n||
// small for the epsilon budget downstream.

#pragma once

#include <vector>

#include "aihs/resolvent_family.hpp"

namespace aihs {

struct BiorthogonalSystem {
    std::vector<Index> indices;     // positions in the originating family
    std::vector<CVector> x_stars;   // selected functionals (rows of S)
    std::vector<CVector> x_duals;   // x_n, columns of the pseudoinverse
    double gram_cond = 0.0;         // cond of the Hermitian Gram S S^H
    double m_bound = 0.0;           // max ||x_n||
    double max_pairing_residual = 0.0;  // max |x*_i(x_j) - delta_ij|

    Index size() const { return static_cast<Index>(indices.size()); }
};

struct SelectionOptions {
    double kappa_max = 1e3;    // Gram condition cap
    double gamma_growth = 2.0; // require ||h*_n|| >= gamma * last accepted
};

// Greedy scan in family order: accept n when the Gram condition of the
// augmented set stays within kappa_max and the norm gate passes. Throws
// TooFewSelected when fewer than 2 survive.
std::vector<Index> select_subsequence(const ResolventFamily& fam, const SelectionOptions& opts = {});

struct DualOptions {
    double min_singular_value = 1e-10;  // independence cut for the functionals
    double tol_biorthogonality = 1e-8;
};

// Minimum-norm duals for explicit functionals. RankDeficient when the
// coordinate matrix of the functionals falls below the independence cut.
BiorthogonalSystem dual_system(const std::vector<CVector>& x_stars, Index dim,
                               const DualOptions& opts = {});

// Convenience: select within fam, then build duals for the selected rows.
BiorthogonalSystem biorthogonalize(const ResolventFamily& fam,
                                   const SelectionOptions& sel = {},
                                   const DualOptions& dual = {});

}  // namespace aihs
