// Residual-case machinery for quasinilpotent operators with 0 an eigenvalue
// of both T and its adjoint: kernel/corange bases, the bridge operator
// G(f_i) = g_i in both case branches, the alpha scaling fitting eps/2, and
// the assembly F = alpha G + F_0.
//
// At truncation, a square matrix always has dim ker = codim range, so
// asymmetric (n, m) data — the interesting branches — must be declared
// structurally: KernelRangeData can be built directly from bases that pass
// the residual checks, with n and m the declared counts.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aihs/perturbation.hpp"

namespace aihs {

struct KernelRangeData {
    std::vector<CVector> kernel_basis;   // f_1..f_n, ||T f_i|| small
    std::vector<CVector> corange_basis;  // g_1..g_m, ||g_i^T T|| small
    Index n = 0;
    Index m = 0;
    double tol_rank = 0.0;
    double kernel_residual = 0.0;   // max ||T f_i||
    double corange_residual = 0.0;  // max ||T^T g_i||
};

struct KernelRangeOptions {
    double tol_rank = 1e-8;  // relative to sigma_1
};

// SVD route: kernel = right singular vectors with sigma <= tol_rank sigma_1,
// corange = matching left singular vectors. n == m always on this route.
KernelRangeData kernel_range(const OperatorRep& T, const KernelRangeOptions& opts = {});

// Declared route for structurally asymmetric data; validates the residuals
// of every supplied basis vector against tol * ||T|| and orthonormality.
KernelRangeData kernel_range_declared(const OperatorRep& T, std::vector<CVector> kernel_basis,
                                      std::vector<CVector> corange_basis, double tol = 1e-8);

// G maps f_i -> g_i for i <= min(n, m) and annihilates the rest of the
// kernel and the orthogonal complement; realized as sum c_i (x) g_i with
// c_i the kernel-dual functionals extended by zero. NoDefect when a branch
// side is empty.
PerturbationRep bridge_operator(const KernelRangeData& kr);

struct BridgeCertificate {
    Index n = 0;
    Index m = 0;
    bool n_le_m = true;
    double alpha = 0.0;
    double alpha_g_norm = 0.0;
    double sigma_min_perturbed = 0.0;   // sigma_min(T + alpha G)
    // Smallest singular value past the declared index deficiency |n - m|;
    // the truncation keeps exactly that many defective directions, so this
    // is the honest injectivity/dense-range proxy for declared data.
    double sigma_min_adjusted = 0.0;
    bool f0_produced = false;
    double f0_norm = 0.0;
    std::string f0_note;  // set when the rank-one step is not ours to take
    Index rank_F = 0;
    std::string hypothesis;  // structural vs numerical quasinilpotence
};

struct AssembleOptions {
    KernelRangeOptions kernel;
    double quasinilpotent_radius_factor = 1e-6;  // rho(T) <= factor * ||T||
    // Family/selection parameters for the F_0 attempt (adjoint-side route).
    ApproachSchedule schedule{1.0, 0.25, 8};
    SelectionOptions selection{};
    SmallNormOptions small_norm{};
};

struct AssembleResult {
    PerturbationRep F;   // alpha G (+ F_0 when produced)
    BridgeCertificate certificate;
    std::optional<SmallNormResult> f0_detail;
};

// Computes kernel/range data for T, builds G, scales alpha so that
// ||alpha G|| < eps/2 and attempts the rank-one step on T + alpha G with
// budget eps/2 through the adjoint-side machinery (boundary point 0).
// HypothesisFailed when T is not quasinilpotent or 0 is not an eigenvalue
// of both sides; BranchUnsupported when the n <= m branch's F_0 step has no
// resolvent growth to work with (that step belongs to the T-side theory).
AssembleResult assemble_small_norm(const OperatorRep& T, double eps,
                                   const AssembleOptions& opts = {});

// Same assembly from declared kernel/range data (the asymmetric toys).
AssembleResult assemble_small_norm(const OperatorRep& T, const KernelRangeData& kr, double eps,
                                   const AssembleOptions& opts = {});

}  // namespace aihs
