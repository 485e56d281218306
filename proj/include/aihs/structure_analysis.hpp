// Case-analysis toolkit: orbit minimality with leave-one-out distances,
// the decreasing range chain Y_j = range(T^j) and its stabilization, invariant
// subspaces spanned by eigenvectors, and contour-integral spectral projections.

#pragma once

#include <optional>
#include <vector>

#include "aihs/halfspace.hpp"
#include "aihs/operator_core.hpp"

namespace aihs {

struct OrbitReport {
    bool minimal = false;
    std::optional<Index> failing_index;  // smallest p with T^p z in span of the others
    std::vector<double> distances;       // dist(T^p z, span of other orbit vectors)
    std::vector<double> orbit_norms;     // ||T^p z||
    std::optional<Index> collapsed_at;   // first p with ||T^p z|| at the floor
    // residual of T^p z against the span of strictly later orbit vectors,
    // reported at the failing index
    std::optional<double> later_span_residual;
};

struct OrbitOptions {
    double delta = 1e-6;        // relative distance threshold
    double norm_floor = 1e-280; // orbit-collapse floor
};

// Distances via the Gram matrix of the normalized orbit; the Schur
// complement route handles rank-deficient orbits. K + 1 vectors are formed
// (powers 0..K), so K <= D is required.
OrbitReport orbit_minimality(const OperatorRep& T, const CVector& z, Index K,
                             const OrbitOptions& opts = {});

struct ChainReport {
    std::vector<Index> ranks;    // rank of T^j, j = 0, 1, ...
    std::vector<Index> codims;   // D - rank
    std::optional<Index> stabilized_at;  // first j with rank(T^{j+1}) == rank(T^j)
    bool degenerate = false;     // chain stabilized at the zero space
    bool truncation_artifact = false;  // monotone rank loss driven by the boundary row
    std::optional<OperatorRep> restriction;  // T compressed to Y_{j*}
    double restriction_sigma_min = 0.0;      // certifies the adjoint injective
};

struct ChainOptions {
    Index max_steps = 32;
    double rank_cut = 1e-10;  // relative
};

ChainReport dense_range_chain(const OperatorRep& T, const ChainOptions& opts = {});

// Span of the selected eigenpairs as an invariant subspace. Requires at
// least 2 selected and at least 2 of the truncation's eigenvalues withheld;
// every pair must satisfy ||T v - lambda v|| <= tol ||v||.
HalfSpaceRep eigen_halfspace(const OperatorRep& T,
                             const std::vector<std::pair<Complex, CVector>>& eigen_data,
                             double tol = 1e-8);

// Pairings of the adjoint's eigenvectors against the supplied eigenvectors,
// row i = adjoint eigenvector matched to lambda_i, column j = v_j, both
// normalized. Across distinct eigenvalues the pairing cancels exactly, but
// near-degenerate eigenvalues degrade the cancellation at truncation, so
// the matrix is reported rather than asserted.
Eigen::MatrixXd eigen_cross_pairing(const OperatorRep& T,
                                    const std::vector<std::pair<Complex, CVector>>& eigen_data);

struct RieszData {
    Complex center;
    double radius = 0.0;
    Index nodes = 0;  // final node count after convergence doubling
    CMatrix P;
    double idempotency = 0.0;   // ||P^2 - P||
    double commutation = 0.0;   // ||P T - T P||
    std::optional<double> partition;  // ||sum P_i - I|| when a family is checked
};

struct RieszOptions {
    Index nodes = 64;
    Index max_nodes = 1024;
    double cauchy_tol = 1e-8;      // doubling criterion on ||P_2M - P_M||
    double spectrum_clearance = 1e-6;
    bool parallel = true;
    bool require_convergence = true;  // false: integrate at `nodes` and stop
};

// Trapezoid rule for (1/2 pi i) contour integral of the resolvent over the
// circle |z - center| = radius; node count doubles until the Cauchy
// criterion holds. ContourHitsSpectrum when an eigenvalue of the truncation
// sits within the clearance of the circle.
RieszData riesz_projection(const OperatorRep& T, Complex center, double radius,
                           const RieszOptions& opts = {});

// Covering family: every projection plus the partition residual ||sum P - I||.
std::vector<RieszData> riesz_family(const OperatorRep& T,
                                    const std::vector<std::pair<Complex, double>>& contours,
                                    const RieszOptions& opts = {});

}  // namespace aihs
