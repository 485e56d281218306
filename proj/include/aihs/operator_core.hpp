// Bounded operators at truncation dimension D. An OperatorRep is a D x D
// complex matrix plus an optional structure tag (shift weights, diagonal
// entries, nilpotent chain); when a tag is present the matrix is generated
// from it, applies run in O(D), and the resolvent uses the closed-form
// bidiagonal/diagonal solve instead of generic LU.
//
// Conventions (see types.hpp): the adjoint is the plain transpose, so
// (adjoint(T) f)(x) = f(T x) holds exactly under the bilinear pairing.

#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aihs/errors.hpp"
#include "aihs/types.hpp"

namespace aihs {

// e_k -> w_k e_{k+1} for k < D, e_D -> 0. Weights strictly positive.
struct ForwardShiftTag {
    std::vector<double> weights;  // length D-1
};

// e_{k+1} -> w_k e_k, e_1 -> 0. The transpose of ForwardShiftTag.
struct BackwardShiftTag {
    std::vector<double> weights;  // length D-1
};

struct DiagonalTag {
    CVector entries;
};

// Strictly triangular chain with nonnegative weights; zeros split the chain
// into Jordan-type blocks. `lower` means subdiagonal (e_k -> w_k e_{k+1}).
// Unlike the shift tags, this tag asserts the operator is genuinely
// (quasi)nilpotent as a structural fact, not just at truncation.
struct NilpotentTag {
    std::vector<double> weights;  // length D-1
    bool lower = true;
};

struct DenseTag {};

using StructureTag =
    std::variant<ForwardShiftTag, BackwardShiftTag, DiagonalTag, NilpotentTag, DenseTag>;

std::string structure_name(const StructureTag& tag);

class OperatorRep {
  public:
    static OperatorRep forward_shift(Index dim, std::vector<double> weights);
    static OperatorRep backward_shift(Index dim, std::vector<double> weights);
    static OperatorRep diagonal(CVector entries);
    static OperatorRep nilpotent(Index dim, std::vector<double> weights, bool lower = true);
    static OperatorRep dense(CMatrix matrix);

    Index dim() const { return dim_; }
    const StructureTag& structure() const { return structure_; }
    bool is_dense() const { return std::holds_alternative<DenseTag>(structure_); }

    // Dense matrix generated from the tag; materialized on first use and
    // cached (mutex-guarded, so concurrent readers are safe). Structured
    // code paths never need it.
    const CMatrix& matrix() const;

    CVector apply(const CVector& x) const;          // T x
    CVector apply_adjoint(const CVector& x) const;  // T^T x
    CMatrix apply_to_matrix(const CMatrix& B) const;          // T B, column-wise
    CMatrix apply_adjoint_to_matrix(const CMatrix& B) const;  // T^T B

    OperatorRep adjoint() const;

    // T + z S and scalar scaling, returned as dense (tags do not survive
    // generic sums).
    OperatorRep add_scaled(const OperatorRep& S, Complex z) const;

  private:
    OperatorRep(Index dim, StructureTag tag)
        : dim_(dim), structure_(std::move(tag)), cache_mutex_(std::make_shared<std::mutex>()) {}

    Index dim_ = 0;
    StructureTag structure_;
    mutable std::optional<CMatrix> matrix_;  // cache; dense ops store here eagerly
    std::shared_ptr<std::mutex> cache_mutex_;
};

struct ResolventOptions {
    double singular_factor = 1e-12;  // sigma_min >= factor * ||lambda I - A||
    double tol_solve = 1e-10;        // target relative residual
    bool check_singularity = true;
};

struct SolveInfo {
    double residual_rel = 0.0;   // ||(lambda I - A) h - b|| / ||b||
    double sigma_min_est = 0.0;  // estimated smallest singular value of lambda I - A
    int refinements = 0;
};

// Solves (lambda I - A) h = b. Closed-form substitution for shift, chain and
// diagonal tags, partial-pivot LU otherwise. Throws SingularResolvent when
// the estimated sigma_min of lambda I - A falls below the configured cut.
CVector resolvent_solve(const OperatorRep& A, Complex lambda, const CVector& b,
                        const ResolventOptions& opts = {}, SolveInfo* info = nullptr);

// Largest singular value: exact for structured tags, full SVD for D <= 512,
// power iteration on the normal equations above that (relative 1e-8).
double operator_norm(const OperatorRep& T);

// Eigenvalues of the truncation: tag entries for Diagonal, all zero for the
// nilpotent-at-truncation tags, dense solver otherwise.
CVector eigenvalues(const OperatorRep& T);

double spectral_radius(const OperatorRep& T);

bool is_structurally_quasinilpotent(const OperatorRep& T);

}  // namespace aihs
