// The resolvent family h*_n = (lambda_n I - T*)^{-1} e* built along an
// approach schedule lambda_n = lambda (1 + q r^n), with the normalized
// functionals x*_n = h*_n / ||h*_n||, the residuals of the identity
//   T* x*_n = lambda_n x*_n - e* / ||h*_n||,
// and growth diagnostics for ||h*_n||.

#pragma once

#include <vector>

#include "aihs/operator_core.hpp"

namespace aihs {

struct ApproachSchedule {
    double q = 1.0;
    double r = 0.25;
    Index count = 6;

    Complex lambda_n(Complex lambda, Index n) const {  // n = 1, 2, ...
        const double off = q * std::pow(r, static_cast<double>(n));
        return lambda == Complex(0.0, 0.0) ? Complex(off, 0.0) : lambda * (1.0 + off);
    }
};

struct ResolventFamily {
    Complex boundary_point;
    std::vector<Complex> lambdas;
    std::vector<CVector> h_stars;
    std::vector<double> norms;        // ||h*_n||, strictly positive
    std::vector<CVector> x_stars;     // h*_n / ||h*_n||
    CVector e_star;
    std::vector<double> inveq_residuals;
    std::vector<double> solve_residuals;    // relative solver residuals
    std::vector<double> truncation_tail;    // |last coordinate| / norm, per n

    Index size() const { return static_cast<Index>(lambdas.size()); }
    double max_inveq_residual() const;
};

struct FamilyOptions {
    double tol_inveq = 1e-8;
    ResolventOptions solve;
    bool parallel = true;  // the n solves are independent
};

// Builds the family for T (solves run against T* = adjoint). Each lambda_n
// must stay clear of the truncated spectrum of T*; SingularResolvent
// propagates from the solver, ScheduleExhausted reports a short family.
ResolventFamily build_family(const OperatorRep& T, Complex lambda,
                             const ApproachSchedule& schedule, const CVector& e_star,
                             const FamilyOptions& opts = {});

struct GrowthDiagnostic {
    bool growing = false;
    double rate = 0.0;          // least-squares slope of log ||h*_n|| vs n
    double last_first_ratio = 0.0;
};

struct GrowthOptions {
    double ratio_threshold = 10.0;  // pragmatic stand-in for "-> infinity"
};

// growing == true iff the final ceil(N/2) norms are strictly increasing and
// the last/first ratio clears the threshold. Requires a family of length >= 3.
GrowthDiagnostic growth_diagnostic(const ResolventFamily& fam, const GrowthOptions& opts = {});

// Picks the candidate functional whose family norm at the last schedule
// point is largest, among candidates whose family passes growth_diagnostic;
// ties break by list order. AllCandidatesBounded if none grows.
CVector select_estar(const OperatorRep& T, Complex lambda, const ApproachSchedule& schedule,
                     const std::vector<CVector>& candidates, const FamilyOptions& opts = {},
                     const GrowthOptions& gopts = {}, Index* selected_index = nullptr);

// Finite-D stand-in for w*-null behaviour: per-coordinate magnitudes
// |x*_n(e_k)| for the first probe_coords coordinates, plus the tail maximum
// over the second half of the family. Diagnostic only; never gates.
struct WstarDecayReport {
    Index probe_coords = 0;
    std::vector<std::vector<double>> coordinate_values;  // [coord][n]
    std::vector<double> tail_max;                        // per coordinate
};

WstarDecayReport wstar_decay_diagnostic(const ResolventFamily& fam, Index probe_coords);

}  // namespace aihs
