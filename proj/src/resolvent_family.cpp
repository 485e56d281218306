#include "aihs/resolvent_family.hpp"

#include <algorithm>
#include <cmath>

namespace aihs {

double ResolventFamily::max_inveq_residual() const {
    double m = 0.0;
    for (double r : inveq_residuals) m = std::max(m, r);
    return m;
}

ResolventFamily build_family(const OperatorRep& T, Complex lambda,
                             const ApproachSchedule& schedule, const CVector& e_star,
                             const FamilyOptions& opts) {
    const Index d = T.dim();
    if (e_star.size() != d) throw InvalidSpec("build_family: e* dimension mismatch");
    if (e_star.norm() == 0.0) throw InvalidSpec("build_family: e* must be nonzero");
    if (schedule.count < 1) throw InvalidSpec("build_family: schedule count must be >= 1");

    const OperatorRep Tstar = T.adjoint();
    const Index N = schedule.count;

    ResolventFamily fam;
    fam.boundary_point = lambda;
    fam.e_star = e_star;
    fam.lambdas.resize(static_cast<size_t>(N));
    fam.h_stars.resize(static_cast<size_t>(N));
    fam.norms.assign(static_cast<size_t>(N), 0.0);
    fam.x_stars.resize(static_cast<size_t>(N));
    fam.inveq_residuals.assign(static_cast<size_t>(N), 0.0);
    fam.solve_residuals.assign(static_cast<size_t>(N), 0.0);
    fam.truncation_tail.assign(static_cast<size_t>(N), 0.0);

    for (Index n = 0; n < N; ++n) fam.lambdas[static_cast<size_t>(n)] = schedule.lambda_n(lambda, n + 1);

    // Independent solves; slots are written per-index so the assembly order
    // is fixed regardless of thread count. Exceptions are collected and the
    // first one (by index) rethrown.
    std::vector<std::exception_ptr> errs(static_cast<size_t>(N));
#pragma omp parallel for schedule(static) if (opts.parallel)
    for (Index n = 0; n < N; ++n) {
        try {
            SolveInfo si;
            const Complex ln = fam.lambdas[static_cast<size_t>(n)];
            CVector h = resolvent_solve(Tstar, ln, e_star, opts.solve, &si);
            const double nn = h.norm();
            if (!(nn > 0.0) || !all_finite(h))
                throw ScheduleExhausted("build_family: resolvent produced a degenerate h*_n");
            CVector x = h / nn;
            // residual of T* x* = lambda x* - e*/||h*||
            const CVector r = Tstar.apply(x) - ln * x + e_star / nn;
            fam.h_stars[static_cast<size_t>(n)] = std::move(h);
            fam.norms[static_cast<size_t>(n)] = nn;
            fam.x_stars[static_cast<size_t>(n)] = std::move(x);
            fam.inveq_residuals[static_cast<size_t>(n)] = r.norm();
            fam.solve_residuals[static_cast<size_t>(n)] = si.residual_rel;
            fam.truncation_tail[static_cast<size_t>(n)] =
                std::abs(fam.h_stars[static_cast<size_t>(n)](d - 1)) / nn;
        } catch (...) {
            errs[static_cast<size_t>(n)] = std::current_exception();
        }
    }
    for (const auto& e : errs)
        if (e) std::rethrow_exception(e);

    // family invariants: distinct lambdas, residuals within tolerance
    for (Index i = 0; i < N; ++i)
        for (Index j = i + 1; j < N; ++j)
            if (fam.lambdas[static_cast<size_t>(i)] == fam.lambdas[static_cast<size_t>(j)])
                throw InvalidSpec("build_family: schedule produced coincident lambda_n");
    for (double r : fam.inveq_residuals)
        if (r > opts.tol_inveq)
            throw ScheduleExhausted("build_family: inveq residual " + std::to_string(r) +
                                    " exceeds tolerance");
    return fam;
}

GrowthDiagnostic growth_diagnostic(const ResolventFamily& fam, const GrowthOptions& opts) {
    const Index N = fam.size();
    if (N < 3) throw FamilyTooShort("growth_diagnostic: family of length >= 3 required");

    GrowthDiagnostic g;
    const Index half = (N + 1) / 2;
    bool increasing = true;
    for (Index n = N - half; n + 1 < N; ++n)
        if (!(fam.norms[static_cast<size_t>(n + 1)] > fam.norms[static_cast<size_t>(n)]))
            increasing = false;
    g.last_first_ratio = fam.norms.back() / fam.norms.front();
    g.growing = increasing && g.last_first_ratio >= opts.ratio_threshold;

    // least-squares slope of log ||h*_n|| against n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (Index n = 0; n < N; ++n) {
        const double x = static_cast<double>(n + 1);
        const double y = std::log(fam.norms[static_cast<size_t>(n)]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nn = static_cast<double>(N);
    g.rate = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return g;
}

CVector select_estar(const OperatorRep& T, Complex lambda, const ApproachSchedule& schedule,
                     const std::vector<CVector>& candidates, const FamilyOptions& opts,
                     const GrowthOptions& gopts, Index* selected_index) {
    if (candidates.empty()) throw InvalidSpec("select_estar: candidate list is empty");
    Index best = -1;
    double best_last_norm = 0.0;
    for (Index c = 0; c < static_cast<Index>(candidates.size()); ++c) {
        const ResolventFamily fam = build_family(T, lambda, schedule, candidates[static_cast<size_t>(c)], opts);
        const GrowthDiagnostic g = growth_diagnostic(fam, gopts);
        if (!g.growing) continue;
        const double last = fam.norms.back();
        if (last > best_last_norm) {  // strict: ties keep the earlier candidate
            best = c;
            best_last_norm = last;
        }
    }
    if (best < 0)
        throw AllCandidatesBounded("select_estar: no candidate family exhibits resolvent growth");
    if (selected_index) *selected_index = best;
    return candidates[static_cast<size_t>(best)];
}

WstarDecayReport wstar_decay_diagnostic(const ResolventFamily& fam, Index probe_coords) {
    WstarDecayReport rep;
    const Index N = fam.size();
    if (N == 0 || probe_coords <= 0) return rep;
    const Index d = fam.x_stars.front().size();
    rep.probe_coords = std::min(probe_coords, d);
    rep.coordinate_values.assign(static_cast<size_t>(rep.probe_coords), {});
    rep.tail_max.assign(static_cast<size_t>(rep.probe_coords), 0.0);
    const Index tail_begin = N / 2;
    for (Index k = 0; k < rep.probe_coords; ++k) {
        auto& vals = rep.coordinate_values[static_cast<size_t>(k)];
        vals.resize(static_cast<size_t>(N));
        for (Index n = 0; n < N; ++n) {
            // x*_n(e_k) under the bilinear pairing is just the coordinate
            vals[static_cast<size_t>(n)] = std::abs(fam.x_stars[static_cast<size_t>(n)](k));
            if (n >= tail_begin)
                rep.tail_max[static_cast<size_t>(k)] =
                    std::max(rep.tail_max[static_cast<size_t>(k)], vals[static_cast<size_t>(n)]);
        }
    }
    return rep;
}

}  // namespace aihs
