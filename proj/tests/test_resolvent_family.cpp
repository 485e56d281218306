#include <doctest.h>

#include "aihs/resolvent_family.hpp"
#include "aihs/zoo.hpp"
#include "oracles.hpp"

using namespace aihs;

namespace {

OperatorRep shift(Index d) {
    return OperatorRep::forward_shift(d, std::vector<double>(static_cast<size_t>(d - 1), 1.0));
}

CVector pow34(Index d) {
    CVector v(d);
    for (Index k = 0; k < d; ++k) v(k) = std::pow(static_cast<double>(k + 1), -0.75);
    return v / v.norm();
}

}  // namespace

TEST_CASE("shift family satisfies the resolvent identity at solver accuracy") {
    const Index d = 4096;
    const OperatorRep T = shift(d);
    ApproachSchedule sched{1.0, 0.25, 6};
    const ResolventFamily fam = build_family(T, Complex(1.0, 0.0), sched, pow34(d));

    CHECK(fam.size() == 6);
    CHECK(fam.max_inveq_residual() <= 1e-8);
    for (Index n = 0; n < fam.size(); ++n) {
        CHECK(fam.x_stars[static_cast<size_t>(n)].norm() == doctest::Approx(1.0).epsilon(1e-12));
        // every h*_n matches the independent Neumann-series oracle
        const CVector oracle = oracles::backward_shift_resolvent_series(
            fam.lambdas[static_cast<size_t>(n)], fam.e_star);
        CHECK((fam.h_stars[static_cast<size_t>(n)] - oracle).norm() <= 1e-10 * oracle.norm());
        CHECK(fam.norms[static_cast<size_t>(n)] ==
              doctest::Approx(oracle.norm()).epsilon(1e-10));
    }
    // norms grow strictly along the schedule
    for (Index n = 0; n + 1 < fam.size(); ++n)
        CHECK(fam.norms[static_cast<size_t>(n + 1)] > fam.norms[static_cast<size_t>(n)]);
}

TEST_CASE("scale invariance: e* and 2 e* give identical normalized functionals") {
    const Index d = 512;
    const OperatorRep T = shift(d);
    ApproachSchedule sched{1.0, 0.25, 4};
    FamilyOptions opts;
    const CVector e = pow34(d);
    // 2 e* is not normalized; build_family takes e* as given
    const ResolventFamily f1 = build_family(T, Complex(1.0, 0.0), sched, e, opts);
    const ResolventFamily f2 = build_family(T, Complex(1.0, 0.0), sched, CVector(2.0 * e), opts);
    for (Index n = 0; n < f1.size(); ++n) {
        CHECK((f1.x_stars[static_cast<size_t>(n)] - f2.x_stars[static_cast<size_t>(n)]).norm() <=
              1e-12);
        CHECK(f2.norms[static_cast<size_t>(n)] ==
              doctest::Approx(2.0 * f1.norms[static_cast<size_t>(n)]).epsilon(1e-12));
    }
}

TEST_CASE("e* = e_1 truncates the series: h*_n = e_1 / lambda_n, no growth") {
    const Index d = 256;
    const OperatorRep T = shift(d);
    ApproachSchedule sched{1.0, 0.5, 5};
    const CVector e1 = CVector::Unit(d, 0);
    const ResolventFamily fam = build_family(T, Complex(1.0, 0.0), sched, e1);
    for (Index n = 0; n < fam.size(); ++n) {
        const Complex ln = fam.lambdas[static_cast<size_t>(n)];
        CHECK((fam.h_stars[static_cast<size_t>(n)] - e1 / ln).norm() <= 1e-13);
    }
    const GrowthDiagnostic g = growth_diagnostic(fam);
    CHECK(!g.growing);
}

TEST_CASE("exact spectrum hit raises SingularResolvent") {
    CVector d(16);
    for (Index k = 0; k < 16; ++k) d(k) = Complex(static_cast<double>(k), 0.0);
    const OperatorRep T = OperatorRep::diagonal(d);  // self-transposed
    ApproachSchedule constant{0.0, 0.5, 2};          // q = 0: lambda_n = lambda exactly
    CHECK_THROWS_AS(
        build_family(T, Complex(3.0, 0.0), constant, CVector::Ones(16).normalized()),
        SingularResolvent);
}

TEST_CASE("growth diagnostic: rate matches the oracle slope, threshold gates") {
    const Index d = 4096;
    const OperatorRep T = shift(d);
    ApproachSchedule sched{1.0, 0.25, 6};
    const ResolventFamily fam = build_family(T, Complex(1.0, 0.0), sched, pow34(d));
    const GrowthDiagnostic g = growth_diagnostic(fam);
    CHECK(g.growing);
    CHECK(g.last_first_ratio >= 10.0);

    // least-squares slope of the oracle-computed log norms
    std::vector<double> lognorms;
    for (Index n = 1; n <= 6; ++n) {
        const Complex ln(1.0 + std::pow(0.25, static_cast<double>(n)), 0.0);
        lognorms.push_back(
            std::log(oracles::backward_shift_resolvent_series(ln, fam.e_star).norm()));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lognorms.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        sx += x; sy += lognorms[i]; sxx += x * x; sxy += x * lognorms[i];
    }
    const double oracle_rate = (6 * sxy - sx * sy) / (6 * sxx - sx * sx);
    CHECK(g.rate == doctest::Approx(oracle_rate).epsilon(1e-9));
    // the ell^2 growth exponent is 3/4 in (lambda_n - 1), damped by
    // truncation saturation, so the per-step rate sits between ln(4)/4
    // and (3/4) ln 4
    CHECK(g.rate > std::log(4.0) / 4.0);
    CHECK(g.rate < 0.75 * std::log(4.0) * 1.05);

    CHECK_THROWS_AS(
        growth_diagnostic(build_family(T, Complex(1.0, 0.0), {1.0, 0.25, 1}, pow34(d))),
        FamilyTooShort);
}

TEST_CASE("select_estar prefers the power-law candidate over e_1 and 1/k") {
    const Index d = 4096;
    const OperatorRep T = shift(d);
    ApproachSchedule sched{1.0, 0.25, 6};
    CVector invk(d);
    for (Index k = 0; k < d; ++k) invk(k) = 1.0 / static_cast<double>(k + 1);
    invk /= invk.norm();
    const std::vector<CVector> cands = {CVector::Unit(d, 0), invk, pow34(d)};
    Index which = -1;
    const CVector chosen = select_estar(T, Complex(1.0, 0.0), sched, cands, {}, {}, &which);
    CHECK(which == 2);
    CHECK((chosen - pow34(d)).norm() == 0.0);

    CHECK_THROWS_AS(
        select_estar(T, Complex(1.0, 0.0), sched, {CVector::Unit(d, 0)}, {}, {}, nullptr),
        AllCandidatesBounded);
}

TEST_CASE("w*-decay diagnostic: leading coordinates of x*_n shrink for the shift family") {
    const Index d = 4096;
    const OperatorRep T = shift(d);
    const ResolventFamily fam =
        build_family(T, Complex(1.0, 0.0), {1.0, 0.25, 6}, pow34(d));
    const WstarDecayReport rep = wstar_decay_diagnostic(fam, 3);
    REQUIRE(rep.probe_coords == 3);
    for (Index k = 0; k < 3; ++k) {
        const auto& vals = rep.coordinate_values[static_cast<size_t>(k)];
        CHECK(vals.back() < vals.front());
        CHECK(rep.tail_max[static_cast<size_t>(k)] < 0.2);
    }

    // constant family x*_n = e_1: no decay
    const ResolventFamily flat =
        build_family(T, Complex(1.0, 0.0), {1.0, 0.5, 4}, CVector::Unit(d, 0));
    const WstarDecayReport frep = wstar_decay_diagnostic(flat, 2);
    CHECK(frep.coordinate_values[0].back() == doctest::Approx(1.0));

    // empty probe: empty report
    CHECK(wstar_decay_diagnostic(fam, 0).coordinate_values.empty());
}
