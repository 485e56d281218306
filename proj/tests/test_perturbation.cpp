#include <doctest.h>

#include <Eigen/SVD>

#include "aihs/perturbation.hpp"
#include "aihs/zoo.hpp"
#include "oracles.hpp"

using namespace aihs;

namespace {

OperatorRep shift(Index d) {
    return OperatorRep::forward_shift(d, std::vector<double>(static_cast<size_t>(d - 1), 1.0));
}

}  // namespace

TEST_CASE("perturbation representation: norms, rank, budget") {
    std::mt19937_64 rng(51);
    const Index d = 80;
    const CVector e = oracles::random_cvector(rng, d);
    const CVector f = oracles::random_cvector(rng, d);
    const PerturbationRep F = PerturbationRep::rank_one(e, f);
    CHECK(F.norm == doctest::Approx(e.norm() * f.norm()).epsilon(1e-10));
    CHECK(F.numerical_rank() == 1);

    // finite rank: norm against the materialized SVD
    std::vector<PerturbationRep::Pair> pairs;
    for (int i = 0; i < 3; ++i)
        pairs.push_back({oracles::random_cvector(rng, d), oracles::random_cvector(rng, d)});
    const PerturbationRep G = PerturbationRep::finite_rank(pairs);
    const double svd_norm = Eigen::JacobiSVD<CMatrix>(G.matrix()).singularValues()(0);
    CHECK(G.norm == doctest::Approx(svd_norm).epsilon(1e-10));
    CHECK(G.numerical_rank() == 3);

    CHECK_THROWS_AS(PerturbationRep::rank_one(e, f, F.norm / 2.0), BudgetInfeasible);
}

TEST_CASE("defect-one construction on the shift scenario") {
    const Index d = 1024;
    const OperatorRep T = shift(d);
    CVector e(d);
    for (Index k = 0; k < d; ++k) e(k) = std::pow(static_cast<double>(k + 1), -0.75);
    e /= e.norm();
    const ResolventFamily fam = build_family(T, Complex(1.0, 0.0), {1.0, 0.25, 6}, e);
    const HalfSpaceRep Z = preannihilator(fam.x_stars, d);

    const DefectOneResult res = defect_one_construction(T, fam, Z);
    CHECK(!res.already_invariant);
    CHECK(res.four_term_max <= 1e-8);
    CHECK(res.invariance <= 1e-8);
    CHECK(res.defect.defect <= 1);
    CHECK(res.defect.gap >= 1e4);

    // the four-term identity expanded by matrix arithmetic at small D
    const Index ds = 64;
    const OperatorRep Ts = shift(ds);
    CVector es = e.head(ds);
    es /= es.norm();
    const ResolventFamily fs = build_family(Ts, Complex(1.0, 0.0), {1.0, 0.25, 4}, es);
    const HalfSpaceRep Zs = preannihilator(fs.x_stars, ds);
    const DefectOneResult rs = defect_one_construction(Ts, fs, Zs);
    REQUIRE(!rs.already_invariant);
    for (Index n = 0; n < fs.size(); ++n) {
        const CVector& h = fs.h_stars[static_cast<size_t>(n)];
        for (Index j = 0; j < Zs.basis.cols(); ++j) {
            const CVector z = Zs.basis.col(j);
            const Complex alpha_z = pair(*rs.alpha, z);
            const Complex lhs = pair(h, CVector(Ts.apply(z) - alpha_z * (*rs.f)));
            // h*_n(T z) = lambda_n h*_n(z) - e*(z), so everything cancels
            CHECK(std::abs(lhs) <= 1e-10);
        }
    }
}

TEST_CASE("already-invariant branch fires when Z sits inside ker e*") {
    // diagonal operator, functionals supported on coordinates {2, 4},
    // e* supported there as well: the pre-annihilator avoids them entirely
    const Index d = 32;
    CVector dg(d);
    for (Index k = 0; k < d; ++k) dg(k) = Complex(1.0 + 0.1 * static_cast<double>(k), 0.0);
    const OperatorRep T = OperatorRep::diagonal(dg);

    ResolventFamily fam;
    fam.x_stars = {CVector::Unit(d, 2), CVector::Unit(d, 4)};
    fam.norms = {1.0, 1.0};
    fam.h_stars = fam.x_stars;
    fam.lambdas = {Complex(2.0, 0.0), Complex(3.0, 0.0)};
    fam.inveq_residuals = {0.0, 0.0};
    CVector estar = CVector::Zero(d);
    estar(2) = estar(4) = 1.0 / std::sqrt(2.0);
    fam.e_star = estar;

    const HalfSpaceRep Z = preannihilator(fam.x_stars, d);
    const DefectOneResult res = defect_one_construction(T, fam, Z);
    CHECK(res.already_invariant);
    CHECK(res.invariance <= 1e-8);
    CHECK(res.defect.defect == 0);
}

TEST_CASE("small-norm rank-one construction on the diagonal ladder") {
    const Index d = 1024;
    const OperatorRep T = zoo_build("diagonal_ladder", {d, 0, {{"ratio", 0.25}}});
    const CVector e = named_estar_profile("geom_half", d, 0);
    const ResolventFamily fam = build_family(T, Complex(1.0, 0.0), {1.0, 0.25, 10}, e);

    SelectionOptions sel;
    sel.kappa_max = 2e3;
    sel.gamma_growth = 1.5;
    const BiorthogonalSystem bio = biorthogonalize(fam, sel);
    REQUIRE(bio.size() >= 2);
    CHECK(bio.max_pairing_residual <= 1e-8);

    const double eps = 0.1;
    const SmallNormResult res = small_norm_rank_one(T, fam, bio, eps);

    // (a) the norm budget, including the full chain of inequalities
    CHECK(res.F.norm < eps);
    CHECK(res.F.norm <= fam.e_star.norm() * res.f.norm() * (1.0 + 1e-12));
    CHECK(res.tail_sum < eps / bio.m_bound);
    double chain = 0.0;
    for (Index i : res.tail) {
        const Index fi = bio.indices[static_cast<size_t>(i)];
        chain += bio.x_duals[static_cast<size_t>(i)].norm() / fam.norms[static_cast<size_t>(fi)];
    }
    CHECK(res.f.norm() <= chain * (1.0 + 1e-12));
    CHECK(chain <= bio.m_bound * res.tail_sum * (1.0 + 1e-12));

    // (b) unit pairing on every selected functional
    CHECK(res.max_unit_pairing_error <= 1e-8);

    // (c) invariance of the pre-annihilator
    CHECK(res.invariance <= 1e-8);
    CHECK(res.Z.annihilation_residual() <= 1e-10);

    // the tail keeps at least two functionals: still a proxy half-space
    CHECK(res.tail.size() >= 2);
    CHECK(res.Z.halfspace_proxy_flag);

    // defect certificate for T itself on Z
    CHECK(defect_estimate(T, res.Z).defect <= 1);
}

TEST_CASE("small-norm budget edge cases") {
    const Index d = 256;
    const OperatorRep T = zoo_build("diagonal_ladder", {d, 0, {{"ratio", 0.25}}});
    const CVector e = named_estar_profile("geom_half", d, 0);
    const ResolventFamily fam = build_family(T, Complex(1.0, 0.0), {1.0, 0.25, 8}, e);
    SelectionOptions sel;
    sel.kappa_max = 2e3;
    sel.gamma_growth = 1.5;
    const BiorthogonalSystem bio = biorthogonalize(fam, sel);

    // generous budget: every selected index stays in the tail
    double full_sum = 0.0;
    for (Index i = 0; i < bio.size(); ++i)
        full_sum += 1.0 / fam.norms[static_cast<size_t>(bio.indices[static_cast<size_t>(i)])];
    const double generous = 10.0 * bio.m_bound * full_sum;
    const SmallNormResult all = small_norm_rank_one(T, fam, bio, generous);
    CHECK(all.tail.size() == static_cast<size_t>(bio.size()));

    // impossible budget
    CHECK_THROWS_AS(small_norm_rank_one(T, fam, bio, 1e-16), BudgetInfeasible);
    try {
        small_norm_rank_one(T, fam, bio, 1e-16);
    } catch (const BudgetInfeasible& e) {
        CHECK(e.achievable_eps > 0.0);
    }

    // unnormalized e* is rejected
    ResolventFamily bad = fam;
    bad.e_star *= 2.0;
    CHECK_THROWS_AS(small_norm_rank_one(T, bad, bio, 0.1), InvalidSpec);
}
