#include <doctest.h>

#include <Eigen/SVD>

#include "aihs/quasinilpotent_bridge.hpp"
#include "oracles.hpp"

using namespace aihs;

namespace {

OperatorRep jordan(Index d) {
    return OperatorRep::nilpotent(d, std::vector<double>(static_cast<size_t>(d - 1), 1.0));
}

OperatorRep chain_pair(Index d, Index break_index) {
    std::vector<double> w(static_cast<size_t>(d - 1), 1.0);
    w[static_cast<size_t>(break_index - 1)] = 0.0;
    return OperatorRep::nilpotent(d, std::move(w));
}

}  // namespace

TEST_CASE("kernel/range data from the SVD route") {
    const KernelRangeData kr = kernel_range(jordan(4));
    REQUIRE(kr.n == 1);
    REQUIRE(kr.m == 1);
    CHECK(std::abs(inner(kr.kernel_basis[0], CVector::Unit(4, 3))) == doctest::Approx(1.0));
    CHECK(std::abs(inner(kr.corange_basis[0], CVector::Unit(4, 0))) == doctest::Approx(1.0));
    CHECK(kr.kernel_residual <= 1e-12);
    CHECK(kr.corange_residual <= 1e-12);

    // invertible diagonal: no kernel
    CVector d(6);
    for (Index k = 0; k < 6; ++k) d(k) = Complex(static_cast<double>(k + 1), 0.0);
    const KernelRangeData inv = kernel_range(OperatorRep::diagonal(d));
    CHECK(inv.n == 0);
    CHECK(inv.m == 0);
    CHECK_THROWS_AS(bridge_operator(inv), NoDefect);

    // rank-2 product of 5x2 and 2x5 factors: three-dimensional kernel
    std::mt19937_64 rng(61);
    const CMatrix A = oracles::random_cmatrix(rng, 5, 2);
    const CMatrix B = oracles::random_cmatrix(rng, 2, 5);
    const KernelRangeData r2 = kernel_range(OperatorRep::dense(A * B));
    CHECK(r2.n == 3);
    CHECK(r2.m == 3);
}

TEST_CASE("bridge operator on the Jordan block gives the weighted cycle") {
    const Index d = 4;
    const OperatorRep J = jordan(d);
    const KernelRangeData kr = kernel_range(J);
    const PerturbationRep G = bridge_operator(kr);
    CHECK(G.numerical_rank() == 1);
    CHECK(G.norm == doctest::Approx(1.0));

    // T + alpha G is the cycle: determinant has modulus alpha, injective
    const double alpha = 0.05;
    std::vector<PerturbationRep::Pair> scaled = G.pairs;
    for (auto& pr : scaled) pr.functional *= alpha;
    const OperatorRep S = PerturbationRep::finite_rank(scaled).materialize(J);
    const auto sv = Eigen::JacobiSVD<CMatrix>(S.matrix()).singularValues();
    CHECK(sv(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv(sv.size() - 1) == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(std::abs(S.matrix().determinant()) == doctest::Approx(alpha).epsilon(1e-10));
}

TEST_CASE("assembly on Jordan blocks: alpha budget and sigma_min = alpha") {
    for (Index d : {4, 16, 64}) {
        const double eps = 0.2;
        const AssembleResult res = assemble_small_norm(jordan(d), eps);
        const BridgeCertificate& c = res.certificate;
        CHECK(c.n == 1);
        CHECK(c.m == 1);
        CHECK(c.alpha_g_norm < eps / 2.0);
        CHECK(std::abs(c.sigma_min_perturbed - c.alpha) <= 1e-10);
        CHECK(c.rank_F <= 2);
        CHECK(res.F.norm < eps);
        CHECK(c.hypothesis.find("structural") == 0);
        // the cycle is invertible: no adjoint-side growth at 0, so the
        // rank-one step is reported as out of reach, not faked
        CHECK(!c.f0_produced);
        CHECK(c.f0_note.find("BranchUnsupported") == 0);
    }
}

TEST_CASE("invertible operators fail the quasinilpotence hypothesis") {
    CVector d(8);
    for (Index k = 0; k < 8; ++k) d(k) = Complex(1.0 + static_cast<double>(k), 0.0);
    CHECK_THROWS_AS(assemble_small_norm(OperatorRep::diagonal(d), 0.2), HypothesisFailed);
}

TEST_CASE("untagged matrices with tiny well-conditioned spectra pass the radius proxy") {
    // Computed eigenvalues of a defective nilpotent matrix scatter like
    // eps^(1/D), so the numerical radius proxy needs instances whose tiny
    // eigenvalues are well conditioned: 2x2 blocks [[0,1],[delta^2,0]] have
    // exact spectrum {-delta, +delta}, plus one genuine zero block so that
    // 0 is an eigenvalue of both sides.
    const Index d = 12;
    const double delta = 1e-7;
    CMatrix m = CMatrix::Zero(d, d);
    m(0, 1) = 1.0;  // zero block: kernel e_2-direction, corange e_1
    for (Index b = 2; b < d; b += 2) {
        m(b, b + 1) = 1.0;
        m(b + 1, b) = delta * delta;
    }
    const AssembleResult res = assemble_small_norm(OperatorRep::dense(m), 0.2);
    CHECK(res.certificate.hypothesis.find("numerical") == 0);
    CHECK(res.certificate.alpha_g_norm < 0.1);
    CHECK(res.certificate.n >= 1);

    // the same blocks with visible eigenvalues are rejected
    CMatrix loud = m;
    for (Index b = 2; b < d; b += 2) loud(b + 1, b) = 1e-3;
    CHECK_THROWS_AS(assemble_small_norm(OperatorRep::dense(loud), 0.2), HypothesisFailed);
}

TEST_CASE("declared asymmetric data drives the m < n branch end to end") {
    const Index d = 32;
    const Index brk = 28;  // long cyclable chain + short chain keeping 0
    const OperatorRep T = chain_pair(d, brk);

    // structural declaration: both chain ends are kernel vectors, only the
    // long chain's head is declared as corange
    std::vector<CVector> kernel{CVector::Unit(d, brk - 1), CVector::Unit(d, d - 1)};
    std::vector<CVector> corange{CVector::Unit(d, 0)};
    const KernelRangeData kr = kernel_range_declared(T, kernel, corange);
    CHECK(kr.n == 2);
    CHECK(kr.m == 1);

    const PerturbationRep G = bridge_operator(kr);
    CHECK(G.numerical_rank() == 1);

    AssembleOptions opts;
    opts.schedule = ApproachSchedule{1.0, 0.25, 4};
    const double eps = 0.2;
    const AssembleResult res = assemble_small_norm(T, kr, eps, opts);
    const BridgeCertificate& c = res.certificate;

    CHECK(!c.n_le_m);
    CHECK(c.alpha_g_norm < eps / 2.0);
    // the truncation keeps exactly n - m = 1 defective direction; past it
    // the spectrum is bounded below by alpha
    CHECK(c.sigma_min_perturbed <= 1e-12);
    CHECK(c.sigma_min_adjusted >= c.alpha / 2.0);
    // this branch is our own machinery: the rank-one step must land
    REQUIRE(c.f0_produced);
    CHECK(c.f0_norm < eps / 2.0);
    CHECK(res.F.norm < eps);
    CHECK(c.rank_F <= std::min(c.n, c.m) + 1);
    REQUIRE(res.f0_detail.has_value());
    CHECK(res.f0_detail->invariance <= 1e-8);
    CHECK(res.f0_detail->max_unit_pairing_error <= 1e-8);
}

TEST_CASE("declared data is validated") {
    const OperatorRep T = chain_pair(16, 8);
    // e_0 is not a kernel vector of the chain pair
    CHECK_THROWS_AS(
        kernel_range_declared(T, {CVector::Unit(16, 0)}, {CVector::Unit(16, 0)}),
        InvalidSpec);
    // non-orthonormal basis
    CVector v = CVector::Unit(16, 7) * 2.0;
    CHECK_THROWS_AS(kernel_range_declared(T, {v}, {CVector::Unit(16, 0)}), InvalidSpec);
}
