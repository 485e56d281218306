#include "aihs/zoo.hpp"

#include <cmath>
#include <numbers>

namespace aihs {

namespace {

constexpr double kCircleTol = 1e-9;

bool on_unit_circle(Complex z) { return std::abs(std::abs(z) - 1.0) <= kCircleTol; }

std::vector<double> unit_weights(Index dim) {
    return std::vector<double>(static_cast<size_t>(dim - 1), 1.0);
}

std::uint64_t mix(std::uint64_t& state) {
    // splitmix64
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(mix(state) >> 11) * 0x1.0p-53;
}

}  // namespace

double deterministic_gaussian(std::uint64_t& state) {
    // Box-Muller on fully specified uniforms
    double u1 = uniform01(state);
    while (u1 <= 0.0) u1 = uniform01(state);
    const double u2 = uniform01(state);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CVector named_estar_profile(const std::string& name, Index dim, std::uint64_t seed) {
    CVector v(dim);
    if (name == "e1") {
        v.setZero();
        v(0) = 1.0;
    } else if (name == "invk") {
        for (Index k = 0; k < dim; ++k) v(k) = 1.0 / static_cast<double>(k + 1);
    } else if (name == "pow34") {
        for (Index k = 0; k < dim; ++k) v(k) = std::pow(static_cast<double>(k + 1), -0.75);
    } else if (name == "uniform") {
        v.setConstant(1.0);
    } else if (name == "geom_half") {
        // r^{k/2} with r = 1/4, i.e. 2^{-k}
        for (Index k = 0; k < dim; ++k) v(k) = std::ldexp(1.0, -static_cast<int>(std::min<Index>(k, 1070)));
    } else if (name == "gaussian") {
        std::uint64_t state = seed ^ 0xA1C5ull;
        for (Index k = 0; k < dim; ++k) v(k) = deterministic_gaussian(state);
    } else {
        throw InvalidSpec("unknown e* profile '" + name + "'");
    }
    const double n = v.norm();
    if (n == 0.0) throw InvalidSpec("e* profile is zero");
    return v / n;
}

std::vector<CVector> standard_estar_candidates(Index dim, std::uint64_t seed) {
    return {named_estar_profile("e1", dim, seed), named_estar_profile("invk", dim, seed),
            named_estar_profile("pow34", dim, seed), named_estar_profile("uniform", dim, seed),
            named_estar_profile("gaussian", dim, seed)};
}

const std::vector<ZooEntry>& zoo_entries() {
    static const std::vector<ZooEntry> entries = [] {
        std::vector<ZooEntry> z;

        z.push_back(ZooEntry{
            "forward_shift_unweighted",
            "unilateral forward shift, unit weights",
            "no eigenvalues; spectrum = closed unit disk; adjoint (backward shift) has "
            "point spectrum = open unit disk, so the unit circle is boundary non-eigenvalue",
            [](const ZooParams& p) { return OperatorRep::forward_shift(p.dim, unit_weights(p.dim)); },
            [](Complex lambda, const ZooParams&) -> std::optional<bool> {
                return on_unit_circle(lambda);
            }});

        z.push_back(ZooEntry{
            "backward_shift_unweighted",
            "unilateral backward shift, unit weights",
            "point spectrum = open unit disk; adjoint (forward shift) has no eigenvalues; "
            "every unit-circle point is boundary non-eigenvalue for the adjoint",
            [](const ZooParams& p) { return OperatorRep::backward_shift(p.dim, unit_weights(p.dim)); },
            [](Complex lambda, const ZooParams&) -> std::optional<bool> {
                return on_unit_circle(lambda);
            }});

        z.push_back(ZooEntry{
            "diagonal_ladder",
            "diagonal d_k = 1 - r^k climbing to the boundary point 1",
            "self-transposed; spectrum = {d_k} with accumulation point 1; the point 1 is a "
            "boundary non-eigenvalue",
            [](const ZooParams& p) {
                const double r = p.get("ratio", 0.25);
                CVector d(p.dim);
                for (Index k = 0; k < p.dim; ++k)
                    d(k) = 1.0 - std::pow(r, static_cast<double>(k + 1));
                return OperatorRep::diagonal(d);
            },
            [](Complex lambda, const ZooParams&) -> std::optional<bool> {
                return std::abs(lambda - Complex(1.0, 0.0)) <= kCircleTol;
            }});

        z.push_back(ZooEntry{
            "identity",
            "identity operator",
            "spectrum = point spectrum = {1}; no boundary non-eigenvalue exists",
            [](const ZooParams& p) {
                return OperatorRep::diagonal(CVector::Constant(p.dim, Complex(1.0, 0.0)));
            },
            [](Complex, const ZooParams&) -> std::optional<bool> { return false; }});

        z.push_back(ZooEntry{
            "zero",
            "zero operator",
            "spectrum = point spectrum = {0}; no boundary non-eigenvalue exists",
            [](const ZooParams& p) {
                return OperatorRep::diagonal(CVector::Zero(p.dim));
            },
            [](Complex, const ZooParams&) -> std::optional<bool> { return false; }});

        z.push_back(ZooEntry{
            "jordan_block",
            "single nilpotent Jordan block",
            "nilpotent; n = m = 1 (kernel e_D, corange e_1)",
            [](const ZooParams& p) { return OperatorRep::nilpotent(p.dim, unit_weights(p.dim)); },
            [](Complex, const ZooParams&) -> std::optional<bool> { return std::nullopt; }});

        z.push_back(ZooEntry{
            "jordan_chain_pair",
            "two nilpotent Jordan chains (a zero weight splits the chain at break_index, "
            "default D/2)",
            "nilpotent; kernel = chain ends, corange = chain heads; the structural index "
            "data for the m < n branch declares one corange vector",
            [](const ZooParams& p) {
                const Index b = static_cast<Index>(p.get("break_index",
                                                         static_cast<double>(p.dim / 2)));
                if (b < 1 || b >= p.dim)
                    throw InvalidSpec("jordan_chain_pair: break_index out of range");
                std::vector<double> w = unit_weights(p.dim);
                w[static_cast<size_t>(b - 1)] = 0.0;
                return OperatorRep::nilpotent(p.dim, std::move(w));
            },
            [](Complex, const ZooParams&) -> std::optional<bool> { return std::nullopt; }});

        z.push_back(ZooEntry{
            "diag_two_clusters",
            "diagonal with eigenvalue clusters near 0 and 5",
            "self-transposed; spectrum = the two clusters; used by the spectral projection "
            "checks",
            [](const ZooParams& p) {
                const double spread = p.get("spread", 0.2);
                CVector d(p.dim);
                for (Index k = 0; k < p.dim; ++k) {
                    const double offset =
                        spread * (static_cast<double>(k % 7) / 7.0 - 0.5);
                    d(k) = (k % 2 == 0) ? Complex(offset, 0.0) : Complex(5.0 + offset, 0.0);
                }
                return OperatorRep::diagonal(d);
            },
            [](Complex, const ZooParams&) -> std::optional<bool> { return std::nullopt; }});

        z.push_back(ZooEntry{
            "rank_one_perturbed_diagonal",
            "seeded diagonal plus a seeded rank-one term u c^T",
            "dense; defect of any coordinate half-space is at most one by construction",
            [](const ZooParams& p) {
                std::uint64_t state = p.seed ^ 0x5EEDull;
                CVector d(p.dim);
                for (Index k = 0; k < p.dim; ++k)
                    d(k) = Complex(deterministic_gaussian(state), deterministic_gaussian(state));
                CVector u(p.dim), c(p.dim);
                for (Index k = 0; k < p.dim; ++k)
                    u(k) = Complex(deterministic_gaussian(state), deterministic_gaussian(state));
                for (Index k = 0; k < p.dim; ++k)
                    c(k) = Complex(deterministic_gaussian(state), deterministic_gaussian(state));
                CMatrix m = CMatrix::Zero(p.dim, p.dim);
                m.diagonal() = d;
                m.noalias() += u * c.transpose();
                return OperatorRep::dense(std::move(m));
            },
            [](Complex, const ZooParams&) -> std::optional<bool> { return std::nullopt; }});

        z.push_back(ZooEntry{
            "dense_gaussian",
            "seeded dense Gaussian matrix (scaled by 1/sqrt(D))",
            "no structural facts; hypothesis checks fall back to numerics",
            [](const ZooParams& p) {
                std::uint64_t state = p.seed ^ 0xD15Eull;
                CMatrix m(p.dim, p.dim);
                const double s = 1.0 / std::sqrt(static_cast<double>(p.dim));
                for (Index j = 0; j < p.dim; ++j)
                    for (Index i = 0; i < p.dim; ++i)
                        m(i, j) = s * Complex(deterministic_gaussian(state),
                                              deterministic_gaussian(state));
                return OperatorRep::dense(std::move(m));
            },
            [](Complex, const ZooParams&) -> std::optional<bool> { return std::nullopt; }});

        return z;
    }();
    return entries;
}

const ZooEntry* zoo_find(const std::string& name) {
    for (const auto& e : zoo_entries())
        if (e.name == name) return &e;
    return nullptr;
}

OperatorRep zoo_build(const std::string& name, const ZooParams& params) {
    const ZooEntry* e = zoo_find(name);
    if (!e) throw InvalidSpec("unknown zoo operator '" + name + "'");
    if (params.dim < 2) throw InvalidSpec("zoo_build: dim must be >= 2");
    return e->build(params);
}

}  // namespace aihs
