#include "aihs/structure_analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace aihs {

namespace {

// Hermitian eigendecomposition helper for Gram matrices.
Eigen::SelfAdjointEigenSolver<CMatrix> eigh(const CMatrix& G) {
    return Eigen::SelfAdjointEigenSolver<CMatrix>(G);
}

// dist^2 of the unit vector with index p from the span of the other columns,
// via the Schur complement G_pp - g^H G_(-p)^+ g on the normalized Gram.
double schur_distance_sq(const CMatrix& G, Index p) {
    const Index n = G.rows();
    if (n == 1) return std::real(G(0, 0));
    CMatrix Gm(n - 1, n - 1);
    CVector g(n - 1);
    Index ii = 0;
    for (Index i = 0; i < n; ++i) {
        if (i == p) continue;
        Index jj = 0;
        for (Index j = 0; j < n; ++j) {
            if (j == p) continue;
            Gm(ii, jj) = G(i, j);
            ++jj;
        }
        g(ii) = G(i, p);
        ++ii;
    }
    const auto es = eigh(Gm);
    const auto& ev = es.eigenvalues();
    const double cut = std::max(ev(ev.size() - 1), 0.0) * 1e-12;
    // pseudo-solve G_(-p) y = g
    const CVector c = es.eigenvectors().adjoint() * g;
    double quad = 0.0;
    for (Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cut) quad += std::norm(c(i)) / ev(i);
    return std::max(std::real(G(p, p)) - quad, 0.0);
}

}  // namespace

OrbitReport orbit_minimality(const OperatorRep& T, const CVector& z, Index K,
                             const OrbitOptions& opts) {
    const Index d = T.dim();
    if (z.size() != d) throw InvalidSpec("orbit_minimality: vector dimension mismatch");
    if (z.norm() == 0.0) throw InvalidSpec("orbit_minimality: z must be nonzero");
    if (K < 1 || K > d) throw InvalidSpec("orbit_minimality: need 1 <= K <= D");

    OrbitReport rep;
    CMatrix V(d, K + 1);
    CVector cur = z;
    Index count = 0;
    for (Index p = 0; p <= K; ++p) {
        const double nn = cur.norm();
        rep.orbit_norms.push_back(nn);
        if (nn <= opts.norm_floor) {
            rep.collapsed_at = p;
            break;
        }
        V.col(p) = cur / nn;
        ++count;
        if (p < K) cur = T.apply(cur);
    }
    V.conservativeResize(d, count);

    const CMatrix G = V.adjoint() * V;
    const auto es = eigh(G);
    const double lmin = es.eigenvalues()(0);

    rep.distances.resize(static_cast<size_t>(count));
    if (lmin > 1e-10) {
        // well-conditioned orbit: dist_p = 1 / sqrt((G^-1)_pp), rescaled
        const CMatrix Ginv = es.eigenvectors() *
                             es.eigenvalues().cwiseInverse().asDiagonal() *
                             es.eigenvectors().adjoint();
        for (Index p = 0; p < count; ++p)
            rep.distances[static_cast<size_t>(p)] =
                rep.orbit_norms[static_cast<size_t>(p)] /
                std::sqrt(std::real(Ginv(p, p)));
    } else {
        for (Index p = 0; p < count; ++p)
            rep.distances[static_cast<size_t>(p)] =
                rep.orbit_norms[static_cast<size_t>(p)] * std::sqrt(schur_distance_sq(G, p));
    }

    for (Index p = 0; p < count; ++p) {
        if (rep.distances[static_cast<size_t>(p)] <=
            opts.delta * rep.orbit_norms[static_cast<size_t>(p)]) {
            rep.failing_index = p;
            break;
        }
    }
    rep.minimal = !rep.failing_index.has_value() && !rep.collapsed_at.has_value();

    if (rep.failing_index) {
        // refinement: at the smallest failing p the orbit vector already lies
        // in the span of the strictly later vectors
        const Index p = *rep.failing_index;
        if (p + 1 < count) {
            const Index tail = count - (p + 1);
            CMatrix W(d, tail + 1);
            W.col(0) = V.col(p);
            W.rightCols(tail) = V.rightCols(tail);
            const CMatrix Gw = W.adjoint() * W;
            rep.later_span_residual =
                rep.orbit_norms[static_cast<size_t>(p)] * std::sqrt(schur_distance_sq(Gw, 0));
        } else {
            rep.later_span_residual = rep.distances[static_cast<size_t>(p)];
        }
    }
    return rep;
}

ChainReport dense_range_chain(const OperatorRep& T, const ChainOptions& opts) {
    const Index d = T.dim();
    ChainReport rep;

    // ranks of successive powers via column-pivoted QR of T^j applied to the
    // previous range basis: range(T^{j+1}) = T(range(T^j))
    CMatrix basis = CMatrix::Identity(d, d);  // Y_0 = X
    rep.ranks.push_back(d);
    rep.codims.push_back(0);
    for (Index j = 1; j <= opts.max_steps; ++j) {
        CMatrix img = T.apply_to_matrix(basis);
        Eigen::ColPivHouseholderQR<CMatrix> qr(img);
        qr.setThreshold(opts.rank_cut);
        const Index r = qr.rank();
        rep.ranks.push_back(r);
        rep.codims.push_back(d - r);
        CMatrix Q = qr.householderQ();
        basis = Q.leftCols(r);
        if (r == rep.ranks[static_cast<size_t>(j - 1)]) {
            rep.stabilized_at = j - 1;
            break;
        }
        if (r == 0) {
            rep.stabilized_at = j;  // stabilizes at the zero space
            rep.degenerate = true;
            break;
        }
    }

    if (!rep.stabilized_at) {
        // Monotone loss of one rank per step is the signature of a shift-like
        // truncation boundary; the infinite-dimensional chain behaves
        // differently, so flag rather than fail.
        bool monotone = rep.ranks.size() >= 3;
        for (size_t j = 1; j + 1 < rep.ranks.size() && monotone; ++j)
            monotone = rep.ranks[j] - rep.ranks[j + 1] == rep.ranks[j - 1] - rep.ranks[j];
        rep.truncation_artifact = monotone;
        return rep;
    }

    if (!rep.degenerate && *rep.stabilized_at >= 0) {
        // compress T to the stabilized range; rank stability makes the
        // restriction's adjoint injective at truncation
        const Index r = basis.cols();
        if (r > 0) {
            CMatrix S = basis.adjoint() * T.apply_to_matrix(basis);
            if (r >= 2) {
                rep.restriction = OperatorRep::dense(S);
                const auto sv = Eigen::JacobiSVD<CMatrix>(S).singularValues();
                rep.restriction_sigma_min = sv(sv.size() - 1);
            } else {
                rep.restriction_sigma_min = std::abs(S(0, 0));
            }
        }
    }
    return rep;
}

HalfSpaceRep eigen_halfspace(const OperatorRep& T,
                             const std::vector<std::pair<Complex, CVector>>& eigen_data,
                             double tol) {
    const Index d = T.dim();
    if (eigen_data.size() < 2)
        throw InvalidSpec("eigen_halfspace: need at least 2 eigenpairs");
    if (static_cast<Index>(eigen_data.size()) > d - 2)
        throw InvalidSpec("eigen_halfspace: at least 2 eigenvalues must be withheld");
    std::vector<CVector> vecs;
    vecs.reserve(eigen_data.size());
    for (const auto& [lambda, v] : eigen_data) {
        if (v.size() != d) throw InvalidSpec("eigen_halfspace: eigenvector dimension mismatch");
        const double res = (T.apply(v) - lambda * v).norm();
        if (res > tol * v.norm())
            throw NotEigenpair("eigen_halfspace: residual " + std::to_string(res) +
                                   " for the supplied pair",
                               res);
        vecs.push_back(v);
    }
    return halfspace_from_span(vecs, d);
}

Eigen::MatrixXd eigen_cross_pairing(const OperatorRep& T,
                                    const std::vector<std::pair<Complex, CVector>>& eigen_data) {
    const Index k = static_cast<Index>(eigen_data.size());
    const Index d = T.dim();
    Eigen::MatrixXd P(k, k);
    // adjoint eigenvectors: coordinate vectors for diagonal tags, dense
    // solver on the transpose otherwise, matched to each lambda_i by
    // nearest eigenvalue
    std::vector<CVector> left(static_cast<size_t>(k));
    if (std::holds_alternative<DiagonalTag>(T.structure())) {
        const auto& entries = std::get<DiagonalTag>(T.structure()).entries;
        for (Index i = 0; i < k; ++i) {
            Index best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (Index p = 0; p < d; ++p) {
                const double dist = std::abs(entries(p) - eigen_data[static_cast<size_t>(i)].first);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = p;
                }
            }
            left[static_cast<size_t>(i)] = CVector::Unit(d, best);
        }
    } else {
        Eigen::ComplexEigenSolver<CMatrix> es(T.matrix().transpose());
        for (Index i = 0; i < k; ++i) {
            Index best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (Index p = 0; p < d; ++p) {
                const double dist =
                    std::abs(es.eigenvalues()(p) - eigen_data[static_cast<size_t>(i)].first);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = p;
                }
            }
            left[static_cast<size_t>(i)] = es.eigenvectors().col(best);
        }
    }
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            const CVector& w = left[static_cast<size_t>(i)];
            const CVector& v = eigen_data[static_cast<size_t>(j)].second;
            P(i, j) = std::abs(pair(w, v)) / (w.norm() * v.norm());
        }
    return P;
}

RieszData riesz_projection(const OperatorRep& T, Complex center, double radius,
                           const RieszOptions& opts) {
    const Index d = T.dim();
    if (radius <= 0.0) throw InvalidSpec("riesz_projection: radius must be positive");

    {
        const CVector ev = eigenvalues(T);
        for (Index i = 0; i < ev.size(); ++i) {
            const double dist = std::abs(std::abs(ev(i) - center) - radius);
            if (dist < opts.spectrum_clearance)
                throw ContourHitsSpectrum(
                    "riesz_projection: eigenvalue within " + std::to_string(dist) +
                    " of the contour circle");
        }
    }

    const CMatrix& Tm_full = T.matrix();  // materialize before the parallel region
    const auto integrate = [&](Index nodes) {
        // (1/2 pi i) contour integral == (R / nodes) sum_j e^{i theta_j} R(zeta_j)
        std::vector<CMatrix> slices(static_cast<size_t>(nodes));
        std::vector<std::exception_ptr> errs(static_cast<size_t>(nodes));
#pragma omp parallel for schedule(static) if (opts.parallel)
        for (Index j = 0; j < nodes; ++j) {
            try {
                const double theta =
                    2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes);
                const Complex phase = std::polar(1.0, theta);
                const Complex zeta = center + radius * phase;
                const CMatrix M = zeta * CMatrix::Identity(d, d) - Tm_full;
                slices[static_cast<size_t>(j)] =
                    phase * Eigen::PartialPivLU<CMatrix>(M).solve(CMatrix::Identity(d, d));
            } catch (...) {
                errs[static_cast<size_t>(j)] = std::current_exception();
            }
        }
        for (const auto& e : errs)
            if (e) std::rethrow_exception(e);
        CMatrix P = CMatrix::Zero(d, d);
        for (const auto& s : slices) P += s;  // fixed order
        P *= radius / static_cast<double>(nodes);
        return P;
    };

    Index nodes = std::max<Index>(opts.nodes, 4);
    CMatrix P = integrate(nodes);
    if (opts.require_convergence) {
        double delta = std::numeric_limits<double>::infinity();
        while (2 * nodes <= opts.max_nodes) {
            CMatrix P2 = integrate(2 * nodes);
            delta = (P2 - P).norm();
            P = std::move(P2);
            nodes *= 2;
            if (delta <= opts.cauchy_tol) break;
        }
        if (delta > opts.cauchy_tol)
            throw QuadratureNotConverged(
                "riesz_projection: doubling to " + std::to_string(nodes) +
                    " nodes still moves P by " + std::to_string(delta),
                delta);
    }

    RieszData rd;
    rd.center = center;
    rd.radius = radius;
    rd.nodes = nodes;
    rd.idempotency = (P * P - P).norm();
    const CMatrix& Tm = T.matrix();
    rd.commutation = (P * Tm - Tm * P).norm();
    rd.P = std::move(P);
    return rd;
}

std::vector<RieszData> riesz_family(const OperatorRep& T,
                                    const std::vector<std::pair<Complex, double>>& contours,
                                    const RieszOptions& opts) {
    std::vector<RieszData> out;
    out.reserve(contours.size());
    CMatrix sum = CMatrix::Zero(T.dim(), T.dim());
    for (const auto& [c, r] : contours) {
        out.push_back(riesz_projection(T, c, r, opts));
        sum += out.back().P;
    }
    const double partition = (sum - CMatrix::Identity(T.dim(), T.dim())).norm();
    for (auto& rd : out) rd.partition = partition;
    return out;
}

}  // namespace aihs
