#include "aihs/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aihs::kernels {

namespace {

// Row-block gemv. Eigen's column-major gemv accumulates y_i over columns
// k = 0..n-1 in that fixed order for every row, so splitting rows across
// threads does not change any element's summation order.
void matvec_blocked(const CMatrix& A, const CVector& x, CVector& y, bool parallel) {
    const Index m = A.rows();
    y.resize(m);
    if (m == 0) return;
#ifdef _OPENMP
    if (parallel && m >= 64) {
        const int nt = omp_get_max_threads();
        const Index nblocks = std::min<Index>(m, nt);
        const Index step = (m + nblocks - 1) / nblocks;
#pragma omp parallel for schedule(static)
        for (Index b = 0; b < nblocks; ++b) {
            const Index r0 = b * step;
            const Index len = std::min(step, m - r0);
            if (len > 0) y.segment(r0, len).noalias() = A.middleRows(r0, len) * x;
        }
        return;
    }
#endif
    (void)parallel;
    y.noalias() = A * x;
}

}  // namespace

void matvec(const CMatrix& A, const CVector& x, CVector& y, Exec exec) {
    matvec_blocked(A, x, y, exec == Exec::Parallel);
}

void matvec_transpose(const CMatrix& A, const CVector& x, CVector& y, Exec exec) {
    const Index n = A.cols();
    y.resize(n);
    if (n == 0) return;
#ifdef _OPENMP
    if (exec == Exec::Parallel && n >= 64) {
#pragma omp parallel for schedule(static)
        for (Index j = 0; j < n; ++j) y(j) = (A.col(j).transpose() * x).value();
        return;
    }
#endif
    for (Index j = 0; j < n; ++j) y(j) = (A.col(j).transpose() * x).value();
}

void matmul(const CMatrix& A, const CMatrix& B, CMatrix& C, Exec exec) {
    const Index m = A.rows(), n = B.cols();
    C.resize(m, n);
    if (m == 0 || n == 0) return;
#ifdef _OPENMP
    if (exec == Exec::Parallel && n >= 2 && m >= 64) {
#pragma omp parallel for schedule(static)
        for (Index j = 0; j < n; ++j) C.col(j).noalias() = A * B.col(j);
        return;
    }
#endif
    for (Index j = 0; j < n; ++j) C.col(j).noalias() = A * B.col(j);
}

namespace ref {

void matvec(const CMatrix& A, const CVector& x, CVector& y) {
    const Index m = A.rows(), n = A.cols();
    y = CVector::Zero(m);
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < m; ++i) y(i) += A(i, k) * x(k);
}

void matvec_transpose(const CMatrix& A, const CVector& x, CVector& y) {
    const Index m = A.rows(), n = A.cols();
    y = CVector::Zero(n);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < m; ++k) y(j) += A(k, j) * x(k);
}

void matmul(const CMatrix& A, const CMatrix& B, CMatrix& C) {
    const Index m = A.rows(), n = B.cols(), p = A.cols();
    C = CMatrix::Zero(m, n);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < p; ++k)
            for (Index i = 0; i < m; ++i) C(i, j) += A(i, k) * B(k, j);
}

}  // namespace ref

}  // namespace aihs::kernels
