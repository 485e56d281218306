// Dense apply kernels. The production entry points run their outer loop
// under OpenMP; kernels::ref holds the plain serial loops kept as the
// reference implementation for tests and for the benchmark comparison.
//
// Determinism contract: every output element is accumulated in a fixed
// serial order (columns of the operand), independent of how rows/columns
// are partitioned across threads. Repeated runs produce bitwise-identical
// results for any thread count.

#pragma once

#include "aihs/types.hpp"

namespace aihs::kernels {

// Parallel execution toggle; Serial schedules the same arithmetic on one
// thread (used by the benchmark and by tests pinning determinism).
enum class Exec { Serial, Parallel };

// y = A x
void matvec(const CMatrix& A, const CVector& x, CVector& y, Exec exec = Exec::Parallel);

// y = A^T x (plain transpose: the adjoint under the bilinear pairing)
void matvec_transpose(const CMatrix& A, const CVector& x, CVector& y,
                      Exec exec = Exec::Parallel);

// C = A B, parallel over columns of B
void matmul(const CMatrix& A, const CMatrix& B, CMatrix& C, Exec exec = Exec::Parallel);

inline CVector matvec(const CMatrix& A, const CVector& x, Exec exec = Exec::Parallel) {
    CVector y;
    matvec(A, x, y, exec);
    return y;
}
inline CVector matvec_transpose(const CMatrix& A, const CVector& x,
                                Exec exec = Exec::Parallel) {
    CVector y;
    matvec_transpose(A, x, y, exec);
    return y;
}
inline CMatrix matmul(const CMatrix& A, const CMatrix& B, Exec exec = Exec::Parallel) {
    CMatrix C;
    matmul(A, B, C, exec);
    return C;
}

namespace ref {

// Plain serial loops, kept deliberately naive.
void matvec(const CMatrix& A, const CVector& x, CVector& y);
void matvec_transpose(const CMatrix& A, const CVector& x, CVector& y);
void matmul(const CMatrix& A, const CMatrix& B, CMatrix& C);

}  // namespace ref

}  // namespace aihs::kernels
