// Shared scalar/vector/matrix aliases and the duality convention used
// throughout: functionals pair with vectors bilinearly, f(x) = sum_k f_k x_k
// (no conjugation), so the adjoint of an operator is the plain transpose and
// the algebraic identities of the constructions hold verbatim. Norms,
// orthogonality and projections use the sesquilinear inner product
// <x,y> = sum_k x_k conj(y_k).

#pragma once

#include <complex>
#include <Eigen/Dense>

namespace aihs {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Bilinear duality pairing f(x). Lives in X* x X, returns a scalar.
inline Complex pair(const CVector& f, const CVector& x) {
    return (f.transpose() * x).value();
}

// Sesquilinear inner product <x,y>, conjugate-linear in y.
inline Complex inner(const CVector& x, const CVector& y) {
    return (y.adjoint() * x).value();
}

inline bool all_finite(const CVector& v) { return v.allFinite(); }
inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

}  // namespace aihs
