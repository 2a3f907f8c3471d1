#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace vnlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Relative singular-value cutoff with an absolute floor. Every rank
/// decision and every "equals within tolerance" predicate in the library
/// goes through one of these.
struct Tolerance {
    double rel_eps = 1e-9;
    double abs_floor = 1e-12;

    /// Cutoff for quantities living at the given scale.
    double cutoff(double scale) const {
        return std::max(rel_eps * scale, abs_floor);
    }
};

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, non-finite entries.
struct InvalidInputError : Error {
    using Error::Error;
};

/// A matrix required to be positive semidefinite has a genuinely negative
/// eigenvalue.
struct NotPsdError : Error {
    using Error::Error;
};

/// A Choi matrix fails the positivity test, i.e. the map is not
/// completely positive.
struct NotCpError : Error {
    using Error::Error;
};

/// A value that must lie in the span of the coefficient algebra does not.
struct NotAlgebraValuedError : Error {
    using Error::Error;
};

/// A set of operators is not closed under the right algebra action, or its
/// inner products leave the algebra.
struct NotModuleError : Error {
    using Error::Error;
};

/// A linear system that should be uniquely solvable is inconsistent
/// (e.g. the lifting equations of a non-total module).
struct NotWellDefinedError : Error {
    using Error::Error;
};

/// A functional is incompatible with the module relations or cannot be
/// represented within tolerance.
struct InvalidFunctionalError : Error {
    using Error::Error;
};

/// An input file violates a declared invariant; the message names it.
struct ValidationError : Error {
    using Error::Error;
};

/// An input file is not syntactically well formed.
struct ParseError : Error {
    using Error::Error;
};

/// A contract that should hold by construction failed; indicates a bug,
/// not bad input.
struct InternalInconsistencyError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Small matrix helpers
// ---------------------------------------------------------------------------

inline bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

inline void require_finite(const ComplexMatrix& a, const char* what) {
    if (!all_finite(a))
        throw InvalidInputError(std::string(what) + ": non-finite entries");
}

/// Hilbert-Schmidt inner product tr(a* b), linear in the second argument.
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a.conjugate().cwiseProduct(b)).sum();
}

inline double frobenius(const ComplexMatrix& a) {
    return a.norm();
}

/// Column-major flattening; the fixed vectorization convention for all
/// stacked linear systems in the library.
inline ComplexVector vec(const ComplexMatrix& a) {
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
    return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

}  // namespace vnlab
