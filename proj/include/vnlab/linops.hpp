#pragma once

#include "vnlab/types.hpp"

#include <optional>
#include <vector>

namespace vnlab {

// ---------------------------------------------------------------------------
// Rank-revealing primitives
// ---------------------------------------------------------------------------

/// Orthonormal basis of the numerical kernel of A, returned as the columns
/// of a cols(A) x r matrix. A singular value belongs to the kernel when it
/// falls below max(rel_eps * sigma_max, abs_floor).
ComplexMatrix nullspace(const ComplexMatrix& a, Tolerance tol = {});

struct PsdFactorization {
    ComplexMatrix factor;  ///< r x m with factor^* factor = K
    Index rank = 0;
};

/// Rank factorization K = F^* F of a hermitian PSD matrix via its
/// eigendecomposition. Eigenvalues are taken in descending order and each
/// eigenvector is normalized so its first nonzero component is real
/// positive, which makes the factor reproducible across runs. Rows of F
/// are orthogonal with squared norms equal to the eigenvalues.
PsdFactorization psd_factor(const ComplexMatrix& k, Tolerance tol = {});

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// Hermitian PSD square root via eigendecomposition; small negative
/// eigenvalues (above -rel_eps * lambda_max) are clipped to zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& a, Tolerance tol = {});

// ---------------------------------------------------------------------------
// Span: orthonormal basis of a family of equal-shape matrices
// ---------------------------------------------------------------------------

/// An orthonormal basis, in the Hilbert-Schmidt inner product, for the
/// linear span of a family of rows x cols matrices. Backs every
/// membership test, projection and span comparison in the library.
class Span {
public:
    Span(Index rows, Index cols) : rows_(rows), cols_(cols), flat_(rows * cols, 0) {}

    /// Orthonormalize a family of matrices (SVD-based, rank-revealing).
    static Span from(const std::vector<ComplexMatrix>& family, Tolerance tol = {});

    /// The full matrix space of the given shape (matrix-unit basis).
    static Span full(Index rows, Index cols);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index dim() const { return flat_.cols(); }

    /// Flattened orthonormal basis, one column per basis element.
    const ComplexMatrix& flat() const { return flat_; }

    std::vector<ComplexMatrix> matrices() const;

    /// Coefficients of x against the basis (exact if x lies in the span).
    ComplexVector coefficients(const ComplexMatrix& x) const;

    /// Orthogonal projection of x onto the span.
    ComplexMatrix project(const ComplexMatrix& x) const;

    /// Frobenius distance from x to the span.
    double residual(const ComplexMatrix& x) const;

    /// Components orthogonal to the span, columnwise, for a stack of
    /// flattened elements (one BLAS-3 projection instead of many
    /// matrix-vector passes).
    ComplexMatrix residual_columns(const ComplexMatrix& stacked) const;

    /// Membership within tolerance, relative to the norm of x.
    bool contains(const ComplexMatrix& x, Tolerance tol = {}) const;

    /// Grow the basis by the component of x orthogonal to the span.
    /// Returns true when the dimension increased. Uses modified
    /// Gram-Schmidt with one reorthogonalization pass.
    bool append(const ComplexMatrix& x, Tolerance tol = {});

private:
    Index rows_;
    Index cols_;
    ComplexMatrix flat_;  // (rows*cols) x dim, orthonormal columns
};

struct SubspaceComparison {
    bool equal = false;
    double distance = 0.0;  ///< Frobenius norm of the projector difference
    Index dim_a = 0;
    Index dim_b = 0;
};

/// Compare the spans of two families of equal-shape matrices by the
/// Frobenius distance between their orthogonal projectors (computed from
/// the cross-Gram of the orthonormal bases, without materializing the
/// projectors). Equal when the distance is at most rel_eps.
SubspaceComparison subspace_equal(const std::vector<ComplexMatrix>& basis_a,
                                  const std::vector<ComplexMatrix>& basis_b,
                                  Tolerance tol = {});

SubspaceComparison subspace_equal(const Span& a, const Span& b, Tolerance tol = {});

// ---------------------------------------------------------------------------
// Joint intertwiner kernels (Kronecker-structured, never materialized)
// ---------------------------------------------------------------------------

/// One homogeneous constraint left * X = X * right on an unknown p x q
/// matrix X.
struct IntertwinerPair {
    ComplexMatrix left;   ///< p x p
    ComplexMatrix right;  ///< q x q
};

/// Orthonormal basis (columns, flattened) of
///     { X : left_j X = X right_j for every j }.
///
/// The family of pairs must be *-compatible: the space cut out by the
/// pairs must coincide with the space cut out by the pairs together with
/// their adjoints. That holds for all uses here (commutants of *-closed
/// generator families, and intertwiners of a *-preserving representation
/// against a *-closed span).
///
/// The solver splits every pair into hermitian and antihermitian parts,
/// seeds the kernel from the eigenvalue-matching basis of the most
/// discriminating hermitian pair, then shrinks the candidate with one
/// exact SVD pass per remaining constraint, skipping constraints already
/// satisfied. The Kronecker constraint matrices are never formed.
ComplexMatrix intertwiner_kernel(const std::vector<IntertwinerPair>& pairs,
                                 Index p, Index q, Tolerance tol = {});

/// Restrict an orthonormal candidate basis (columns of `candidates`) by a
/// homogeneous constraint whose action on the candidates is given
/// columnwise in `constrained`. Singular values at or below `cut` count
/// as kernel. Returns the shrunk orthonormal basis.
ComplexMatrix restrict_kernel(const ComplexMatrix& candidates,
                              const ComplexMatrix& constrained, double cut);

}  // namespace vnlab
