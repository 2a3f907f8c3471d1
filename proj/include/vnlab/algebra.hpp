#pragma once

#include "vnlab/linops.hpp"
#include "vnlab/types.hpp"

#include <optional>
#include <vector>

namespace vnlab {

/// A unital *-closed operator algebra on an n-dimensional space, held as
/// the original generators plus a Hilbert-Schmidt-orthonormal basis of
/// its linear span.
struct OperatorAlgebra {
    Index ambient_dim = 0;
    std::vector<ComplexMatrix> generators;
    std::vector<ComplexMatrix> basis;
    Span span{0, 0};

    Index dim() const { return static_cast<Index>(basis.size()); }
    ComplexMatrix identity() const {
        return ComplexMatrix::Identity(ambient_dim, ambient_dim);
    }
    bool contains(const ComplexMatrix& x, Tolerance tol = {}) const {
        return span.contains(x, tol);
    }
};

/// Worst-case residuals of the algebra invariants; all ~0 for a valid
/// algebra.
struct AlgebraDiagnostics {
    double unit_residual = 0.0;         ///< distance of the identity from the span
    double adjoint_residual = 0.0;      ///< worst distance of a basis adjoint from the span
    double product_residual = 0.0;      ///< worst distance of a basis product from the span
    double orthonormality_residual = 0.0;
    double worst() const;
};

/// Compute the invariant residuals. Products are the expensive part
/// (quadratic in the dimension); `check_products = false` skips them for
/// spaces that are algebras by construction.
AlgebraDiagnostics algebra_diagnostics(const OperatorAlgebra& a, Tolerance tol = {},
                                       bool check_products = true);

/// Throwing validation against `tol`.
void validate_algebra(const OperatorAlgebra& a, Tolerance tol = {},
                      bool check_products = true);

/// Smallest unital *-closed algebra containing the generators: adjoin the
/// identity and all adjoints, then multiply and re-span until the
/// dimension stabilizes (at most n^2). Throws if 64 passes do not reach a
/// fixed point.
OperatorAlgebra generate_algebra(const std::vector<ComplexMatrix>& generators,
                                 Index n, Tolerance tol = {});

/// Wrap an already *-closed unital span as an algebra without running the
/// closure loop; the basis is orthonormalized and the generators are set
/// to the basis.
OperatorAlgebra algebra_from_span(const std::vector<ComplexMatrix>& spanning,
                                  Index n, Tolerance tol = {});

/// Commutant { x : xg = gx for every generator g and g^* }, computed as a
/// joint intertwiner kernel. Constraints are imposed against the
/// generators only; commuting with them is equivalent to commuting with
/// the generated algebra.
OperatorAlgebra commutant(const OperatorAlgebra& a, Tolerance tol = {});

/// Distance between A'' and A; `true` when they coincide as subspaces.
bool double_commutant_check(const OperatorAlgebra& a, Tolerance tol = {},
                            double* distance = nullptr);

struct CyclicDecomposition {
    std::vector<ComplexVector> cyclic_vectors;
    /// Orthonormal column bases, one block per cyclic subspace; the blocks
    /// are mutually orthogonal and together span the ambient space.
    std::vector<ComplexMatrix> subspaces;
};

/// Greedy decomposition of the ambient space into orthogonal subspaces
/// cyclic for the algebra. The next cyclic vector is the first standard
/// basis vector not already inside the consumed span, projected to its
/// orthogonal complement; an explicit `start` overrides the first pick.
CyclicDecomposition cyclic_decomposition(const OperatorAlgebra& a, Tolerance tol = {},
                                         std::optional<ComplexVector> start = {});

}  // namespace vnlab
