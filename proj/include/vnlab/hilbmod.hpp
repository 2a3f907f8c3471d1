#pragma once

#include "vnlab/algebra.hpp"
#include "vnlab/linops.hpp"
#include "vnlab/types.hpp"

#include <vector>

namespace vnlab {

/// A right module over an algebra, given abstractly by k generators and
/// the algebra-valued Gram matrix of their inner products.
struct AbstractModule {
    OperatorAlgebra algebra;  ///< coefficients, acting on the n-dim space
    Index k = 0;              ///< generator count
    /// k x k array of n x n blocks; entry (i, j) is the inner product of
    /// generators i and j.
    std::vector<std::vector<ComplexMatrix>> gram;

    /// The kn x kn block matrix assembled from the Gram entries.
    ComplexMatrix gram_block_matrix() const;
};

struct ModuleDiagnostics {
    double hermiticity_residual = 0.0;
    double algebra_membership_residual = 0.0;
    double psd_margin = 0.0;  ///< most negative eigenvalue, clipped at 0
};

ModuleDiagnostics module_diagnostics(const AbstractModule& m, Tolerance tol = {});

/// Throwing check of the Gram invariants (hermiticity, algebra-valued
/// entries, positive semidefiniteness of the block matrix).
void validate_module(const AbstractModule& m, Tolerance tol = {});

/// A module realized concretely as operators from the n-dim space to an
/// m-dim space, closed under the right algebra action.
struct ConcreteModule {
    Index dim_G = 0;
    Index dim_H = 0;
    std::vector<ComplexMatrix> generators;  ///< raw generators (m x n)
    std::vector<ComplexMatrix> basis;       ///< HS-orthonormal basis of the span
    Span span{0, 0};
    OperatorAlgebra algebra;

    Index dim() const { return static_cast<Index>(basis.size()); }
    bool contains(const ComplexMatrix& x, Tolerance tol = {}) const {
        return span.contains(x, tol);
    }
};

struct TensorRealization {
    Index dim_H = 0;
    /// One m x n map per abstract generator; generator i acts on the base
    /// space by g -> (generator i) tensor g.
    std::vector<ComplexMatrix> lifts;
};

/// Interior tensor product of the module with its base space: factor the
/// kn x kn Gram block matrix as F^* F and slice F into one lift per
/// generator. The lifts reproduce the Gram entries via L_i^* L_j and
/// their columns together span the whole m-dim target.
TensorRealization tensor_with_G(const AbstractModule& m, Tolerance tol = {});

/// Close a family of raw operators under the right algebra action and
/// orthonormalize. Verifies the result is a module: right-action closed
/// with inner products inside the algebra span.
ConcreteModule module_span_closure(const std::vector<ComplexMatrix>& raw,
                                   const OperatorAlgebra& algebra,
                                   Tolerance tol = {});

/// Algebra-valued inner product x^* y of two module elements; checks
/// membership of the arguments in the module and of the result in the
/// algebra.
ComplexMatrix inner_product(const ComplexMatrix& x, const ComplexMatrix& y,
                            const ConcreteModule& e, Tolerance tol = {});

struct PolarParts {
    ComplexMatrix isometry;  ///< partial isometry, zero on the kernel of the modulus
    ComplexMatrix modulus;   ///< PSD square root of x^* x, acting on the base space
};

/// Polar decomposition x = isometry * modulus with the isometry defined
/// as zero on the numerical kernel of the modulus.
PolarParts polar_parts(const ComplexMatrix& x, Tolerance tol = {});

/// Evaluate the map encoded by a Choi matrix (block (i, j) is the image
/// of the matrix unit e_ij) on an arbitrary input.
ComplexMatrix apply_choi(const ComplexMatrix& choi, const ComplexMatrix& a);

/// GNS module of the completely positive map given by its Choi matrix:
/// one generator per orthonormal basis element a_i of the algebra, with
/// Gram entries phi(a_i^* a_j). Rejects non-PSD Choi matrices and maps
/// whose images leave the algebra span.
AbstractModule gns_module(const OperatorAlgebra& algebra, const ComplexMatrix& choi,
                          Tolerance tol = {});

}  // namespace vnlab
