#include "vnlab/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace vnlab {

double AlgebraDiagnostics::worst() const {
    return std::max({unit_residual, adjoint_residual, product_residual,
                     orthonormality_residual});
}

AlgebraDiagnostics algebra_diagnostics(const OperatorAlgebra& a, Tolerance tol,
                                       bool check_products) {
    (void)tol;
    AlgebraDiagnostics d;
    d.unit_residual = a.span.residual(a.identity());
    d.orthonormality_residual =
        (a.span.flat().adjoint() * a.span.flat() -
         ComplexMatrix::Identity(a.dim(), a.dim()))
            .norm();
    for (const auto& b : a.basis)
        d.adjoint_residual = std::max(d.adjoint_residual, a.span.residual(b.adjoint()));
    if (check_products) {
        for (const auto& x : a.basis)
            for (const auto& y : a.basis)
                d.product_residual =
                    std::max(d.product_residual, a.span.residual(x * y));
    }
    return d;
}

void validate_algebra(const OperatorAlgebra& a, Tolerance tol, bool check_products) {
    const AlgebraDiagnostics d = algebra_diagnostics(a, tol, check_products);
    const double cut = tol.cutoff(std::sqrt(static_cast<double>(a.ambient_dim)));
    if (d.unit_residual > cut)
        throw ValidationError("algebra invariant: identity not in span");
    if (d.adjoint_residual > cut)
        throw ValidationError("algebra invariant: span not adjoint-closed");
    if (d.product_residual > tol.cutoff(static_cast<double>(a.ambient_dim)))
        throw ValidationError("algebra invariant: span not closed under products");
    if (d.orthonormality_residual > tol.cutoff(static_cast<double>(a.dim())))
        throw ValidationError("algebra invariant: basis not orthonormal");
}

OperatorAlgebra generate_algebra(const std::vector<ComplexMatrix>& generators,
                                 Index n, Tolerance tol) {
    for (const auto& g : generators) {
        if (g.rows() != n || g.cols() != n)
            throw InvalidInputError("generate_algebra: generator not n x n");
        require_finite(g, "generate_algebra");
    }

    Span span(n, n);
    span.append(ComplexMatrix::Identity(n, n), tol);
    for (const auto& g : generators) {
        span.append(g, tol);
        span.append(g.adjoint(), tol);
    }

    const Index full = n * n;
    std::vector<ComplexMatrix> fresh = span.matrices();  // frontier
    int pass = 0;
    while (!fresh.empty() && span.dim() < full) {
        if (++pass > 64)
            throw InternalInconsistencyError(
                "generate_algebra: closure did not stabilize in 64 passes");
        const std::vector<ComplexMatrix> old = span.matrices();
        std::vector<ComplexMatrix> added;
        auto consider = [&](const ComplexMatrix& p) {
            if (span.dim() < full && span.append(p, tol))
                added.push_back(unvec(span.flat().col(span.dim() - 1), n, n));
        };
        for (const auto& x : old)
            for (const auto& y : fresh) consider(x * y);
        for (const auto& y : fresh)
            for (const auto& x : old) consider(y * x);
        fresh = std::move(added);
    }

    OperatorAlgebra out;
    out.ambient_dim = n;
    out.generators = generators;
    out.span = std::move(span);
    out.basis = out.span.matrices();
    return out;
}

OperatorAlgebra algebra_from_span(const std::vector<ComplexMatrix>& spanning,
                                  Index n, Tolerance tol) {
    OperatorAlgebra out;
    out.ambient_dim = n;
    if (spanning.empty()) {
        out.span = Span(n, n);
        out.span.append(ComplexMatrix::Identity(n, n), tol);
    } else {
        out.span = Span::from(spanning, tol);
        out.span.append(ComplexMatrix::Identity(n, n), tol);
    }
    out.basis = out.span.matrices();
    out.generators = out.basis;
    return out;
}

OperatorAlgebra commutant(const OperatorAlgebra& a, Tolerance tol) {
    const Index n = a.ambient_dim;
    std::vector<IntertwinerPair> pairs;
    pairs.reserve(a.generators.size());
    for (const auto& g : a.generators) pairs.push_back({g, g});

    const ComplexMatrix kernel = intertwiner_kernel(pairs, n, n, tol);

    OperatorAlgebra out;
    out.ambient_dim = n;
    out.span = Span(n, n);
    std::vector<ComplexMatrix> elements;
    elements.reserve(kernel.cols());
    for (Index j = 0; j < kernel.cols(); ++j)
        elements.push_back(unvec(kernel.col(j), n, n));
    if (elements.empty()) {
        out.span.append(ComplexMatrix::Identity(n, n), tol);
    } else {
        out.span = Span::from(elements, tol);
    }
    out.basis = out.span.matrices();
    out.generators = out.basis;
    return out;
}

bool double_commutant_check(const OperatorAlgebra& a, Tolerance tol, double* distance) {
    const OperatorAlgebra twice = commutant(commutant(a, tol), tol);
    const SubspaceComparison cmp = subspace_equal(twice.span, a.span, tol);
    if (distance) *distance = cmp.distance;
    return cmp.equal;
}

CyclicDecomposition cyclic_decomposition(const OperatorAlgebra& a, Tolerance tol,
                                         std::optional<ComplexVector> start) {
    const Index n = a.ambient_dim;
    CyclicDecomposition out;
    Span consumed(n, 1);

    while (consumed.dim() < n) {
        ComplexVector g;
        if (start && out.cyclic_vectors.empty()) {
            g = *start;
        } else {
            // First standard basis vector not already inside the consumed span.
            g = ComplexVector::Zero(n);
            for (Index i = 0; i < n; ++i) {
                ComplexVector e = ComplexVector::Zero(n);
                e(i) = 1.0;
                if (consumed.residual(e) > 1e-6) {
                    g = e;
                    break;
                }
            }
        }
        // Move into the orthogonal complement of what is already consumed.
        ComplexMatrix gm = consumed.dim() > 0
                               ? ComplexMatrix(g - vec(consumed.project(g)))
                               : ComplexMatrix(g);
        const double norm = gm.norm();
        if (norm <= tol.cutoff(1.0))
            throw InvalidInputError(
                "cyclic_decomposition: start vector lies in the consumed span");
        g = gm / norm;

        // The cyclic subspace is the algebra orbit of g; the pieces appended
        // to the consumed span form its orthonormal basis. Orbits of *
        // -closed algebras leave the complement invariant, so the blocks
        // come out mutually orthogonal.
        Index before = consumed.dim();
        for (const auto& b : a.basis) consumed.append(ComplexMatrix(b * g), tol);
        ComplexMatrix block(n, consumed.dim() - before);
        for (Index j = before; j < consumed.dim(); ++j)
            block.col(j - before) = consumed.flat().col(j);

        out.cyclic_vectors.push_back(g);
        out.subspaces.push_back(std::move(block));
    }
    return out;
}

}  // namespace vnlab
