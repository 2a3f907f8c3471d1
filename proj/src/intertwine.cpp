#include "vnlab/intertwine.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace vnlab {

ComplexMatrix Representation::apply(const ComplexMatrix& x) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_H, dim_H);
    const ComplexVector coeff = source.span.coefficients(x);
    for (Index j = 0; j < coeff.size(); ++j)
        out += coeff(j) * images[static_cast<size_t>(j)];
    return out;
}

double RepresentationDiagnostics::worst() const {
    return std::max({unital_residual, multiplicative_residual, star_residual});
}

RepresentationDiagnostics representation_diagnostics(const Representation& rho,
                                                     Tolerance tol) {
    (void)tol;
    RepresentationDiagnostics d;
    const Index m = rho.dim_H;
    d.unital_residual = frobenius(rho.apply(rho.source.identity()) -
                                  ComplexMatrix::Identity(m, m));
    for (size_t i = 0; i < rho.images.size(); ++i) {
        const auto& bi = rho.source.basis[i];
        d.star_residual =
            std::max(d.star_residual,
                     frobenius(rho.apply(bi.adjoint()) -
                               ComplexMatrix(rho.images[i].adjoint())));
        for (size_t j = 0; j < rho.images.size(); ++j) {
            const auto& bj = rho.source.basis[j];
            d.multiplicative_residual =
                std::max(d.multiplicative_residual,
                         frobenius(rho.apply(bi * bj) - rho.images[i] * rho.images[j]));
        }
    }
    return d;
}

void validate_representation(const Representation& rho, Tolerance tol) {
    const RepresentationDiagnostics d = representation_diagnostics(rho, tol);
    const double scale = std::sqrt(static_cast<double>(std::max<Index>(rho.dim_H, 1)));
    if (d.worst() > tol.cutoff(scale))
        throw ValidationError("representation invariant: not a unital *-homomorphism");
}

double intertwining_residual(const Representation& rho, const ConcreteModule& e) {
    double worst = 0.0;
    for (size_t j = 0; j < rho.images.size(); ++j) {
        const auto& b = rho.source.basis[j];
        for (const auto& t : e.basis)
            worst = std::max(worst, frobenius(rho.images[j] * t - t * b));
    }
    return worst;
}

Representation commutant_lifting(const OperatorAlgebra& commutant_algebra,
                                 const ConcreteModule& e, Tolerance tol) {
    const Index n = e.dim_G;
    const Index m = e.dim_H;
    const Index r = e.dim();

    // Stack the module basis side by side; the lifting image R solves
    // R [T_1 ... T_r] = [T_1 b ... T_r b], a well-posed least-squares
    // problem exactly when the stacked columns span the target space.
    ComplexMatrix stacked(m, r * n);
    for (Index i = 0; i < r; ++i)
        stacked.middleCols(i * n, n) = e.basis[static_cast<size_t>(i)];

    if (m > 0) {
        Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
        const auto& sv = svd.singularValues();
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        if (sv.size() < m || sv(m - 1) <= tol.cutoff(smax))
            throw NotWellDefinedError(
                "commutant_lifting: module columns do not span the target space");
    }

    Eigen::ColPivHouseholderQR<ComplexMatrix> solver(stacked.transpose());

    Representation rho;
    rho.source = commutant_algebra;
    rho.dim_H = m;
    rho.images.reserve(commutant_algebra.basis.size());
    for (const auto& b : commutant_algebra.basis) {
        ComplexMatrix rhs(m, r * n);
        for (Index i = 0; i < r; ++i)
            rhs.middleCols(i * n, n) = e.basis[static_cast<size_t>(i)] * b;

        // stacked^T R^T = rhs^T
        ComplexMatrix image = solver.solve(rhs.transpose()).transpose();
        const double residual = frobenius(image * stacked - rhs);
        if (residual > tol.cutoff(std::max(1.0, frobenius(rhs))))
            throw NotWellDefinedError(
                "commutant_lifting: defining relations inconsistent (module not "
                "right-action closed or not total)");
        rho.images.push_back(std::move(image));
    }
    try {
        validate_representation(rho, tol);
    } catch (const ValidationError& e) {
        // The solve succeeded but the images fail the homomorphism checks:
        // the module data is numerically inconsistent.
        throw NotWellDefinedError(e.what());
    }
    return rho;
}

ConcreteModule center_intertwiners(const OperatorAlgebra& commutant_algebra,
                                   const Representation& rho, Index dim_G,
                                   Index dim_H, const OperatorAlgebra& base_algebra,
                                   Tolerance tol) {
    std::vector<IntertwinerPair> pairs;
    pairs.reserve(rho.images.size());
    for (size_t j = 0; j < rho.images.size(); ++j)
        pairs.push_back({rho.images[j], commutant_algebra.basis[j]});

    const ComplexMatrix kernel = intertwiner_kernel(pairs, dim_H, dim_G, tol);

    std::vector<ComplexMatrix> elements;
    elements.reserve(kernel.cols());
    for (Index j = 0; j < kernel.cols(); ++j)
        elements.push_back(unvec(kernel.col(j), dim_H, dim_G));

    ConcreteModule out;
    out.dim_G = dim_G;
    out.dim_H = dim_H;
    out.generators = elements;
    out.span = elements.empty() ? Span(dim_H, dim_G) : Span::from(elements, tol);
    out.basis = out.span.matrices();
    out.algebra = base_algebra;

    // Right-action closure holds because the source commutes with the base
    // algebra; assert it.
    for (const auto& t : out.basis)
        for (const auto& b : base_algebra.basis)
            if (!out.span.contains(ComplexMatrix(t * b), tol))
                throw InternalInconsistencyError(
                    "center_intertwiners: span not right-action closed");
    return out;
}

namespace {

// { a : a maps the span into itself and a^* does too }, via iterative
// kernel restriction. Constraints are applied batched: one projection
// against the span per module basis element, one SVD shrink when the
// constraint is active.
OperatorAlgebra invariance_algebra(const ConcreteModule& e, Tolerance tol) {
    const Index m = e.dim_H;
    const Index n = e.dim_G;

    if (m == 0) return algebra_from_span({}, 0, tol);
    if (e.dim() == 0) return algebra_from_span({}, m, tol);

    // The condition on the adjoint, a^* T in E for all T, is equivalent to
    // T^* a lying in the span of the module adjoints, which is linear in a.
    std::vector<ComplexMatrix> adjoints;
    adjoints.reserve(e.basis.size());
    for (const auto& t : e.basis) adjoints.push_back(t.adjoint());
    const Span adjoint_span = Span::from(adjoints, tol);

    ComplexMatrix kernel = ComplexMatrix::Identity(m * m, m * m);
    const double cut = tol.cutoff(1.0);  // module basis elements have unit norm

    for (const auto& t : e.basis) {
        if (kernel.cols() == 0) break;

        ComplexMatrix moved(m * n, kernel.cols());
        for (Index c = 0; c < kernel.cols(); ++c)
            moved.col(c) = vec(ComplexMatrix(unvec(kernel.col(c), m, m) * t));
        kernel = restrict_kernel(kernel, e.span.residual_columns(moved), cut);
        if (kernel.cols() == 0) break;

        ComplexMatrix pulled(n * m, kernel.cols());
        for (Index c = 0; c < kernel.cols(); ++c)
            pulled.col(c) = vec(ComplexMatrix(t.adjoint() * unvec(kernel.col(c), m, m)));
        kernel = restrict_kernel(kernel, adjoint_span.residual_columns(pulled), cut);
    }

    std::vector<ComplexMatrix> elements;
    elements.reserve(kernel.cols());
    for (Index j = 0; j < kernel.cols(); ++j)
        elements.push_back(unvec(kernel.col(j), m, m));
    return algebra_from_span(elements, m, tol);
}

}  // namespace

AdjointablePair adjointable_algebra(const ConcreteModule& e, const Representation& rho,
                                    Tolerance tol) {
    AdjointablePair out;
    out.direct = invariance_algebra(e, tol);

    OperatorAlgebra image_algebra =
        generate_algebra(rho.images, rho.dim_H, tol);
    out.via_commutant = commutant(image_algebra, tol);
    return out;
}

OperatorAlgebra build_linking_algebra(const OperatorAlgebra& base,
                                      const ConcreteModule& e,
                                      const OperatorAlgebra& adjointables,
                                      Tolerance tol) {
    const Index n = base.ambient_dim;
    const Index m = e.dim_H;
    if (e.dim_G != n || adjointables.ambient_dim != m)
        throw InvalidInputError("build_linking_algebra: inconsistent dimensions");
    const Index d = n + m;

    auto embedded = [&](const ComplexMatrix& x, Index row, Index col) {
        ComplexMatrix big = ComplexMatrix::Zero(d, d);
        big.block(row, col, x.rows(), x.cols()) = x;
        return big;
    };

    std::vector<ComplexMatrix> blocks;
    blocks.reserve(base.basis.size() + 2 * e.basis.size() + adjointables.basis.size());
    for (const auto& b : base.basis) blocks.push_back(embedded(b, 0, 0));
    for (const auto& t : e.basis) {
        blocks.push_back(embedded(t, n, 0));
        blocks.push_back(embedded(t.adjoint(), 0, n));
    }
    for (const auto& a : adjointables.basis) blocks.push_back(embedded(a, n, n));

    OperatorAlgebra assembled = algebra_from_span(blocks, d, tol);
    const Index expected = base.dim() + 2 * e.dim() + adjointables.dim();
    if (assembled.dim() != expected)
        throw InternalInconsistencyError(
            "build_linking_algebra: block embedding not independent");

    // Re-closure assertion, done blockwise: the only products not already
    // covered by the input invariants are (module) x (module adjoints)
    // landing in the adjointables and (adjointables) x (module) landing
    // back in the module span.
    if (e.dim() > 0 && adjointables.dim() < m * m) {
        std::vector<ComplexMatrix> outer;
        outer.reserve(e.generators.size() * e.generators.size() * base.basis.size());
        for (const auto& x : e.generators)
            for (const auto& b : base.basis)
                for (const auto& y : e.generators)
                    outer.push_back(x * b * y.adjoint());
        ComplexMatrix stacked(m * m, static_cast<Index>(outer.size()));
        for (size_t c = 0; c < outer.size(); ++c)
            stacked.col(static_cast<Index>(c)) = vec(outer[c]);
        if (adjointables.span.residual_columns(stacked).colwise().norm().maxCoeff() >
            tol.cutoff(stacked.colwise().norm().maxCoeff()))
            throw InvalidInputError(
                "build_linking_algebra: module outer products leave the "
                "adjointable span");
    }
    if (e.dim() > 0 && e.dim() < m * n) {
        ComplexMatrix acted(
            m * n, static_cast<Index>(adjointables.basis.size() * e.generators.size()));
        Index col = 0;
        for (const auto& a : adjointables.basis)
            for (const auto& x : e.generators)
                acted.col(col++) = vec(ComplexMatrix(a * x));
        if (e.span.residual_columns(acted).colwise().norm().maxCoeff() >
            tol.cutoff(std::max(1.0, acted.colwise().norm().maxCoeff())))
            throw InvalidInputError(
                "build_linking_algebra: adjointables do not preserve the module "
                "span");
    }
    // Small spans additionally go through the generic closure loop.
    if (assembled.dim() <= 160) {
        OperatorAlgebra closed = generate_algebra(assembled.basis, d, tol);
        if (closed.dim() != assembled.dim())
            throw InvalidInputError(
                "build_linking_algebra: span not closed under products");
    }

    // Commutant constraints only need a generating family. When the module
    // columns span the target space the corner projection, the base
    // generators and the raw module generators generate the whole linking
    // algebra; otherwise fall back to the full basis.
    bool total = (m == 0);
    if (!total && e.dim() > 0) {
        ComplexMatrix columns(m, e.dim() * n);
        for (Index i = 0; i < e.dim(); ++i)
            columns.middleCols(i * n, n) = e.basis[static_cast<size_t>(i)];
        Eigen::BDCSVD<ComplexMatrix> svd(columns);
        const auto& sv = svd.singularValues();
        total = sv.size() >= m && sv(m - 1) > tol.cutoff(sv(0));
    }
    if (total) {
        std::vector<ComplexMatrix> family;
        family.push_back(embedded(ComplexMatrix::Identity(n, n), 0, 0));
        for (const auto& g : base.generators) family.push_back(embedded(g, 0, 0));
        for (const auto& t : e.generators) {
            family.push_back(embedded(t, n, 0));
            family.push_back(embedded(t.adjoint(), 0, n));
        }
        assembled.generators = std::move(family);
    } else {
        assembled.generators = assembled.basis;
    }
    return assembled;
}

LinkingCommutantCheck check_linking_commutant(const OperatorAlgebra& linking,
                                              const OperatorAlgebra& commutant_algebra,
                                              const Representation& rho,
                                              Tolerance tol) {
    const Index n = commutant_algebra.ambient_dim;
    const Index m = rho.dim_H;
    const OperatorAlgebra linking_commutant = commutant(linking, tol);

    std::vector<ComplexMatrix> diagonal_model;
    diagonal_model.reserve(commutant_algebra.basis.size());
    for (size_t j = 0; j < commutant_algebra.basis.size(); ++j) {
        ComplexMatrix big = ComplexMatrix::Zero(n + m, n + m);
        big.block(0, 0, n, n) = commutant_algebra.basis[j];
        big.block(n, n, m, m) = rho.images[j];
        diagonal_model.push_back(std::move(big));
    }

    const SubspaceComparison cmp =
        subspace_equal(linking_commutant.basis, diagonal_model, tol);
    LinkingCommutantCheck out;
    out.distance = cmp.distance;
    out.commutant_dim = linking_commutant.dim();
    out.expected_dim = commutant_algebra.dim();
    out.ok = cmp.equal && out.commutant_dim == out.expected_dim;
    return out;
}

LinkingBicommutantCheck check_linking_bicommutant(const OperatorAlgebra& linking,
                                                  Index dim_G, Index dim_H,
                                                  const ConcreteModule& center,
                                                  Tolerance tol) {
    LinkingBicommutantCheck out;
    const OperatorAlgebra twice = commutant(commutant(linking, tol), tol);
    out.bicommutant_distance = subspace_equal(twice.span, linking.span, tol).distance;

    // Target-base corner of the bicommutant.
    std::vector<ComplexMatrix> corners;
    corners.reserve(twice.basis.size());
    for (const auto& x : twice.basis) {
        ComplexMatrix corner = x.block(dim_G, 0, dim_H, dim_G);
        if (frobenius(corner) > tol.abs_floor) corners.push_back(std::move(corner));
    }
    if (corners.empty() && center.dim() == 0) {
        out.corner_distance = 0.0;
    } else if (corners.empty()) {
        out.corner_distance = std::sqrt(static_cast<double>(center.dim()));
    } else {
        out.corner_distance = subspace_equal(corners, center.basis, tol).distance;
    }
    out.ok = out.bicommutant_distance <= tol.rel_eps &&
             out.corner_distance <= tol.rel_eps;
    return out;
}

}  // namespace vnlab
