#include "vnlab/selfdual.hpp"

#include "vnlab/linops.hpp"
#include "vnlab/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace vnlab {

namespace {

void check_shapes(const Functional& f) {
    const Index n = f.module.dim_G;
    if (f.values.size() != f.module.generators.size())
        throw InvalidInputError("functional: one value per module generator required");
    for (const auto& v : f.values) {
        if (v.rows() != n || v.cols() != n)
            throw InvalidInputError("functional: value is not n x n");
        require_finite(v, "functional value");
    }
}

double value_scale(const Functional& f) {
    double scale = 1.0;
    for (const auto& v : f.values) scale = std::max(scale, frobenius(v));
    return scale;
}

}  // namespace

FunctionalValidation validate_functional(const Functional& f, Tolerance tol) {
    check_shapes(f);
    const auto& e = f.module;
    const Index n = e.dim_G;
    const Index m = e.dim_H;
    const Index k = static_cast<Index>(e.generators.size());
    const Index nb = e.algebra.dim();

    for (const auto& v : f.values)
        if (!e.algebra.contains(v, tol))
            throw NotAlgebraValuedError("functional: value outside the algebra span");

    // Relation space: coefficient tuples (one algebra element per
    // generator) annihilating the generators.
    ComplexMatrix relations;
    if (m == 0) {
        relations = ComplexMatrix::Identity(k * nb, k * nb);
    } else {
        ComplexMatrix system(m * n, k * nb);
        for (Index i = 0; i < k; ++i)
            for (Index c = 0; c < nb; ++c)
                system.col(i * nb + c) = vec(ComplexMatrix(
                    e.generators[static_cast<size_t>(i)] *
                    e.algebra.basis[static_cast<size_t>(c)]));
        relations = nullspace(system, tol);
    }

    FunctionalValidation out;
    for (Index r = 0; r < relations.cols(); ++r) {
        ComplexMatrix combo = ComplexMatrix::Zero(n, n);
        for (Index i = 0; i < k; ++i)
            for (Index c = 0; c < nb; ++c)
                combo += relations(i * nb + c, r) *
                         (f.values[static_cast<size_t>(i)] *
                          e.algebra.basis[static_cast<size_t>(c)]);
        out.worst_residual = std::max(out.worst_residual, frobenius(combo));
    }
    out.valid = out.worst_residual <= tol.cutoff(value_scale(f));
    return out;
}

ComplexMatrix build_L_phi(const Functional& f, Tolerance tol) {
    check_shapes(f);
    const auto& e = f.module;
    const Index n = e.dim_G;
    const Index m = e.dim_H;
    const Index k = static_cast<Index>(e.generators.size());

    ComplexMatrix stacked(m, k * n);
    ComplexMatrix targets(n, k * n);
    for (Index i = 0; i < k; ++i) {
        stacked.middleCols(i * n, n) = e.generators[static_cast<size_t>(i)];
        targets.middleCols(i * n, n) = f.values[static_cast<size_t>(i)];
    }

    ComplexMatrix lphi;
    if (m == 0) {
        lphi.resize(n, 0);
    } else {
        Eigen::ColPivHouseholderQR<ComplexMatrix> solver(stacked.transpose());
        lphi = solver.solve(targets.transpose()).transpose();
    }

    const double residual = m == 0 ? frobenius(targets)
                                   : frobenius(ComplexMatrix(lphi * stacked - targets));
    if (residual > tol.cutoff(value_scale(f)))
        throw InvalidFunctionalError(
            "build_L_phi: defining equations inconsistent; functional is not "
            "right-linear on this module");
    return lphi;
}

ComplexMatrix riesz_representative(const Functional& f, Tolerance tol) {
    const ComplexMatrix lphi = build_L_phi(f, tol);
    const ComplexMatrix y = lphi.adjoint();

    if (f.module.span.residual(y) > tol.cutoff(std::max(1.0, frobenius(y))))
        throw InternalInconsistencyError(
            "riesz_representative: representative escapes the module span");
    return y;
}

NormCheckReport norm_check(const Functional& f, int samples, std::uint64_t seed,
                           Tolerance tol) {
    const ComplexMatrix lphi = build_L_phi(f, tol);
    const ComplexMatrix y = lphi.adjoint();

    NormCheckReport out;
    out.opnorm = operator_norm(lphi);
    out.rieszn = std::sqrt(operator_norm(ComplexMatrix(y.adjoint() * y)));

    const auto& e = f.module;
    const Index k = static_cast<Index>(e.generators.size());
    const Index nb = e.algebra.dim();
    const Index n = e.dim_G;

    SplitMix64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        // Random module element of unit operator norm; zero draws are
        // rejected and redrawn a bounded number of times.
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<ComplexMatrix> coeff(static_cast<size_t>(k));
            for (Index i = 0; i < k; ++i) {
                ComplexMatrix b = ComplexMatrix::Zero(n, n);
                for (Index c = 0; c < nb; ++c)
                    b += rng.cnormal() * e.algebra.basis[static_cast<size_t>(c)];
                coeff[static_cast<size_t>(i)] = std::move(b);
            }
            ComplexMatrix x = ComplexMatrix::Zero(e.dim_H, n);
            ComplexMatrix value = ComplexMatrix::Zero(n, n);
            for (Index i = 0; i < k; ++i) {
                x += e.generators[static_cast<size_t>(i)] * coeff[static_cast<size_t>(i)];
                value += f.values[static_cast<size_t>(i)] * coeff[static_cast<size_t>(i)];
            }
            const double norm_x = operator_norm(x);
            if (norm_x <= 1e-12) continue;
            out.sampled_lb = std::max(out.sampled_lb, operator_norm(value) / norm_x);
            break;
        }
    }
    return out;
}

}  // namespace vnlab
