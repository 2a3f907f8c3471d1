#include "vnlab/hilbmod.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace vnlab {

ComplexMatrix AbstractModule::gram_block_matrix() const {
    const Index n = algebra.ambient_dim;
    ComplexMatrix big(k * n, k * n);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            big.block(i * n, j * n, n, n) = gram[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return big;
}

ModuleDiagnostics module_diagnostics(const AbstractModule& m, Tolerance tol) {
    (void)tol;
    ModuleDiagnostics d;
    const Index n = m.algebra.ambient_dim;
    for (Index i = 0; i < m.k; ++i) {
        for (Index j = 0; j < m.k; ++j) {
            const auto& gij = m.gram[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (gij.rows() != n || gij.cols() != n)
                throw InvalidInputError("module gram: block is not n x n");
            require_finite(gij, "module gram");
            const auto& gji = m.gram[static_cast<size_t>(j)][static_cast<size_t>(i)];
            d.hermiticity_residual = std::max(
                d.hermiticity_residual, frobenius(gij - ComplexMatrix(gji.adjoint())));
            d.algebra_membership_residual =
                std::max(d.algebra_membership_residual, m.algebra.span.residual(gij));
        }
    }
    const ComplexMatrix big = m.gram_block_matrix();
    if (big.size() > 0) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
            (big + ComplexMatrix(big.adjoint())) / 2.0);
        d.psd_margin = std::min(0.0, eig.eigenvalues()(0));
    }
    return d;
}

void validate_module(const AbstractModule& m, Tolerance tol) {
    if (m.k <= 0 || m.gram.size() != static_cast<size_t>(m.k))
        throw ValidationError("gram shape: expected k x k blocks");
    for (const auto& row : m.gram)
        if (row.size() != static_cast<size_t>(m.k))
            throw ValidationError("gram shape: expected k x k blocks");

    const ModuleDiagnostics d = module_diagnostics(m, tol);
    const double scale = frobenius(m.gram_block_matrix());
    if (d.hermiticity_residual > tol.cutoff(scale))
        throw ValidationError("gram hermiticity");
    if (d.algebra_membership_residual > tol.cutoff(scale))
        throw ValidationError("gram entries outside the algebra span");
    if (d.psd_margin < -tol.cutoff(scale))
        throw ValidationError("gram block matrix not positive semidefinite");
}

TensorRealization tensor_with_G(const AbstractModule& m, Tolerance tol) {
    const Index n = m.algebra.ambient_dim;
    const ComplexMatrix big = m.gram_block_matrix();

    const PsdFactorization f = psd_factor(big, tol);

    TensorRealization out;
    out.dim_H = f.rank;
    out.lifts.reserve(static_cast<size_t>(m.k));
    for (Index i = 0; i < m.k; ++i)
        out.lifts.push_back(f.factor.middleCols(i * n, n));
    return out;
}

ConcreteModule module_span_closure(const std::vector<ComplexMatrix>& raw,
                                   const OperatorAlgebra& algebra, Tolerance tol) {
    if (raw.empty())
        throw InvalidInputError("module_span_closure: no generators");
    const Index m = raw.front().rows();
    const Index n = algebra.ambient_dim;

    std::vector<ComplexMatrix> family;
    family.reserve(raw.size() * algebra.basis.size());
    for (const auto& t : raw) {
        if (t.rows() != m || t.cols() != n)
            throw InvalidInputError("module_span_closure: generator shape mismatch");
        require_finite(t, "module_span_closure");
        for (const auto& b : algebra.basis) family.push_back(t * b);
    }

    ConcreteModule out;
    out.dim_G = n;
    out.dim_H = m;
    out.generators = raw;
    out.span = (m == 0) ? Span(m, n) : Span::from(family, tol);
    out.basis = out.span.matrices();
    out.algebra = algebra;

    // Right-action closure and algebra-valued inner products, batched.
    const Index r = out.dim();
    const Index nb = algebra.dim();
    if (r > 0) {
        ComplexMatrix acted(m * n, r * nb);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < nb; ++j)
                acted.col(i * nb + j) = vec(ComplexMatrix(
                    out.basis[static_cast<size_t>(i)] * algebra.basis[static_cast<size_t>(j)]));
        if (out.span.residual_columns(acted).colwise().norm().maxCoeff() >
            tol.cutoff(std::sqrt(static_cast<double>(n))))
            throw NotModuleError(
                "module_span_closure: span not closed under the right action");

        ComplexMatrix inner(n * n, r * r);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < r; ++j)
                inner.col(i * r + j) = vec(ComplexMatrix(
                    out.basis[static_cast<size_t>(i)].adjoint() * out.basis[static_cast<size_t>(j)]));
        if (algebra.span.residual_columns(inner).colwise().norm().maxCoeff() >
            tol.cutoff(1.0))
            throw NotModuleError(
                "module_span_closure: inner product leaves the algebra span");
    }
    return out;
}

ComplexMatrix inner_product(const ComplexMatrix& x, const ComplexMatrix& y,
                            const ConcreteModule& e, Tolerance tol) {
    if (x.rows() != e.dim_H || x.cols() != e.dim_G || y.rows() != e.dim_H ||
        y.cols() != e.dim_G)
        throw InvalidInputError("inner_product: arguments have wrong shape");
    if (!e.contains(x, tol) || !e.contains(y, tol))
        throw InvalidInputError("inner_product: argument outside the module span");

    ComplexMatrix result = x.adjoint() * y;
    if (!e.algebra.contains(result, tol))
        throw NotModuleError("inner_product: value outside the algebra span");
    return result;
}

PolarParts polar_parts(const ComplexMatrix& x, Tolerance tol) {
    require_finite(x, "polar_parts");
    const ComplexMatrix gram = x.adjoint() * x;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
        (gram + ComplexMatrix(gram.adjoint())) / 2.0);
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const Index n = gram.rows();
    const double smax = n > 0 ? std::sqrt(std::max(lam(n - 1), 0.0)) : 0.0;
    const double cut = tol.cutoff(smax);

    Eigen::VectorXd roots(n), inverse_roots(n);
    for (Index i = 0; i < n; ++i) {
        const double s = std::sqrt(std::max(lam(i), 0.0));
        roots(i) = s;
        inverse_roots(i) = s > cut ? 1.0 / s : 0.0;  // zero on the kernel
    }

    PolarParts out;
    out.modulus = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
    out.modulus = (out.modulus + ComplexMatrix(out.modulus.adjoint())) / 2.0;
    out.isometry = x * eig.eigenvectors() * inverse_roots.asDiagonal() *
                   eig.eigenvectors().adjoint();
    return out;
}

ComplexMatrix apply_choi(const ComplexMatrix& choi, const ComplexMatrix& a) {
    const Index n = a.rows();
    if (a.cols() != n || choi.rows() != n * n || choi.cols() != n * n)
        throw InvalidInputError("apply_choi: dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            out += a(i, j) * choi.block(i * n, j * n, n, n);
    return out;
}

AbstractModule gns_module(const OperatorAlgebra& algebra, const ComplexMatrix& choi,
                          Tolerance tol) {
    const Index n = algebra.ambient_dim;
    if (choi.rows() != n * n || choi.cols() != n * n)
        throw InvalidInputError("gns_module: Choi matrix must be n^2 x n^2");
    require_finite(choi, "gns_module");

    const double scale = frobenius(choi);
    if (frobenius(choi - ComplexMatrix(choi.adjoint())) > tol.cutoff(scale))
        throw NotCpError("gns_module: Choi matrix not hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(
        (choi + ComplexMatrix(choi.adjoint())) / 2.0);
    if (choi.size() > 0) {
        const double lmax = std::max(eig.eigenvalues()(n * n - 1), 0.0);
        if (eig.eigenvalues()(0) < -tol.cutoff(lmax))
            throw NotCpError("gns_module: Choi matrix not positive semidefinite "
                             "(map not completely positive)");
    }

    // The map must send the algebra span into itself.
    for (const auto& b : algebra.basis)
        if (!algebra.span.contains(apply_choi(choi, b), tol))
            throw NotAlgebraValuedError(
                "gns_module: image of the algebra leaves its span");

    AbstractModule out;
    out.algebra = algebra;
    out.k = algebra.dim();
    out.gram.assign(static_cast<size_t>(out.k),
                    std::vector<ComplexMatrix>(static_cast<size_t>(out.k)));
    for (Index i = 0; i < out.k; ++i)
        for (Index j = 0; j < out.k; ++j)
            out.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] = apply_choi(
                choi, ComplexMatrix(algebra.basis[static_cast<size_t>(i)].adjoint() *
                                    algebra.basis[static_cast<size_t>(j)]));
    validate_module(out, tol);
    return out;
}

}  // namespace vnlab
