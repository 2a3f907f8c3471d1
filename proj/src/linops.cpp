#include "vnlab/linops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace vnlab {

namespace {

// Clustering width used when seeding intertwiner kernels from eigenvalue
// matches. Much coarser than any rank cutoff (exact degeneracies are
// reproduced to ~1e-14), much finer than genuine spectral gaps; the seed
// is a superset and is always corrected by an exact SVD pass afterwards.
constexpr double kClusterRel = 1e-7;

// Make the first nonzero component of each column real positive.
void fix_column_phases(ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            double mag = std::abs(m(i, j));
            if (mag > 1e-10) {
                m.col(j) *= std::conj(m(i, j)) / mag;
                break;
            }
        }
    }
}

bool orthonormal_columns(const ComplexMatrix& q) {
    if (q.cols() == 0) return true;
    return (q.adjoint() * q - ComplexMatrix::Identity(q.cols(), q.cols())).norm() <
           1e-10 * std::sqrt(static_cast<double>(q.cols()));
}

bool plausible_singular_values(const Eigen::VectorXd& sv) {
    for (Index i = 0; i < sv.size(); ++i) {
        if (!std::isfinite(sv(i))) return false;
        if (i > 0 && sv(i) > sv(i - 1) * (1 + 1e-12)) return false;
    }
    return true;
}

// Eigen 3.4's divide-and-conquer SVD can emit a non-orthonormal factor on
// matrices with many exactly-zero columns (commutator stacks routinely
// have them). Both helpers verify the factor they hand out and recompute
// with the slower one-sided Jacobi SVD when it looks defective.

struct KernelSplit {
    ComplexMatrix kernel;  // orthonormal columns
    Index rank = 0;
};

// Right singular vectors with singular value <= cut.
KernelSplit svd_kernel(const ComplexMatrix& a, double cut) {
    KernelSplit out;
    {
        Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > cut) ++rank;
        ComplexMatrix kernel = svd.matrixV().rightCols(a.cols() - rank);
        if (plausible_singular_values(sv) && orthonormal_columns(kernel)) {
            out.rank = rank;
            out.kernel = std::move(kernel);
            return out;
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    out.rank = rank;
    out.kernel = svd.matrixV().rightCols(a.cols() - rank);
    return out;
}

struct RangeSplit {
    ComplexMatrix range;  // orthonormal columns
    Eigen::VectorXd singular_values;
};

// Left singular vectors with singular value above the relative cutoff.
RangeSplit svd_range(const ComplexMatrix& a, Tolerance tol) {
    RangeSplit out;
    {
        Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        const double cut = tol.cutoff(sv.size() > 0 ? sv(0) : 0.0);
        Index rank = 0;
        while (rank < sv.size() && sv(rank) > cut) ++rank;
        ComplexMatrix range = svd.matrixU().leftCols(rank);
        if (plausible_singular_values(sv) && orthonormal_columns(range)) {
            out.range = std::move(range);
            out.singular_values = sv;
            return out;
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = tol.cutoff(sv.size() > 0 ? sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    out.range = svd.matrixU().leftCols(rank);
    out.singular_values = sv;
    return out;
}

}  // namespace

ComplexMatrix nullspace(const ComplexMatrix& a, Tolerance tol) {
    if (a.size() == 0)
        throw InvalidInputError("nullspace: empty matrix");
    require_finite(a, "nullspace");

    const double smax = operator_norm(a);
    KernelSplit split = svd_kernel(a, tol.cutoff(smax));
    fix_column_phases(split.kernel);
    return split.kernel;
}

PsdFactorization psd_factor(const ComplexMatrix& k, Tolerance tol) {
    if (k.rows() != k.cols())
        throw InvalidInputError("psd_factor: matrix not square");
    require_finite(k, "psd_factor");

    const double scale = frobenius(k);
    if (frobenius(k - k.adjoint()) > tol.cutoff(scale))
        throw InvalidInputError("psd_factor: matrix not hermitian");

    const ComplexMatrix h = (k + ComplexMatrix(k.adjoint())) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    const Eigen::VectorXd& lam = eig.eigenvalues();  // ascending
    const Index m = k.rows();
    const double lmax = m > 0 ? std::max(lam(m - 1), 0.0) : 0.0;

    if (m > 0 && lam(0) < -tol.cutoff(lmax))
        throw NotPsdError("psd_factor: eigenvalue " + std::to_string(lam(0)) +
                          " below the PSD tolerance");

    const double cut = tol.cutoff(lmax);
    Index rank = 0;
    for (Index i = 0; i < m; ++i)
        if (lam(i) > cut) ++rank;

    ComplexMatrix vectors = eig.eigenvectors();
    fix_column_phases(vectors);

    PsdFactorization out;
    out.rank = rank;
    out.factor.resize(rank, m);
    // Descending eigenvalue order: eigenvalue m-1 first.
    for (Index r = 0; r < rank; ++r) {
        const Index src = m - 1 - r;
        out.factor.row(r) = std::sqrt(lam(src)) * vectors.col(src).adjoint();
    }
    return out;
}

double operator_norm(const ComplexMatrix& a) {
    require_finite(a, "operator_norm");
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a, Tolerance tol) {
    if (a.rows() != a.cols())
        throw InvalidInputError("sqrt_psd: matrix not square");
    require_finite(a, "sqrt_psd");

    const double scale = frobenius(a);
    if (frobenius(a - a.adjoint()) > tol.cutoff(scale))
        throw InvalidInputError("sqrt_psd: matrix not hermitian");

    const ComplexMatrix h = (a + ComplexMatrix(a.adjoint())) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const Index m = a.rows();
    const double lmax = m > 0 ? std::max(lam(m - 1), 0.0) : 0.0;
    if (m > 0 && lam(0) < -tol.cutoff(lmax))
        throw NotPsdError("sqrt_psd: eigenvalue " + std::to_string(lam(0)) +
                          " below the PSD tolerance");

    Eigen::VectorXd roots(m);
    for (Index i = 0; i < m; ++i) roots(i) = std::sqrt(std::max(lam(i), 0.0));
    ComplexMatrix s = eig.eigenvectors() * roots.asDiagonal() *
                      eig.eigenvectors().adjoint();
    return (s + ComplexMatrix(s.adjoint())) / 2.0;
}

// ---------------------------------------------------------------------------
// Span
// ---------------------------------------------------------------------------

Span Span::from(const std::vector<ComplexMatrix>& family, Tolerance tol) {
    if (family.empty())
        throw InvalidInputError("Span::from: empty family has no shape");
    const Index rows = family.front().rows();
    const Index cols = family.front().cols();

    ComplexMatrix stacked(rows * cols, static_cast<Index>(family.size()));
    for (size_t i = 0; i < family.size(); ++i) {
        const auto& f = family[i];
        if (f.rows() != rows || f.cols() != cols)
            throw InvalidInputError("Span::from: mixed shapes in family");
        require_finite(f, "Span::from");
        stacked.col(static_cast<Index>(i)) = vec(f);
    }

    Span out(rows, cols);
    out.flat_ = svd_range(stacked, tol).range;
    fix_column_phases(out.flat_);
    return out;
}

Span Span::full(Index rows, Index cols) {
    Span out(rows, cols);
    out.flat_ = ComplexMatrix::Identity(rows * cols, rows * cols);
    return out;
}

std::vector<ComplexMatrix> Span::matrices() const {
    std::vector<ComplexMatrix> out;
    out.reserve(dim());
    for (Index j = 0; j < dim(); ++j)
        out.push_back(unvec(flat_.col(j), rows_, cols_));
    return out;
}

ComplexVector Span::coefficients(const ComplexMatrix& x) const {
    return flat_.adjoint() * vec(x);
}

ComplexMatrix Span::project(const ComplexMatrix& x) const {
    return unvec(flat_ * coefficients(x), rows_, cols_);
}

double Span::residual(const ComplexMatrix& x) const {
    ComplexVector v = vec(x);
    return (v - flat_ * (flat_.adjoint() * v)).norm();
}

ComplexMatrix Span::residual_columns(const ComplexMatrix& stacked) const {
    return stacked - flat_ * (flat_.adjoint() * stacked);
}

bool Span::contains(const ComplexMatrix& x, Tolerance tol) const {
    return residual(x) <= tol.cutoff(frobenius(x));
}

bool Span::append(const ComplexMatrix& x, Tolerance tol) {
    ComplexVector v = vec(x);
    const double scale = v.norm();
    v -= flat_ * (flat_.adjoint() * v);
    v -= flat_ * (flat_.adjoint() * v);  // reorthogonalize
    if (v.norm() <= tol.cutoff(scale)) return false;
    flat_.conservativeResize(Eigen::NoChange, flat_.cols() + 1);
    flat_.col(flat_.cols() - 1) = v / v.norm();
    return true;
}

SubspaceComparison subspace_equal(const Span& a, const Span& b, Tolerance tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidInputError("subspace_equal: element shapes differ");

    // ||P_A - P_B||_F^2 = ||(I - P_B) Q_A||_F^2 + ||(I - P_A) Q_B||_F^2,
    // computed from residuals to stay accurate when the distance is tiny.
    const double d2 = b.residual_columns(a.flat()).squaredNorm() +
                      a.residual_columns(b.flat()).squaredNorm();

    SubspaceComparison out;
    out.dim_a = a.dim();
    out.dim_b = b.dim();
    out.distance = std::sqrt(std::max(d2, 0.0));
    out.equal = out.distance <= tol.rel_eps;
    return out;
}

SubspaceComparison subspace_equal(const std::vector<ComplexMatrix>& basis_a,
                                  const std::vector<ComplexMatrix>& basis_b,
                                  Tolerance tol) {
    if (basis_a.empty() || basis_b.empty()) {
        // Empty families span {0}; compare against whatever shape the other has.
        const Index r = basis_a.empty() ? (basis_b.empty() ? 0 : basis_b.front().rows())
                                        : basis_a.front().rows();
        const Index c = basis_a.empty() ? (basis_b.empty() ? 0 : basis_b.front().cols())
                                        : basis_a.front().cols();
        Span ea(r, c), eb(r, c);
        Span sa = basis_a.empty() ? ea : Span::from(basis_a, tol);
        Span sb = basis_b.empty() ? eb : Span::from(basis_b, tol);
        return subspace_equal(sa, sb, tol);
    }
    return subspace_equal(Span::from(basis_a, tol), Span::from(basis_b, tol), tol);
}

// ---------------------------------------------------------------------------
// Intertwiner kernels
// ---------------------------------------------------------------------------

ComplexMatrix restrict_kernel(const ComplexMatrix& candidates,
                              const ComplexMatrix& constrained, double cut) {
    if (constrained.norm() <= cut)
        return candidates;  // constraint already satisfied on the whole candidate
    return candidates * svd_kernel(constrained, cut).kernel;
}

namespace {

struct HermitianConstraint {
    ComplexMatrix left;   // hermitian p x p
    ComplexMatrix right;  // hermitian q x q
    double scale = 0.0;
};

// Apply X -> left X - X right to every (flattened) column of q.
ComplexMatrix apply_constraint(const HermitianConstraint& c, const ComplexMatrix& q,
                               Index p, Index qq) {
    ComplexMatrix out(q.rows(), q.cols());
    for (Index j = 0; j < q.cols(); ++j) {
        ComplexMatrix x = unvec(q.col(j), p, qq);
        out.col(j) = vec(ComplexMatrix(c.left * x - x * c.right));
    }
    return out;
}

}  // namespace

ComplexMatrix intertwiner_kernel(const std::vector<IntertwinerPair>& pairs,
                                 Index p, Index q, Tolerance tol) {
    const Index dim = p * q;

    std::vector<HermitianConstraint> constraints;
    constraints.reserve(2 * pairs.size());
    for (const auto& pr : pairs) {
        if (pr.left.rows() != p || pr.left.cols() != p || pr.right.rows() != q ||
            pr.right.cols() != q)
            throw InvalidInputError("intertwiner_kernel: pair has wrong shape");
        require_finite(pr.left, "intertwiner_kernel");
        require_finite(pr.right, "intertwiner_kernel");

        const Complex half(0.5, 0.0);
        const Complex halfi(0.0, -0.5);
        HermitianConstraint re{half * (pr.left + ComplexMatrix(pr.left.adjoint())),
                               half * (pr.right + ComplexMatrix(pr.right.adjoint())),
                               0.0};
        HermitianConstraint im{halfi * (pr.left - ComplexMatrix(pr.left.adjoint())),
                               halfi * (pr.right - ComplexMatrix(pr.right.adjoint())),
                               0.0};
        for (auto* c : {&re, &im}) {
            c->scale = std::max(frobenius(c->left), frobenius(c->right));
            if (c->scale > tol.abs_floor) constraints.push_back(*c);
        }
    }

    if (constraints.empty()) return ComplexMatrix::Identity(dim, dim);

    // Seed: pick the hermitian pair whose eigenvalue matching predicts the
    // smallest kernel, and take the explicit matching basis
    // { u_i w_j^* : lambda_i ~ mu_j } in the joint eigenbases.
    Index best = -1;
    Index best_count = dim + 1;
    std::vector<Eigen::VectorXd> lvals(constraints.size()), rvals(constraints.size());
    std::vector<ComplexMatrix> lvecs(constraints.size()), rvecs(constraints.size());
    for (size_t c = 0; c < constraints.size(); ++c) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> le(constraints[c].left);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> re(constraints[c].right);
        lvals[c] = le.eigenvalues();
        rvals[c] = re.eigenvalues();
        lvecs[c] = le.eigenvectors();
        rvecs[c] = re.eigenvectors();
        const double width = kClusterRel * constraints[c].scale + tol.abs_floor;
        Index count = 0;
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < q; ++j)
                if (std::abs(lvals[c](i) - rvals[c](j)) <= width) ++count;
        if (count < best_count) {
            best_count = count;
            best = static_cast<Index>(c);
        }
    }

    ComplexMatrix kernel;
    if (best_count >= dim) {
        kernel = ComplexMatrix::Identity(dim, dim);
    } else {
        const auto& c = constraints[static_cast<size_t>(best)];
        const double width = kClusterRel * c.scale + tol.abs_floor;
        kernel.resize(dim, best_count);
        Index col = 0;
        for (Index i = 0; i < p; ++i)
            for (Index j = 0; j < q; ++j)
                if (std::abs(lvals[best](i) - rvals[best](j)) <= width)
                    kernel.col(col++) =
                        vec(ComplexMatrix(lvecs[best].col(i) * rvecs[best].col(j).adjoint()));
    }

    // One exact pass over every constraint (including the seed, whose
    // clustering was deliberately generous).
    for (const auto& c : constraints) {
        if (kernel.cols() == 0) break;
        const double cut = tol.cutoff(c.scale);
        kernel = restrict_kernel(kernel, apply_constraint(c, kernel, p, q), cut);
    }
    return kernel;
}

}  // namespace vnlab
