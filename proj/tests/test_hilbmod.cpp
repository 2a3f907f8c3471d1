#include "vnlab/hilbmod.hpp"

#include "vnlab/instances.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace vnlab;
using vnlab::testing::mat;
using vnlab::testing::random_matrix;
using vnlab::testing::unit;

namespace {

const Complex one(1, 0);

OperatorAlgebra scalars(Index n) { return generate_algebra({}, n); }

OperatorAlgebra full(Index n) {
    std::vector<ComplexMatrix> gens;
    for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q) gens.push_back(unit(n, p, q));
    return generate_algebra(gens, n);
}

OperatorAlgebra diagonal2() {
    return generate_algebra({unit(2, 0, 0), unit(2, 1, 1)}, 2);
}

AbstractModule module_over(const OperatorAlgebra& algebra,
                           std::vector<std::vector<ComplexMatrix>> gram) {
    AbstractModule m;
    m.algebra = algebra;
    m.k = static_cast<Index>(gram.size());
    m.gram = std::move(gram);
    validate_module(m);
    return m;
}

}  // namespace

TEST_CASE("tensor_with_G: rank-one scalar module") {
    const AbstractModule m = module_over(scalars(1), {{mat({{one}})}});
    const TensorRealization t = tensor_with_G(m);
    CHECK(t.dim_H == 1);
    REQUIRE(t.lifts.size() == 1);
    CHECK(std::abs(t.lifts[0](0, 0) - one) < 1e-12);
}

TEST_CASE("tensor_with_G: the algebra as a module over itself") {
    const AbstractModule m = module_over(full(2), {{ComplexMatrix::Identity(2, 2)}});
    const TensorRealization t = tensor_with_G(m);
    CHECK(t.dim_H == 2);
    const ComplexMatrix& l = t.lifts[0];
    CHECK((l.adjoint() * l - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((l * l.adjoint() - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("tensor_with_G: rank-deficient diagonal gram") {
    // gram = diag(1, 0) factors through a single row (1 0) up to phase.
    const AbstractModule m =
        module_over(diagonal2(), {{mat({{one, Complex(0)}, {Complex(0), Complex(0)}})}});
    const TensorRealization t = tensor_with_G(m);
    CHECK(t.dim_H == 1);
    const ComplexMatrix& l = t.lifts[0];
    REQUIRE(l.rows() == 1);
    CHECK(std::abs(std::abs(l(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(l(0, 1)) < 1e-12);
}

TEST_CASE("tensor_with_G: rejects a non-PSD gram") {
    AbstractModule m;
    m.algebra = scalars(1);
    m.k = 1;
    m.gram = {{mat({{Complex(-1)}})}};
    CHECK_THROWS_AS(tensor_with_G(m), NotPsdError);
}

TEST_CASE("tensor_with_G: gram reproduction and totality on random modules") {
    const std::vector<std::vector<BlockSpec>> shapes = {
        {{2, 1}}, {{1, 2}}, {{2, 1}, {1, 1}}, {{1, 1}, {1, 1}}};
    std::uint64_t seed = 900;
    for (const auto& blocks : shapes) {
        InstanceSpec spec;
        spec.seed = seed++;
        spec.blocks = blocks;
        spec.k = 2;
        const OperatorAlgebra b = random_algebra(spec);
        const AbstractModule m = random_module(b, spec.k, seed * 31, {});
        const TensorRealization t = tensor_with_G(m);

        const double scale = frobenius(m.gram_block_matrix());
        for (Index i = 0; i < m.k; ++i)
            for (Index j = 0; j < m.k; ++j)
                CHECK(frobenius(ComplexMatrix(
                          t.lifts[static_cast<size_t>(i)].adjoint() *
                              t.lifts[static_cast<size_t>(j)] -
                          m.gram[static_cast<size_t>(i)][static_cast<size_t>(j)])) <=
                      1e-9 * scale);

        CHECK(t.dim_H <= m.k * b.ambient_dim);
        if (t.dim_H > 0) {
            ComplexMatrix stacked(t.dim_H, m.k * b.ambient_dim);
            for (Index i = 0; i < m.k; ++i)
                stacked.middleCols(i * b.ambient_dim, b.ambient_dim) =
                    t.lifts[static_cast<size_t>(i)];
            Eigen::BDCSVD<ComplexMatrix> svd(stacked);
            CHECK(svd.singularValues()(t.dim_H - 1) > 1e-9 * svd.singularValues()(0));
        }
    }
}

TEST_CASE("module_span_closure: identity generator over the full algebra") {
    const ConcreteModule e = module_span_closure({ComplexMatrix::Identity(3, 3)}, full(3));
    CHECK(e.dim() == 9);
}

TEST_CASE("module_span_closure: identity generator over the scalars") {
    const ConcreteModule e = module_span_closure({ComplexMatrix::Identity(3, 3)}, scalars(3));
    CHECK(e.dim() == 1);
}

TEST_CASE("module_span_closure: corner unit over the diagonal algebra") {
    const ConcreteModule e = module_span_closure({unit(2, 0, 0)}, diagonal2());
    CHECK(e.dim() == 1);
    CHECK(e.contains(unit(2, 0, 0)));
}

TEST_CASE("module_span_closure: closing a closed module is idempotent") {
    InstanceSpec spec;
    spec.seed = 77;
    spec.blocks = {{2, 1}, {1, 1}};
    spec.k = 2;
    const OperatorAlgebra b = random_algebra(spec);
    const AbstractModule m = random_module(b, spec.k, 1234, {});
    const TensorRealization t = tensor_with_G(m);
    const ConcreteModule e = module_span_closure(t.lifts, b);
    const ConcreteModule again = module_span_closure(e.basis, b);
    CHECK(subspace_equal(e.span, again.span).equal);
}

TEST_CASE("inner_product: isometry, orthogonality and the algebra itself") {
    const OperatorAlgebra b = full(2);
    const ConcreteModule e = module_span_closure({ComplexMatrix::Identity(2, 2)}, b);

    // An isometry in the module pairs to the identity.
    const ComplexMatrix u = mat({{Complex(0), one}, {one, Complex(0)}});
    CHECK((inner_product(u, u, e) - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

    // The module is the algebra over itself, so inner products are plain
    // operator products.
    const ComplexMatrix x = mat({{one, Complex(0, 1)}, {Complex(2), Complex(0)}});
    const ComplexMatrix y = mat({{Complex(0), one}, {one, Complex(1, 1)}});
    CHECK((inner_product(x, y, e) - ComplexMatrix(x.adjoint() * y)).norm() < 1e-12);
}

TEST_CASE("inner_product: orthogonal ranges pair to zero") {
    // Over the diagonal algebra both units generate 1-dim modules.
    const OperatorAlgebra b = diagonal2();
    const ConcreteModule e = module_span_closure({unit(2, 0, 0), unit(2, 1, 1)}, b);
    CHECK(inner_product(unit(2, 0, 0), unit(2, 1, 1), e).norm() < 1e-12);
}

TEST_CASE("inner_product: rejects arguments outside the module") {
    const ConcreteModule e = module_span_closure({unit(2, 0, 0)}, diagonal2());
    CHECK_THROWS_AS(inner_product(unit(2, 1, 1), unit(2, 0, 0), e), InvalidInputError);
}

TEST_CASE("polar_parts: unitary input is its own isometry") {
    const ComplexMatrix u = mat({{Complex(0), one}, {Complex(0, 1), Complex(0)}}) *
                            mat({{one, Complex(0)}, {Complex(0), one}});
    const PolarParts p = polar_parts(u);
    CHECK((p.isometry - u).norm() < 1e-10);
    CHECK((p.modulus - ComplexMatrix::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("polar_parts: zero input") {
    const PolarParts p = polar_parts(ComplexMatrix::Zero(2, 3));
    CHECK(p.isometry.norm() < 1e-14);
    CHECK(p.modulus.norm() < 1e-14);
}

TEST_CASE("polar_parts: rank-one diagonal example") {
    // x = [[2,0],[0,0]]: isometry e_11, modulus diag(2,0), from the SVD.
    const PolarParts p = polar_parts(mat({{Complex(2), Complex(0)}, {Complex(0), Complex(0)}}));
    CHECK((p.isometry - unit(2, 0, 0)).norm() < 1e-12);
    CHECK((p.modulus - mat({{Complex(2), Complex(0)}, {Complex(0), Complex(0)}})).norm() <
          1e-12);
}

TEST_CASE("polar_parts: reassembly, projection and modulus membership") {
    SplitMix64 rng(4242);
    InstanceSpec spec;
    spec.seed = 4242;
    spec.blocks = {{2, 1}, {1, 2}};
    spec.k = 2;
    const OperatorAlgebra b = random_algebra(spec);
    const AbstractModule m = random_module(b, spec.k, 999, {});
    const TensorRealization t = tensor_with_G(m);
    const ConcreteModule e = module_span_closure(t.lifts, b);

    // Random module element.
    ComplexMatrix x = ComplexMatrix::Zero(e.dim_H, e.dim_G);
    for (const auto& basis_elt : e.basis) x += rng.cnormal() * basis_elt;

    const PolarParts p = polar_parts(x);
    CHECK((p.isometry * p.modulus - x).norm() <= 1e-9 * std::max(1.0, x.norm()));

    const ComplexMatrix proj = p.isometry.adjoint() * p.isometry;
    CHECK((proj * proj - proj).norm() < 1e-10);

    // The modulus lies in the algebra span because x^* x does.
    CHECK(b.contains(p.modulus, {1e-8, 1e-11}));
}

TEST_CASE("apply_choi and gns_module: identity map on the 2x2 algebra") {
    const OperatorAlgebra b = full(2);
    // Choi of the identity map: sum of e_ij tensor e_ij.
    ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
    const ComplexVector w = vec(ComplexMatrix(ComplexMatrix::Identity(2, 2)));
    choi += w * w.adjoint();

    // phi(e_ij) = e_ij.
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j)
            CHECK((apply_choi(choi, unit(2, i, j)) - unit(2, i, j)).norm() < 1e-13);

    const AbstractModule m = gns_module(b, choi);
    CHECK(m.k == 4);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j)
            CHECK(frobenius(ComplexMatrix(
                      m.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] -
                      ComplexMatrix(b.basis[static_cast<size_t>(i)].adjoint() *
                                    b.basis[static_cast<size_t>(j)]))) < 1e-12);

    const TensorRealization t = tensor_with_G(m);
    CHECK(t.dim_H == 2);
}

TEST_CASE("gns_module: trace map has a scaled-identity gram") {
    const Index n = 2;
    const OperatorAlgebra b = full(n);
    // phi(a) = tr(a)/n * I; Choi block (i,j) = delta_ij / n * I.
    ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
    for (Index i = 0; i < n; ++i)
        choi.block(i * n, i * n, n, n) = ComplexMatrix::Identity(n, n) / double(n);

    const AbstractModule m = gns_module(b, choi);
    // For a Hilbert-Schmidt-orthonormal basis a_i the gram is
    // (delta_ij / n) * I.
    for (Index i = 0; i < m.k; ++i)
        for (Index j = 0; j < m.k; ++j) {
            const ComplexMatrix expected =
                i == j ? ComplexMatrix(ComplexMatrix::Identity(n, n) / double(n))
                       : ComplexMatrix(ComplexMatrix::Zero(n, n));
            CHECK(frobenius(ComplexMatrix(
                      m.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] - expected)) <
                  1e-12);
        }
    const TensorRealization t = tensor_with_G(m);
    CHECK(t.dim_H == m.k * n);  // full rank: kn
}

TEST_CASE("gns_module: conjugation by a unitary keeps the gram PSD") {
    const Index n = 2;
    const OperatorAlgebra b = full(n);
    const ComplexMatrix v = mat({{Complex(0), one}, {one, Complex(0)}});
    ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            choi.block(i * n, j * n, n, n) = v.adjoint() * unit(n, i, j) * v;

    const AbstractModule m = gns_module(b, choi);  // validates PSD internally
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m.gram_block_matrix());
    CHECK(eig.eigenvalues()(0) > -1e-12);
}

TEST_CASE("gns_module: rejects a non-PSD Choi matrix") {
    const OperatorAlgebra b = full(2);
    ComplexMatrix choi = -ComplexMatrix::Identity(4, 4);
    CHECK_THROWS_AS(gns_module(b, choi), NotCpError);
}

TEST_CASE("gns_module: rejects maps leaving the algebra span") {
    // Rank-one CP map a -> (x + y) a (x + y)^* with x + y = e_11 + e_12 + e_21.
    // It sends diag(1, 0) to a matrix with off-diagonal terms, leaving the
    // diagonal algebra.
    const OperatorAlgebra b = diagonal2();
    const ComplexMatrix x = mat({{one, one}, {Complex(0), Complex(0)}});
    const ComplexMatrix y = mat({{Complex(0), Complex(0)}, {one, Complex(0)}});
    const ComplexVector w = vec(ComplexMatrix(x + y));
    const ComplexMatrix choi = w * w.adjoint();
    CHECK_THROWS_AS(gns_module(b, choi), NotAlgebraValuedError);
}
