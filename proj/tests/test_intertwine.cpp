#include "vnlab/intertwine.hpp"

#include "vnlab/instances.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace vnlab;
using vnlab::testing::mat;
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

struct Setup {
    OperatorAlgebra base;
    OperatorAlgebra lifted;  // commutant of the base
    ConcreteModule module;
    Representation rho;
};

Setup setup_from_gram(const OperatorAlgebra& base,
                      std::vector<std::vector<ComplexMatrix>> gram) {
    AbstractModule m;
    m.algebra = base;
    m.k = static_cast<Index>(gram.size());
    m.gram = std::move(gram);
    validate_module(m);
    const TensorRealization t = tensor_with_G(m);

    Setup s;
    s.base = base;
    s.lifted = commutant(base);
    s.module = module_span_closure(t.lifts, base);
    s.rho = commutant_lifting(s.lifted, s.module);
    return s;
}

Setup setup_random(std::uint64_t seed, std::vector<BlockSpec> blocks, Index k) {
    InstanceSpec spec;
    spec.seed = seed;
    spec.blocks = std::move(blocks);
    spec.k = k;
    const OperatorAlgebra base = random_algebra(spec);
    AbstractModule m = random_module(base, k, seed + 1, {});
    const TensorRealization t = tensor_with_G(m);

    Setup s;
    s.base = base;
    s.lifted = commutant(base);
    s.module = module_span_closure(t.lifts, base);
    s.rho = commutant_lifting(s.lifted, s.module);
    return s;
}

}  // namespace

TEST_CASE("commutant_lifting: the algebra over itself lifts identically") {
    const Setup s = setup_from_gram(full(2), {{ComplexMatrix::Identity(2, 2)}});
    REQUIRE(s.rho.dim_H == 2);
    // The commutant of the full algebra is scalar, and the lift of any
    // commutant element is itself (under the identification H = G given by
    // the unitary lift of the identity gram).
    for (size_t j = 0; j < s.lifted.basis.size(); ++j) {
        const ComplexMatrix& b = s.lifted.basis[j];
        const ComplexMatrix lifted_b =
            s.module.generators[0] * b * s.module.generators[0].adjoint();
        CHECK((s.rho.images[j] - lifted_b).norm() < 1e-10);
    }
    // Unitality holds exactly.
    CHECK((s.rho.apply(ComplexMatrix::Identity(2, 2)) - ComplexMatrix::Identity(2, 2))
              .norm() < 1e-10);
}

TEST_CASE("commutant_lifting: rank-one module over the diagonal algebra") {
    // gram = diag(1, 0) gives H of dimension one and the lift sends
    // diag(c, d) to c.
    const Setup s = setup_from_gram(
        diagonal2(), {{mat({{one, Complex(0)}, {Complex(0), Complex(0)}})}});
    REQUIRE(s.rho.dim_H == 1);
    const ComplexMatrix candidate = mat({{Complex(3), Complex(0)}, {Complex(0), Complex(7)}});
    CHECK(std::abs(s.rho.apply(candidate)(0, 0) - Complex(3)) < 1e-10);
}

TEST_CASE("commutant_lifting: homomorphism diagnostics on random instances") {
    const Setup s = setup_random(321, {{2, 1}, {1, 2}}, 2);
    const RepresentationDiagnostics d = representation_diagnostics(s.rho);
    CHECK(d.unital_residual < 1e-10);
    CHECK(d.multiplicative_residual < 1e-10);
    CHECK(d.star_residual < 1e-10);
    CHECK(intertwining_residual(s.rho, s.module) < 1e-10);
}

TEST_CASE("commutant_lifting: fails on a non-total module") {
    // A module embedded in a larger target space than its columns span.
    ConcreteModule e;
    e.dim_G = 2;
    e.dim_H = 2;
    e.generators = {unit(2, 0, 0)};
    e.span = Span::from({unit(2, 0, 0)});
    e.basis = e.span.matrices();
    e.algebra = scalars(2);
    CHECK_THROWS_AS(commutant_lifting(commutant(e.algebra), e), NotWellDefinedError);
}

TEST_CASE("center_intertwiners: full base algebra sees the whole operator space") {
    const Setup s = setup_from_gram(full(2), {{ComplexMatrix::Identity(2, 2)}});
    const ConcreteModule center =
        center_intertwiners(s.lifted, s.rho, 2, s.rho.dim_H, s.base);
    CHECK(center.dim() == 2 * s.rho.dim_H);
}

TEST_CASE("center_intertwiners: scalar base over itself has a line of intertwiners") {
    // base = scalars on C^2; its commutant is everything and the lift is
    // the identity representation, whose self-intertwiners are scalar.
    const Setup s = setup_from_gram(scalars(2), {{ComplexMatrix::Identity(2, 2)}});
    REQUIRE(s.rho.dim_H == 2);
    const ConcreteModule center =
        center_intertwiners(s.lifted, s.rho, 2, s.rho.dim_H, s.base);
    CHECK(center.dim() == 1);
}

TEST_CASE("center_intertwiners: equals the module span on random instances") {
    for (std::uint64_t seed : {11u, 12u}) {
        const Setup s = setup_random(seed, {{2, 1}, {1, 1}}, 2);
        const ConcreteModule center =
            center_intertwiners(s.lifted, s.rho, s.module.dim_G, s.rho.dim_H, s.base);
        CHECK(subspace_equal(center.span, s.module.span).distance < 1e-9);
    }
}

TEST_CASE("adjointable_algebra: full module sees every operator on the target") {
    const Setup s = setup_from_gram(full(2), {{ComplexMatrix::Identity(2, 2)}});
    const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
    CHECK(pair.direct.dim() == s.rho.dim_H * s.rho.dim_H);
    CHECK(subspace_equal(pair.direct.span, pair.via_commutant.span).equal);
}

TEST_CASE("adjointable_algebra: scalar module is scalar both ways") {
    const Setup s = setup_from_gram(scalars(2), {{ComplexMatrix::Identity(2, 2)}});
    const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
    CHECK(pair.direct.dim() == 1);
    CHECK(pair.via_commutant.dim() == 1);
    CHECK(subspace_equal(pair.direct.span, pair.via_commutant.span).equal);
}

TEST_CASE("adjointable_algebra: both routes agree on random instances") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const Setup s = setup_random(seed, {{2, 1}, {1, 2}}, 2);
        const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
        CHECK(subspace_equal(pair.direct.span, pair.via_commutant.span).distance <
              1e-9);
    }
}

TEST_CASE("build_linking_algebra: full corners give the full algebra") {
    const Setup s = setup_from_gram(full(2), {{ComplexMatrix::Identity(2, 2)}});
    const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
    const OperatorAlgebra linking =
        build_linking_algebra(s.base, s.module, pair.direct);
    const Index d = 2 + s.rho.dim_H;
    CHECK(linking.dim() == d * d);
}

TEST_CASE("build_linking_algebra: degenerate zero module keeps two corners") {
    // Zero module between one-dimensional spaces with scalar corners.
    const OperatorAlgebra base = scalars(1);
    ConcreteModule e;
    e.dim_G = 1;
    e.dim_H = 1;
    e.generators = {ComplexMatrix::Zero(1, 1)};
    e.span = Span(1, 1);
    e.basis = {};
    e.algebra = base;
    const OperatorAlgebra corners = scalars(1);
    const OperatorAlgebra linking = build_linking_algebra(base, e, corners);
    CHECK(linking.dim() == 2);
}

TEST_CASE("build_linking_algebra: dimension bookkeeping on a random instance") {
    const Setup s = setup_random(31, {{2, 1}, {1, 1}}, 2);
    const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
    const OperatorAlgebra linking =
        build_linking_algebra(s.base, s.module, pair.direct);
    CHECK(linking.dim() ==
          s.base.dim() + 2 * s.module.dim() + pair.direct.dim());
}

TEST_CASE("check_linking_commutant: scalar diagonal for the full algebra") {
    const Setup s = setup_from_gram(full(3), {{ComplexMatrix::Identity(3, 3)}});
    const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
    const OperatorAlgebra linking =
        build_linking_algebra(s.base, s.module, pair.direct);
    const LinkingCommutantCheck c = check_linking_commutant(linking, s.lifted, s.rho);
    CHECK(c.ok);
    CHECK(c.commutant_dim == 1);
}

TEST_CASE("check_linking_commutant: diagonal algebra instance") {
    const Setup s = setup_from_gram(
        diagonal2(),
        {{mat({{Complex(2), Complex(0)}, {Complex(0), Complex(1)}})}});
    const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
    const OperatorAlgebra linking =
        build_linking_algebra(s.base, s.module, pair.direct);
    const LinkingCommutantCheck c = check_linking_commutant(linking, s.lifted, s.rho);
    CHECK(c.ok);
    CHECK(c.commutant_dim == 2);
    CHECK(c.expected_dim == 2);
    CHECK(c.distance < 1e-9);
}

TEST_CASE("check_linking_bicommutant: scalar, diagonal and random instances") {
    {
        const Setup s = setup_from_gram(scalars(1), {{mat({{one}})}});
        const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
        const OperatorAlgebra linking =
            build_linking_algebra(s.base, s.module, pair.direct);
        const ConcreteModule center =
            center_intertwiners(s.lifted, s.rho, 1, s.rho.dim_H, s.base);
        const LinkingBicommutantCheck c =
            check_linking_bicommutant(linking, 1, s.rho.dim_H, center);
        CHECK(c.ok);
    }
    {
        const Setup s = setup_from_gram(
            diagonal2(), {{mat({{Complex(1), Complex(0)}, {Complex(0), Complex(3)}})}});
        const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
        const OperatorAlgebra linking =
            build_linking_algebra(s.base, s.module, pair.direct);
        const ConcreteModule center =
            center_intertwiners(s.lifted, s.rho, 2, s.rho.dim_H, s.base);
        const LinkingBicommutantCheck c =
            check_linking_bicommutant(linking, 2, s.rho.dim_H, center);
        CHECK(c.ok);
        CHECK(c.bicommutant_distance < 1e-9);
        CHECK(c.corner_distance < 1e-9);
    }
    {
        const Setup s = setup_random(77, {{2, 1}, {1, 2}}, 2);
        const AdjointablePair pair = adjointable_algebra(s.module, s.rho);
        const OperatorAlgebra linking =
            build_linking_algebra(s.base, s.module, pair.direct);
        const ConcreteModule center = center_intertwiners(
            s.lifted, s.rho, s.module.dim_G, s.rho.dim_H, s.base);
        const LinkingBicommutantCheck c = check_linking_bicommutant(
            linking, s.module.dim_G, s.rho.dim_H, center);
        CHECK(c.ok);

        // Dimension bookkeeping: the commutant has the dimension of the
        // base commutant and the bicommutant returns to the linking span.
        const OperatorAlgebra mc = commutant(linking);
        CHECK(mc.dim() == s.lifted.dim());
        CHECK(commutant(mc).dim() == linking.dim());
    }
}
