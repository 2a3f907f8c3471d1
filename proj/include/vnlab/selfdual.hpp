#pragma once

#include "vnlab/hilbmod.hpp"
#include "vnlab/types.hpp"

#include <cstdint>
#include <vector>

namespace vnlab {

/// A right-linear algebra-valued functional on a module, given by its
/// values on the module generators. Inner products are linear in the
/// second argument, so the representative y of a functional satisfies
/// phi(x) = y^* x.
struct Functional {
    ConcreteModule module;
    std::vector<ComplexMatrix> values;  ///< one n x n value per generator
};

struct FunctionalValidation {
    bool valid = false;
    double worst_residual = 0.0;  ///< worst violation over a basis of the relation space
};

/// Well-definedness on generators with relations: every coefficient tuple
/// annihilating the generators must annihilate the values. The relation
/// space is computed as a nullspace over tuples with entries running
/// through the algebra span.
FunctionalValidation validate_functional(const Functional& f, Tolerance tol = {});

/// The operator from the target space back to the base space determined
/// by (L_phi)(lift of generator i) = value i; uniquely solvable by
/// totality of the module columns.
ComplexMatrix build_L_phi(const Functional& f, Tolerance tol = {});

/// Riesz representative y = (L_phi)^*; lies in the module span and
/// reproduces the functional through y^* L_i = v_i.
ComplexMatrix riesz_representative(const Functional& f, Tolerance tol = {});

struct NormCheckReport {
    double opnorm = 0.0;      ///< operator norm of L_phi
    double rieszn = 0.0;      ///< norm of the representative, |<y,y>|^(1/2)
    double sampled_lb = 0.0;  ///< best lower bound from random unit module elements
};

/// Norm comparison: the operator norm of L_phi, the norm carried by the
/// Riesz representative, and a seeded sampled lower bound from evaluating
/// the functional on random module elements of unit operator norm.
NormCheckReport norm_check(const Functional& f, int samples, std::uint64_t seed,
                           Tolerance tol = {});

}  // namespace vnlab
