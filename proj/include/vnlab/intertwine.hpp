#pragma once

#include "vnlab/algebra.hpp"
#include "vnlab/hilbmod.hpp"
#include "vnlab/linops.hpp"
#include "vnlab/types.hpp"

#include <vector>

namespace vnlab {

/// A unital *-representation of an operator algebra, stored as one image
/// per orthonormal basis element of the source and extended linearly.
struct Representation {
    OperatorAlgebra source;
    Index dim_H = 0;
    std::vector<ComplexMatrix> images;

    /// Linear extension to an arbitrary element of the source span.
    ComplexMatrix apply(const ComplexMatrix& x) const;
};

struct RepresentationDiagnostics {
    double unital_residual = 0.0;
    double multiplicative_residual = 0.0;  ///< worst over source basis pairs
    double star_residual = 0.0;            ///< worst over source basis elements
    double worst() const;
};

RepresentationDiagnostics representation_diagnostics(const Representation& rho,
                                                     Tolerance tol = {});

void validate_representation(const Representation& rho, Tolerance tol = {});

/// Residual of the defining intertwining relations rho(b) T = T b over the
/// module basis; ~0 for a correct lifting.
double intertwining_residual(const Representation& rho, const ConcreteModule& e);

/// The representation of the commutant algebra on the target space of the
/// module, determined by rho(b) T = T b for every module element T. The
/// system is uniquely solvable because the module columns span the target
/// space; an inconsistent system means the module is not right-action
/// closed or not total and raises an error.
Representation commutant_lifting(const OperatorAlgebra& commutant_algebra,
                                 const ConcreteModule& e, Tolerance tol = {});

/// The intertwiner space { x : rho(b) x = x b for all b in the source },
/// wrapped as a concrete module over `base_algebra` (the right action
/// preserves the space because the source commutes with the base algebra).
ConcreteModule center_intertwiners(const OperatorAlgebra& commutant_algebra,
                                   const Representation& rho, Index dim_G,
                                   Index dim_H, const OperatorAlgebra& base_algebra,
                                   Tolerance tol = {});

struct AdjointablePair {
    /// { a : a E and a^* E stay inside E }, computed from the module span.
    OperatorAlgebra direct;
    /// Commutant of the algebra generated by the representation images.
    OperatorAlgebra via_commutant;
};

/// The adjointable operators of the module, computed along both routes;
/// the two spans coincide for a valid module and lifting.
AdjointablePair adjointable_algebra(const ConcreteModule& e, const Representation& rho,
                                    Tolerance tol = {});

/// The linking algebra on the direct sum of base and target space, with
/// the base algebra and the adjointables on the diagonal and the module
/// and its adjoints off the diagonal. The assembled span is re-closed as
/// a safety assertion; a span that grows under closure signals
/// inconsistent inputs.
OperatorAlgebra build_linking_algebra(const OperatorAlgebra& base,
                                      const ConcreteModule& e,
                                      const OperatorAlgebra& adjointables,
                                      Tolerance tol = {});

struct LinkingCommutantCheck {
    bool ok = false;
    double distance = 0.0;  ///< projector distance to the diagonal model
    Index commutant_dim = 0;
    Index expected_dim = 0;
};

/// The commutant of the linking algebra must be exactly the diagonal
/// image { diag(b, rho(b)) } of the base commutant.
LinkingCommutantCheck check_linking_commutant(const OperatorAlgebra& linking,
                                              const OperatorAlgebra& commutant_algebra,
                                              const Representation& rho,
                                              Tolerance tol = {});

struct LinkingBicommutantCheck {
    bool ok = false;
    double bicommutant_distance = 0.0;
    double corner_distance = 0.0;  ///< target-base corner of the bicommutant vs center
};

/// Double-commutant stability of the linking algebra, plus identification
/// of its target-base corner with the intertwiner center.
LinkingBicommutantCheck check_linking_bicommutant(const OperatorAlgebra& linking,
                                                  Index dim_G, Index dim_H,
                                                  const ConcreteModule& center,
                                                  Tolerance tol = {});

}  // namespace vnlab
