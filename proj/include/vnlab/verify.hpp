#pragma once

#include "vnlab/instances.hpp"
#include "vnlab/report.hpp"
#include "vnlab/types.hpp"

#include <cstdint>

namespace vnlab {

struct VerifyOptions {
    Tolerance tol;
    int samples = 200;
    std::uint64_t sample_seed = 1;
};

/// Run the full verification pipeline on one instance, in dependency
/// order: algebra invariants and double commutant, tensor-product
/// contracts, the commutant lifting and its homomorphism checks, the
/// linking-algebra commutant and bicommutant identities, the intertwiner
/// center and adjointable comparisons, and per-functional representation
/// and norm checks. Structural failures short-circuit the dependent
/// stages. Invalid input data (rather than a failed identity) raises the
/// corresponding error instead of producing a report.
Report run_verification(const Instance& inst, const VerifyOptions& opts = {});

}  // namespace vnlab
