#pragma once

#include "vnlab/algebra.hpp"
#include "vnlab/hilbmod.hpp"
#include "vnlab/rng.hpp"
#include "vnlab/selfdual.hpp"
#include "vnlab/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vnlab {

/// Desk-scale caps keeping every stacked system comfortably small.
inline constexpr Index kAmbientDimCap = 8;
inline constexpr Index kModuleGeneratorCap = 4;

struct BlockSpec {
    Index irrep_dim = 1;     ///< size of the full matrix block
    Index multiplicity = 1;  ///< how often it repeats on the diagonal
};

/// Recipe for a seeded test instance: a block algebra (direct sum of full
/// matrix blocks with multiplicities, conjugated by a random unitary), a
/// random module over it, and a number of random functionals.
struct InstanceSpec {
    std::uint64_t seed = 0;
    std::vector<BlockSpec> blocks;
    Index k = 1;
    Index functional_count = 1;

    Index ambient_dim() const;
    /// Dimension of the commutant of the block algebra: sum of squared
    /// multiplicities.
    Index expected_commutant_dim() const;

    void validate() const;

    /// Parse a blocks description like "2x1,1x2".
    static std::vector<BlockSpec> parse_blocks(const std::string& text);
};

/// QR-based random unitary with the phase convention that makes it a
/// deterministic function of the stream.
ComplexMatrix haar_unitary(Index n, SplitMix64& rng);

/// Block algebra of the spec conjugated by a seeded random unitary.
OperatorAlgebra random_algebra(const InstanceSpec& spec, Tolerance tol = {});

/// Random module over the algebra: k generators whose Gram matrix is a
/// sum of products of random algebra elements, hence PSD with entries in
/// the algebra span by construction.
AbstractModule random_module(const OperatorAlgebra& algebra, Index k,
                             std::uint64_t seed, Tolerance tol = {});

/// Choi matrix of a random completely positive map with the given Kraus
/// rank; PSD by construction. Block (i, j) of the result is the image of
/// the matrix unit e_ij.
ComplexMatrix random_cp_map(Index n, Index rank, std::uint64_t seed);

/// Functional of the form <y0, .> for a seeded random module element y0;
/// relation-compatible by construction and the round-trip target of the
/// Riesz representative.
Functional random_functional(const ConcreteModule& e, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

/// The on-disk form of a test instance. The module is either explicit
/// Gram data or the Choi matrix of a completely positive map whose GNS
/// construction provides the Gram data.
struct Instance {
    Index dim_G = 0;
    std::vector<ComplexMatrix> algebra_generators;
    bool is_gns = false;
    Index k = 0;                                    // gram route
    std::vector<std::vector<ComplexMatrix>> gram;   // gram route
    ComplexMatrix choi;                             // gns route
    std::vector<std::vector<ComplexMatrix>> functional_values;
    std::uint64_t seed = 0;
    std::optional<InstanceSpec> spec;
};

/// Deterministically generate the full instance for a spec: algebra,
/// module and functional values. Identical specs produce bit-identical
/// files.
Instance make_instance(const InstanceSpec& spec, Tolerance tol = {});

/// Canonical JSON text of an instance; fixed key order, 17-significant-
/// digit floats, one line per matrix.
std::string instance_to_json(const Instance& inst);

void save_instance(const Instance& inst, const std::string& path);

/// Parse and structurally validate instance text. Shape errors and
/// violated stored invariants (e.g. gram hermiticity) raise
/// ValidationError; syntax errors raise ParseError.
Instance parse_instance(const std::string& text, Tolerance tol = {});

Instance load_instance(const std::string& path, Tolerance tol = {});

/// Read a whole file as bytes (for fingerprinting and reload checks).
std::string read_file_bytes(const std::string& path);

}  // namespace vnlab
