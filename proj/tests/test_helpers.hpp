#pragma once

#include "vnlab/rng.hpp"
#include "vnlab/types.hpp"

#include <initializer_list>
#include <vector>

namespace vnlab::testing {

/// Build a matrix from nested initializer lists of complex scalars.
inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = static_cast<Index>(rows.begin()->size());
    ComplexMatrix out(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        Index j = 0;
        for (const auto& z : row) out(i, j++) = z;
        ++i;
    }
    return out;
}

/// Matrix unit e_pq of the given size.
inline ComplexMatrix unit(Index n, Index p, Index q) {
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    out(p, q) = 1.0;
    return out;
}

inline ComplexMatrix random_matrix(Index rows, Index cols, SplitMix64& rng) {
    ComplexMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = rng.cnormal();
    return out;
}

/// Random hermitian PSD matrix of the given size (full rank almost surely).
inline ComplexMatrix random_psd(Index n, SplitMix64& rng) {
    const ComplexMatrix a = random_matrix(n, n, rng);
    return a.adjoint() * a;
}

}  // namespace vnlab::testing
