#pragma once

#include "vnlab/types.hpp"

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace vnlab {

/// Canonical float formatting for every file this library writes:
/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// FNV-1a 64-bit over raw bytes; used to fingerprint instance files.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

/// Complex scalar as a two-element [re, im] array.
inline std::string json_complex(Complex z) {
    return "[" + format_double(z.real()) + "," + format_double(z.imag()) + "]";
}

/// Matrix as a row-major array of rows of complex scalars, on one line.
inline std::string json_matrix(const ComplexMatrix& m) {
    std::string out = "[";
    for (Index i = 0; i < m.rows(); ++i) {
        if (i) out += ",";
        out += "[";
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out += ",";
            out += json_complex(m(i, j));
        }
        out += "]";
    }
    out += "]";
    return out;
}

}  // namespace vnlab
