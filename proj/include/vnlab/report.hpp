#pragma once

#include <string>
#include <vector>

namespace vnlab {

struct CheckRecord {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< measured distance or residual
    double tolerance = 0.0;  ///< threshold the value was compared against
    double elapsed_ms = 0.0;
    std::string note;        ///< failure detail, empty when passed
};

struct Report {
    std::string instance_path;
    std::string fingerprint;
    double tolerance = 0.0;
    int samples = 0;
    std::vector<CheckRecord> checks;
    std::string error;  ///< nonempty when verification aborted on invalid input

    /// Overall verdict: the conjunction of the per-check passes.
    bool passed() const;
};

std::string report_to_json(const Report& report);

}  // namespace vnlab
