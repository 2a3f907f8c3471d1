#include "vnlab/report.hpp"

#include "vnlab/jsonio.hpp"

namespace vnlab {

bool Report::passed() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string report_to_json(const Report& report) {
    std::string out;
    out += "{\n";
    out += "  \"instance\": \"" + escape(report.instance_path) + "\",\n";
    out += "  \"fingerprint\": \"" + report.fingerprint + "\",\n";
    out += "  \"tolerance\": " + format_double(report.tolerance) + ",\n";
    out += "  \"samples\": " + std::to_string(report.samples) + ",\n";
    out += "  \"passed\": " + std::string(report.passed() ? "true" : "false") + ",\n";
    out += "  \"error\": \"" + escape(report.error) + "\",\n";
    out += "  \"checks\": [";
    for (size_t i = 0; i < report.checks.size(); ++i) {
        const auto& c = report.checks[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"name\": \"" + escape(c.name) + "\", \"passed\": " +
               (c.passed ? "true" : "false") + ", \"value\": " + format_double(c.value) +
               ", \"tolerance\": " + format_double(c.tolerance) +
               ", \"elapsed_ms\": " + format_double(c.elapsed_ms);
        if (!c.note.empty()) out += ", \"note\": \"" + escape(c.note) + "\"";
        out += "}";
    }
    out += report.checks.empty() ? "]\n" : "\n  ]\n";
    out += "}\n";
    return out;
}

}  // namespace vnlab
