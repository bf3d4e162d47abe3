#include "iotforge/source_span.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace iotforge {

std::string render_diagnostic(const Diagnostic& d) {
    std::ostringstream os;
    os << d.span.file << ':' << d.span.start_line << ':' << d.span.start_col << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code << "]: "
       << d.message;
    return os.str();
}

static auto span_key(const SourceSpan& s) {
    return std::tie(s.file, s.start_line, s.start_col, s.end_line, s.end_col);
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (span_key(a.span) != span_key(b.span)) return span_key(a.span) < span_key(b.span);
        return a.code < b.code;
    });
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

} // namespace iotforge
