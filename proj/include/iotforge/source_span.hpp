#pragma once

#include <compare>
#include <string>
#include <vector>

namespace iotforge {

// Half-open is not used here: columns and lines are 1-based and inclusive.
struct SourceSpan {
    std::string file;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;    // P001..P003, R001..R002, V001..V012
    std::string message;
    SourceSpan span;
};

// "file:line:col: severity[code]: message"
std::string render_diagnostic(const Diagnostic& d);

// Stable order: (file, span, code).
void sort_diagnostics(std::vector<Diagnostic>& diags);

bool has_errors(const std::vector<Diagnostic>& diags);

} // namespace iotforge
