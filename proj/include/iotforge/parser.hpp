#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iotforge/model.hpp"
#include "iotforge/source_span.hpp"

namespace iotforge {

struct ParseResult {
    std::optional<IoTModel> model; // engaged iff diagnostics empty
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return model.has_value(); }
};

// Parses the textual modeling language. Diagnostic codes: P001 lexical,
// P002 syntax, P003 duplicate section. Recovers at section boundaries so
// several errors can be reported in one run.
ParseResult parse_model(std::string_view source, const std::string& file);

bool is_reserved_word(std::string_view word);

} // namespace iotforge
