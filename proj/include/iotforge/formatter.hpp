#pragma once

#include <string>

#include "iotforge/model.hpp"

namespace iotforge {

// Canonical text form: 2-space indent, fixed section order (system,
// software, hardware, deployment, operational), empty sections omitted.
// parse_model(format_model(m)) is structurally equal to m.
std::string format_model(const IoTModel& model);

} // namespace iotforge
