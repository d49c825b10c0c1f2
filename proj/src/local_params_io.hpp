#pragma once

#include <string>

#include "ddc/local_model.hpp"
#include "json_io.hpp"

namespace ddc::detail {

json to_json(const LocalParams& params);

/// Reads the params object. With `partial`, missing keys keep the values
/// already in `base` (used for per-node overrides in configuration files).
LocalParams local_params_from_json(const json& j, const std::string& path, LocalParams base = {},
                                   bool partial = false);

}  // namespace ddc::detail
