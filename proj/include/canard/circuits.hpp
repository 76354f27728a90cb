#pragma once

#include <string>

#include "canard/system.hpp"

namespace canard {

/// Built-in memristor Chua circuits, in the (x1, ..., xk, y1) ordering with
/// the fast coordinate last. `overrides` replaces individual default
/// parameters; unknown names are rejected.
SlowFastSystem chua3d_cubic(const ParamMap& overrides = {});
SlowFastSystem chua3d_pwl(const ParamMap& overrides = {});
SlowFastSystem chua3d_particular(const ParamMap& overrides = {});
SlowFastSystem chua4d_cubic(const ParamMap& overrides = {});

SlowFastSystem make_circuit(const std::string& name,
                            const ParamMap& overrides = {});

/// Builds a system from the JSON descriptor
///   { "circuit": "...", "params": { ... }, "epsilon": e }.
SlowFastSystem system_from_json(const std::string& json_text);

}  // namespace canard
