#pragma once

// JSON encoding of effect parameters, shared by the scene format and the
// session protocol.

#include "json.hpp"

#include "scribble/model.hpp"

namespace scribble {

nlohmann::json effect_params_json(const EffectParams& params);

/// Missing keys take their defaults; unknown keys are "schema(params.<key>)".
EffectParams effect_params_from_json(EffectKind kind, const nlohmann::json& params);

}  // namespace scribble
