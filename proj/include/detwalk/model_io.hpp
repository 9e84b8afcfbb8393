#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "detwalk/model.hpp"

namespace detwalk {

// Malformed model document (syntax, schema, or a non-string rational).
class ModelFileError : public ModelError {
    using ModelError::ModelError;
};

RawModel parse_model(std::string_view text);
RawModel load_model_file(const std::string& path);

// Builtin name or path to a model file.
RawModel resolve_model_source(const std::string& source);

// Canonical document for a validated model; always in table form.
nlohmann::json model_to_json(const WalkModel& model);
std::string model_to_text(const WalkModel& model);

// FNV-1a 64 over the canonical document, as 16 hex digits.
std::string model_hash(const WalkModel& model);

}  // namespace detwalk
