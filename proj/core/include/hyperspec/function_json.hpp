#pragma once

// JSON text format for FunctionSpec:
//   {"kind":"polynomial","coeffs":[0,1]}
//   {"kind":"exp_mixture","w":[1.0],"t":[1.0],"c0":0.0}
//   {"kind":"bernstein_mixture","b":0.3,"w":[0.7],"t":[2.0]}
//   {"kind":"power","s":0.5}
//   {"kind":"affine_of","inner":{...},"scale":-1,"shift":1,"arg_scale":1}
//   {"kind":"sum_of","terms":[{...},{...}]}

#include <string>

#include <nlohmann/json.hpp>

#include "hyperspec/errors.hpp"
#include "hyperspec/function_catalog.hpp"

namespace hyperspec {

class FunctionSpecError : public InputError {
public:
    /// code is one of parse_error, unknown_kind, missing_field, invalid_parameter.
    FunctionSpecError(std::string code, const std::string& what) : InputError(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

FunctionSpec function_from_json(const nlohmann::json& j);

/// Parses JSON text; syntax errors report line and column.
FunctionSpec parse_function(const std::string& text);

nlohmann::json to_json(const FunctionSpec& f);

/// Line and column (1-based) of a byte offset in text.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

}  // namespace hyperspec
