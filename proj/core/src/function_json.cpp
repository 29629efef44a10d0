#include "hyperspec/function_json.hpp"

#include <algorithm>

namespace hyperspec {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name, const std::string& kind) {
    auto it = j.find(name);
    if (it == j.end()) throw FunctionSpecError("missing_field", kind + ": missing field '" + name + "'");
    return *it;
}

double number(const json& v, const char* name, const std::string& kind) {
    if (!v.is_number())
        throw FunctionSpecError("invalid_parameter", kind + ": field '" + name + "' must be a number");
    return v.get<double>();
}

double number_or(const json& j, const char* name, const std::string& kind, double fallback) {
    auto it = j.find(name);
    return it == j.end() ? fallback : number(*it, name, kind);
}

std::vector<double> numbers(const json& j, const char* name, const std::string& kind) {
    const json& v = field(j, name, kind);
    if (!v.is_array())
        throw FunctionSpecError("invalid_parameter", kind + ": field '" + name + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, name, kind));
    return out;
}

void reject_unknown_fields(const json& j, std::initializer_list<const char*> allowed, const std::string& kind) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "kind") continue;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }))
            throw FunctionSpecError("invalid_parameter", kind + ": unknown field '" + it.key() + "'");
    }
}

template <class Make>
FunctionSpec checked(Make&& make) {
    try {
        return make();
    } catch (const FunctionSpecError&) {
        throw;
    } catch (const InputError& e) {
        throw FunctionSpecError("invalid_parameter", e.what());
    }
}

}  // namespace

FunctionSpec function_from_json(const json& j) {
    if (!j.is_object()) throw FunctionSpecError("invalid_parameter", "function spec must be a JSON object");
    const json& k = field(j, "kind", "function spec");
    if (!k.is_string()) throw FunctionSpecError("invalid_parameter", "function spec: 'kind' must be a string");
    const std::string kind = k.get<std::string>();

    if (kind == "polynomial") {
        reject_unknown_fields(j, {"coeffs"}, kind);
        return checked([&] { return FunctionSpec::polynomial(numbers(j, "coeffs", kind)); });
    }
    if (kind == "exp_mixture") {
        reject_unknown_fields(j, {"w", "t", "c0"}, kind);
        return checked([&] {
            return FunctionSpec::exp_mixture(numbers(j, "w", kind), numbers(j, "t", kind),
                                             number_or(j, "c0", kind, 0.0));
        });
    }
    if (kind == "bernstein_mixture") {
        reject_unknown_fields(j, {"b", "w", "t"}, kind);
        return checked([&] {
            return FunctionSpec::bernstein_mixture(number_or(j, "b", kind, 0.0), numbers(j, "w", kind),
                                                   numbers(j, "t", kind));
        });
    }
    if (kind == "power") {
        reject_unknown_fields(j, {"s"}, kind);
        return checked([&] { return FunctionSpec::power(number(field(j, "s", kind), "s", kind)); });
    }
    if (kind == "affine_of") {
        reject_unknown_fields(j, {"inner", "scale", "shift", "arg_scale"}, kind);
        FunctionSpec inner = function_from_json(field(j, "inner", kind));
        return checked([&] {
            return FunctionSpec::affine_of(std::move(inner), number_or(j, "scale", kind, 1.0),
                                           number_or(j, "shift", kind, 0.0), number_or(j, "arg_scale", kind, 1.0));
        });
    }
    if (kind == "sum_of") {
        reject_unknown_fields(j, {"terms"}, kind);
        const json& terms = field(j, "terms", kind);
        if (!terms.is_array()) throw FunctionSpecError("invalid_parameter", "sum_of: 'terms' must be an array");
        std::vector<FunctionSpec> parts;
        for (const auto& t : terms) parts.push_back(function_from_json(t));
        return checked([&] { return FunctionSpec::sum_of(std::move(parts)); });
    }
    throw FunctionSpecError("unknown_kind", "unknown function kind '" + kind + "'");
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

FunctionSpec parse_function(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points one past the offending character.
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw FunctionSpecError("parse_error", "function spec: JSON syntax error at line " + std::to_string(line) +
                                                   ", column " + std::to_string(col));
    }
    return function_from_json(j);
}

json to_json(const FunctionSpec& f) {
    return std::visit(
        [](const auto& node) -> json {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Polynomial>) {
                return {{"kind", "polynomial"}, {"coeffs", node.coeffs}};
            } else if constexpr (std::is_same_v<T, ExpMixture>) {
                return {{"kind", "exp_mixture"}, {"w", node.weights}, {"t", node.rates}, {"c0", node.atom_at_zero}};
            } else if constexpr (std::is_same_v<T, BernsteinMixture>) {
                return {{"kind", "bernstein_mixture"}, {"b", node.linear}, {"w", node.weights}, {"t", node.rates}};
            } else if constexpr (std::is_same_v<T, Power>) {
                return {{"kind", "power"}, {"s", node.exponent}};
            } else if constexpr (std::is_same_v<T, AffineOf>) {
                return {{"kind", "affine_of"},
                        {"inner", to_json(*node.inner)},
                        {"scale", node.scale},
                        {"shift", node.shift},
                        {"arg_scale", node.arg_scale}};
            } else {
                json terms = json::array();
                for (const auto& t : node.terms) terms.push_back(to_json(*t));
                return {{"kind", "sum_of"}, {"terms", terms}};
            }
        },
        f.node());
}

}  // namespace hyperspec
