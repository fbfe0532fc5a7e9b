#pragma once

#include "celliptic/operator.hpp"

#include <json.hpp>

#include <string>

namespace celliptic {

nlohmann::json operator_to_json(const Operator &op);

/// Throws ParseError on malformed structure. The result is not validated.
Operator operator_from_json(const nlohmann::json &j);

/// Reads either a JSON file path or a "zoo:<name>" reference.
Operator load_operator(const std::string &ref, int n, int k = 3);

nlohmann::json polynomial_to_json(const Polynomial &p);
Polynomial polynomial_from_json(const nlohmann::json &j);

} // namespace celliptic
