#pragma once

#include "gchain/models.hpp"

#include <json.hpp>

#include <memory>
#include <string>

namespace gchain {

/// Parse a model from its schema (throws std::invalid_argument naming the
/// offending field). Families: "bkf", "ar", "renewal", "finite-memory",
/// "iid". Decimal values round-trip bit-exactly through the schema.
std::shared_ptr<const Kernel> kernel_from_json(const nlohmann::json& j);
std::shared_ptr<const Kernel> kernel_from_json_text(const std::string& text);

/// Schema of a kernel built by this library (inverse of kernel_from_json).
nlohmann::json model_to_json(const Kernel& kernel);

} // namespace gchain
