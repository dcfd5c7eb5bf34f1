#pragma once

#include <string>

#include <json.hpp>

#include "kxchain/instances.hpp"

namespace kxchain {

/// Fields: n, altruist, owners, base_edges, p (decimal string) and an optional
/// certificates object {family, params, items}.
nlohmann::json instance_to_json(const Instance& instance);
nlohmann::json instance_to_json(const GeneratedInstance& generated);

/// Rejects unknown fields and malformed values with InvalidInstance.
GeneratedInstance instance_from_json(const nlohmann::json& doc);

GeneratedInstance read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const GeneratedInstance& generated);

}  // namespace kxchain
