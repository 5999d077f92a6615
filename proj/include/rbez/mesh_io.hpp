#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rbez/family.hpp"
#include "rbez/types.hpp"

namespace rbez {

nlohmann::json mesh_to_json(const Mesh& m);
Mesh mesh_from_json(const nlohmann::json& j);

Mesh read_mesh(const std::filesystem::path& path);
void write_mesh(const std::filesystem::path& path, const Mesh& m);

// Writes level_<k>.json for every mesh and manifest.json into dir.
std::filesystem::path write_family(const std::filesystem::path& dir, const MeshFamily& f);
MeshFamily read_family(const std::filesystem::path& manifest);

// 17 significant digits, C locale.
std::string format_number(double v);

}  // namespace rbez
