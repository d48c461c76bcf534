#pragma once

#include <string>
#include <vector>

#include "scenevar/scene.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

// Names accepted by fixture_scene: "apartment_a", "apartment_b", "studio".
std::vector<std::string> fixture_scene_names();

// Deterministic hand-authored scenes used by the CLI and the test suite.
Scene fixture_scene(const std::string& name);

// Small household object set matched to the curated relevance tables.
std::vector<ObjectModel> fixture_object_library();

}  // namespace scenevar
