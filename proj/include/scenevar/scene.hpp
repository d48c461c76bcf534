#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scenevar/mesh.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RoomSpec {
  std::string name;
  std::string region;  // ground-truth region label
  double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
  double floor_z = 0.0;
  double ceiling_z = 2.5;
};

struct ReceptacleSpec {
  std::string id;
  std::string label;  // receptacle category ("table", "bed", ...)
  std::string room;
  Vec2 center = Vec2::Zero();
  Vec2 size = Vec2::Zero();      // top extent w x d
  double top_z = 0.75;
  double top_thickness = 0.05;
  double leg_size = 0.08;
  bool solid = false;            // solid block down to the floor (beds, counters)
};

struct DoorSpec {
  Vec2 center = Vec2::Zero();  // on a shared wall
  double width = 0.9;
};

// Canonical scene document (schema 1). The mesh is derived from it.
struct SceneDescription {
  std::string scene_id;
  uint64_t seed = 0;
  std::vector<RoomSpec> rooms;
  std::vector<ReceptacleSpec> receptacles;
  std::vector<DoorSpec> doors;
  double wall_thickness = 0.1;

  std::string to_json_string() const;
  static SceneDescription from_json_string(const std::string& text);
};

struct InstanceAnnotation {
  int32_t instance_id = -1;
  std::string label;
  std::string kind;  // "floor", "wall", "ceiling", "receptacle", "object"
};

struct Scene {
  SceneDescription description;
  TriangleMesh mesh;
  std::vector<InstanceAnnotation> annotations;  // indexed by instance_id

  const std::string& scene_id() const { return description.scene_id; }
  const InstanceAnnotation* annotation(int32_t instance_id) const;
  std::vector<std::string> receptacle_labels() const;
  const RoomSpec* room_containing(const Vec2& p) const;
};

// Builds the annotated mesh from a description. Validates room overlap and
// receptacle containment.
Scene build_scene(const SceneDescription& desc);

Scene make_fixture_scene(const SceneDescription& desc);  // alias of build_scene

// Loads a scene-json (schema 1) file. Throws ParseError on malformed input.
Scene load_scene_json(const std::string& path);
void save_scene_json(const Scene& scene, const std::string& path);

// ASCII triangle mesh: header "meshascii 1", vertex and face counts, vertex
// lines, face lines with an optional per-face label token.
TriangleMesh load_mesh_ascii(const std::string& path,
                             std::vector<InstanceAnnotation>* annotations = nullptr);
void save_mesh_ascii(const TriangleMesh& mesh,
                     const std::vector<InstanceAnnotation>& annotations,
                     const std::string& path);

// A placed object as raycastable geometry (yaw-rotated box on its base point).
TriangleMesh placement_mesh(const Placement& placement, int32_t instance_id);

// Scene mesh plus placed-object meshes, with fresh instance ids appended for
// the placements so ground-truth detection sees the variant's objects.
Scene apply_variant(const Scene& base, const SceneVariant& variant);

}  // namespace scenevar
