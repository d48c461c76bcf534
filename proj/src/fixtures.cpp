#include "scenevar/fixtures.hpp"

#include <stdexcept>

namespace scenevar {

namespace {

ReceptacleSpec receptacle(const std::string& id, const std::string& label,
                          const std::string& room, Vec2 center, Vec2 size, double top_z,
                          bool solid) {
  ReceptacleSpec r;
  r.id = id;
  r.label = label;
  r.room = room;
  r.center = center;
  r.size = size;
  r.top_z = top_z;
  r.solid = solid;
  return r;
}

SceneDescription apartment_a() {
  SceneDescription d;
  d.scene_id = "apartment_a";
  d.rooms = {{"bedroom_1", "bedroom", 0.0, 5.0, 0.0, 4.0, 0.0, 2.5},
             {"living_room_1", "living room", 5.0, 10.0, 0.0, 4.0, 0.0, 2.5}};
  d.receptacles = {
      receptacle("bed_1", "bed", "bedroom_1", {1.4, 2.8}, {2.0, 1.6}, 0.5, true),
      receptacle("desk_1", "desk", "bedroom_1", {4.0, 0.8}, {1.2, 0.6}, 0.75, false),
      receptacle("table_1", "table", "living_room_1", {7.5, 2.4}, {1.4, 0.8}, 0.75, false),
      receptacle("couch_1", "couch", "living_room_1", {8.8, 0.8}, {1.8, 0.8}, 0.45, true)};
  d.doors = {{{5.0, 2.0}, 1.0}};
  return d;
}

SceneDescription apartment_b() {
  SceneDescription d;
  d.scene_id = "apartment_b";
  d.rooms = {{"kitchen_1", "kitchen", 0.0, 4.5, 0.0, 4.0, 0.0, 2.5},
             {"bedroom_2", "bedroom", 4.5, 9.0, 0.0, 4.0, 0.0, 2.5}};
  d.receptacles = {
      receptacle("counter_1", "counter", "kitchen_1", {1.4, 0.55}, {2.0, 0.6}, 0.9, true),
      receptacle("table_2", "table", "kitchen_1", {2.8, 2.6}, {1.2, 0.8}, 0.75, false),
      receptacle("bed_2", "bed", "bedroom_2", {5.9, 2.9}, {2.0, 1.6}, 0.5, true),
      receptacle("desk_2", "desk", "bedroom_2", {7.9, 0.8}, {1.2, 0.6}, 0.75, false)};
  d.doors = {{{4.5, 2.0}, 1.0}};
  return d;
}

SceneDescription studio() {
  SceneDescription d;
  d.scene_id = "studio";
  d.rooms = {{"studio_1", "living room", 0.0, 6.0, 0.0, 5.0, 0.0, 2.5}};
  d.receptacles = {
      receptacle("table_3", "table", "studio_1", {2.0, 2.5}, {1.4, 0.8}, 0.75, false),
      receptacle("bed_3", "bed", "studio_1", {4.6, 1.3}, {2.0, 1.6}, 0.5, true)};
  return d;
}

}  // namespace

std::vector<std::string> fixture_scene_names() {
  return {"apartment_a", "apartment_b", "studio"};
}

Scene fixture_scene(const std::string& name) {
  if (name == "apartment_a") return build_scene(apartment_a());
  if (name == "apartment_b") return build_scene(apartment_b());
  if (name == "studio") return build_scene(studio());
  throw std::invalid_argument("unknown fixture scene: " + name);
}

std::vector<ObjectModel> fixture_object_library() {
  return {{"pillow_a", "pillow", 0.22, 0.12},      {"pillow_b", "pillow", 0.20, 0.10},
          {"cup_a", "cup", 0.05, 0.12},            {"book_a", "book", 0.12, 0.05},
          {"book_b", "book", 0.10, 0.04},          {"laptop_a", "laptop", 0.18, 0.25},
          {"plate_a", "plate", 0.12, 0.04},        {"stuffed_toy_a", "stuffed toy", 0.15, 0.20},
          {"bowl_a", "bowl", 0.10, 0.08}};
}

}  // namespace scenevar
