#include "scenevar/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace scenevar {

using nlohmann::json;

namespace {

json vec2_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 vec2_from(const json& j) { return Vec2(j.at(0).get<double>(), j.at(1).get<double>()); }

bool rects_overlap(const RoomSpec& a, const RoomSpec& b) {
  if (std::abs(a.floor_z - b.floor_z) > 1e-9) return false;  // different storeys
  return a.x_min < b.x_max && b.x_min < a.x_max && a.y_min < b.y_max && b.y_min < a.y_max;
}

}  // namespace

std::string SceneDescription::to_json_string() const {
  json j;
  j["schema"] = 1;
  j["scene_id"] = scene_id;
  j["seed"] = seed;
  j["wall_thickness"] = wall_thickness;
  j["rooms"] = json::array();
  for (const auto& r : rooms) {
    j["rooms"].push_back({{"name", r.name},
                          {"region", r.region},
                          {"x_min", r.x_min},
                          {"x_max", r.x_max},
                          {"y_min", r.y_min},
                          {"y_max", r.y_max},
                          {"floor_z", r.floor_z},
                          {"ceiling_z", r.ceiling_z}});
  }
  j["receptacles"] = json::array();
  for (const auto& r : receptacles) {
    j["receptacles"].push_back({{"id", r.id},
                                {"label", r.label},
                                {"room", r.room},
                                {"center", vec2_json(r.center)},
                                {"size", vec2_json(r.size)},
                                {"top_z", r.top_z},
                                {"top_thickness", r.top_thickness},
                                {"leg_size", r.leg_size},
                                {"solid", r.solid}});
  }
  j["doors"] = json::array();
  for (const auto& d : doors) {
    j["doors"].push_back({{"center", vec2_json(d.center)}, {"width", d.width}});
  }
  return j.dump(2) + "\n";
}

SceneDescription SceneDescription::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene json parse error: ") + e.what());
  }
  try {
    if (j.at("schema").get<int>() != 1) throw ParseError("unsupported scene schema");
    SceneDescription desc;
    desc.scene_id = j.at("scene_id").get<std::string>();
    desc.seed = j.value("seed", 0ull);
    desc.wall_thickness = j.value("wall_thickness", 0.1);
    for (const auto& r : j.at("rooms")) {
      RoomSpec room;
      room.name = r.at("name").get<std::string>();
      room.region = r.value("region", room.name);
      room.x_min = r.at("x_min").get<double>();
      room.x_max = r.at("x_max").get<double>();
      room.y_min = r.at("y_min").get<double>();
      room.y_max = r.at("y_max").get<double>();
      room.floor_z = r.value("floor_z", 0.0);
      room.ceiling_z = r.value("ceiling_z", 2.5);
      desc.rooms.push_back(room);
    }
    for (const auto& r : j.value("receptacles", json::array())) {
      ReceptacleSpec rec;
      rec.id = r.at("id").get<std::string>();
      rec.label = r.at("label").get<std::string>();
      rec.room = r.at("room").get<std::string>();
      rec.center = vec2_from(r.at("center"));
      rec.size = vec2_from(r.at("size"));
      rec.top_z = r.at("top_z").get<double>();
      rec.top_thickness = r.value("top_thickness", 0.05);
      rec.leg_size = r.value("leg_size", 0.08);
      rec.solid = r.value("solid", false);
      desc.receptacles.push_back(rec);
    }
    for (const auto& d : j.value("doors", json::array())) {
      DoorSpec door;
      door.center = vec2_from(d.at("center"));
      door.width = d.value("width", 0.9);
      desc.doors.push_back(door);
    }
    return desc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene json field error: ") + e.what());
  }
}

const InstanceAnnotation* Scene::annotation(int32_t instance_id) const {
  if (instance_id < 0 || static_cast<size_t>(instance_id) >= annotations.size()) return nullptr;
  return &annotations[instance_id];
}

std::vector<std::string> Scene::receptacle_labels() const {
  std::set<std::string> labels;
  for (const auto& a : annotations) {
    if (a.kind == "receptacle") labels.insert(a.label);
  }
  return {labels.begin(), labels.end()};
}

const RoomSpec* Scene::room_containing(const Vec2& p) const {
  for (const auto& r : description.rooms) {
    if (p.x() >= r.x_min && p.x() <= r.x_max && p.y() >= r.y_min && p.y() <= r.y_max) {
      return &r;
    }
  }
  return nullptr;
}

namespace {

// Emits boxes along one wall edge, leaving gaps for doors that lie on it.
void add_wall_run(TriangleMesh& mesh, bool along_x, double fixed, double lo, double hi,
                  double z0, double z1, double thickness,
                  const std::vector<DoorSpec>& doors, int32_t instance_id) {
  std::vector<std::pair<double, double>> gaps;
  for (const auto& d : doors) {
    double along = along_x ? d.center.x() : d.center.y();
    double perp = along_x ? d.center.y() : d.center.x();
    if (std::abs(perp - fixed) <= thickness) {
      gaps.emplace_back(along - 0.5 * d.width, along + 0.5 * d.width);
    }
  }
  std::sort(gaps.begin(), gaps.end());
  double cursor = lo;
  auto emit = [&](double a, double b) {
    if (b - a < 1e-6) return;
    Vec3 center, size;
    if (along_x) {
      center = Vec3(0.5 * (a + b), fixed, 0.5 * (z0 + z1));
      size = Vec3(b - a, thickness, z1 - z0);
    } else {
      center = Vec3(fixed, 0.5 * (a + b), 0.5 * (z0 + z1));
      size = Vec3(thickness, b - a, z1 - z0);
    }
    mesh.append(make_box(center, size, 0.0, instance_id));
  };
  for (const auto& g : gaps) {
    emit(cursor, std::min(std::max(g.first, cursor), hi));
    cursor = std::max(cursor, g.second);
  }
  emit(cursor, hi);
}

}  // namespace

Scene build_scene(const SceneDescription& desc) {
  if (desc.rooms.empty()) throw std::runtime_error("scene has no rooms: " + desc.scene_id);
  for (size_t i = 0; i < desc.rooms.size(); ++i) {
    for (size_t k = i + 1; k < desc.rooms.size(); ++k) {
      if (rects_overlap(desc.rooms[i], desc.rooms[k])) {
        throw std::runtime_error("overlapping rooms: " + desc.rooms[i].name + " / " +
                                 desc.rooms[k].name);
      }
    }
  }
  Scene scene;
  scene.description = desc;
  auto new_instance = [&](const std::string& label, const std::string& kind) {
    InstanceAnnotation a;
    a.instance_id = static_cast<int32_t>(scene.annotations.size());
    a.label = label;
    a.kind = kind;
    scene.annotations.push_back(a);
    return a.instance_id;
  };

  for (const auto& room : desc.rooms) {
    int32_t floor_id = new_instance("floor", "floor");
    scene.mesh.append(make_horizontal_quad(room.x_min, room.x_max, room.y_min, room.y_max,
                                           room.floor_z, true, floor_id));
    int32_t ceil_id = new_instance("ceiling", "ceiling");
    scene.mesh.append(make_horizontal_quad(room.x_min, room.x_max, room.y_min, room.y_max,
                                           room.ceiling_z, false, ceil_id));
    int32_t wall_id = new_instance("wall", "wall");
    double t = desc.wall_thickness;
    add_wall_run(scene.mesh, true, room.y_min, room.x_min - t, room.x_max + t, room.floor_z,
                 room.ceiling_z, t, desc.doors, wall_id);
    add_wall_run(scene.mesh, true, room.y_max, room.x_min - t, room.x_max + t, room.floor_z,
                 room.ceiling_z, t, desc.doors, wall_id);
    add_wall_run(scene.mesh, false, room.x_min, room.y_min - t, room.y_max + t, room.floor_z,
                 room.ceiling_z, t, desc.doors, wall_id);
    add_wall_run(scene.mesh, false, room.x_max, room.y_min - t, room.y_max + t, room.floor_z,
                 room.ceiling_z, t, desc.doors, wall_id);
  }

  for (const auto& rec : desc.receptacles) {
    auto room_it = std::find_if(desc.rooms.begin(), desc.rooms.end(),
                                [&](const RoomSpec& r) { return r.name == rec.room; });
    if (room_it == desc.rooms.end()) {
      throw std::runtime_error("receptacle " + rec.id + " references unknown room " + rec.room);
    }
    const RoomSpec& room = *room_it;
    double hx = 0.5 * rec.size.x(), hy = 0.5 * rec.size.y();
    if (rec.center.x() - hx < room.x_min || rec.center.x() + hx > room.x_max ||
        rec.center.y() - hy < room.y_min || rec.center.y() + hy > room.y_max) {
      throw std::runtime_error("receptacle " + rec.id + " outside room " + rec.room);
    }
    int32_t id = new_instance(rec.label, "receptacle");
    if (rec.solid) {
      double h = rec.top_z - room.floor_z;
      scene.mesh.append(make_box(Vec3(rec.center.x(), rec.center.y(), room.floor_z + 0.5 * h),
                                 Vec3(rec.size.x(), rec.size.y(), h), 0.0, id));
    } else {
      double t = rec.top_thickness;
      scene.mesh.append(make_box(Vec3(rec.center.x(), rec.center.y(), rec.top_z - 0.5 * t),
                                 Vec3(rec.size.x(), rec.size.y(), t), 0.0, id));
      double leg_h = rec.top_z - t - room.floor_z;
      double inset = 0.5 * rec.leg_size;
      for (double sx : {-1.0, 1.0}) {
        for (double sy : {-1.0, 1.0}) {
          Vec3 leg_center(rec.center.x() + sx * (hx - inset), rec.center.y() + sy * (hy - inset),
                          room.floor_z + 0.5 * leg_h);
          scene.mesh.append(
              make_box(leg_center, Vec3(rec.leg_size, rec.leg_size, leg_h), 0.0, id));
        }
      }
    }
  }
  scene.mesh.validate();
  return scene;
}

Scene make_fixture_scene(const SceneDescription& desc) { return build_scene(desc); }

Scene load_scene_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return build_scene(SceneDescription::from_json_string(buf.str()));
}

void save_scene_json(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scene file: " + path);
  out << scene.description.to_json_string();
}

TriangleMesh load_mesh_ascii(const std::string& path,
                             std::vector<InstanceAnnotation>* annotations) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "meshascii" || version != 1) {
    throw ParseError("unsupported mesh format in " + path);
  }
  size_t nv = 0, nt = 0;
  if (!(in >> nv >> nt)) throw ParseError("bad mesh header in " + path);
  TriangleMesh mesh;
  mesh.vertices.resize(nv);
  for (size_t i = 0; i < nv; ++i) {
    if (!(in >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> mesh.vertices[i].z())) {
      throw ParseError("bad vertex line " + std::to_string(i) + " in " + path);
    }
  }
  std::map<std::string, int32_t> label_ids;
  for (size_t i = 0; i < nt; ++i) {
    uint32_t a, b, c;
    std::string label;
    if (!(in >> a >> b >> c >> label)) {
      throw ParseError("bad face line " + std::to_string(i) + " in " + path);
    }
    mesh.triangles.push_back({a, b, c});
    int32_t id = -1;
    if (label != "-") {
      auto it = label_ids.find(label);
      if (it == label_ids.end()) {
        id = static_cast<int32_t>(label_ids.size());
        label_ids.emplace(label, id);
      } else {
        id = it->second;
      }
    }
    mesh.triangle_instance.push_back(id);
  }
  mesh.validate();
  if (annotations) {
    annotations->assign(label_ids.size(), {});
    for (const auto& [label, id] : label_ids) {
      (*annotations)[id] = {id, label, "imported"};
    }
  }
  return mesh;
}

void save_mesh_ascii(const TriangleMesh& mesh,
                     const std::vector<InstanceAnnotation>& annotations,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << "meshascii 1\n" << mesh.vertex_count() << " " << mesh.triangle_count() << "\n";
  out.precision(17);
  for (const auto& v : mesh.vertices) {
    out << v.x() << " " << v.y() << " " << v.z() << "\n";
  }
  for (size_t i = 0; i < mesh.triangle_count(); ++i) {
    const auto& t = mesh.triangles[i];
    int32_t id = mesh.instance_of(i);
    std::string label = "-";
    if (id >= 0 && static_cast<size_t>(id) < annotations.size()) {
      label = annotations[id].label;
      std::replace(label.begin(), label.end(), ' ', '_');
    }
    out << t[0] << " " << t[1] << " " << t[2] << " " << label << "\n";
  }
}

TriangleMesh placement_mesh(const Placement& placement, int32_t instance_id) {
  double side = placement.footprint_radius * 2.0 / std::sqrt(2.0);  // inscribed square
  Vec3 center = placement.position + Vec3(0, 0, 0.5 * placement.height);
  return make_box(center, Vec3(side, side, placement.height), placement.yaw, instance_id);
}

Scene apply_variant(const Scene& base, const SceneVariant& variant) {
  Scene scene = base;
  for (const auto& placement : variant.placements) {
    InstanceAnnotation a;
    a.instance_id = static_cast<int32_t>(scene.annotations.size());
    a.label = placement.category;
    a.kind = "object";
    scene.annotations.push_back(a);
    scene.mesh.append(placement_mesh(placement, a.instance_id));
  }
  return scene;
}

}  // namespace scenevar
