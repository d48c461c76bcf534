#include "scenevar/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "scenevar/util.hpp"

namespace scenevar {

namespace {

struct CuratedEntry {
  const char* object;
  const char* target;
  int score;  // 0..10, same scale the prompts elicit
};

// object-given-receptacle
constexpr CuratedEntry kReceptacleScores[] = {
    {"pillow", "bed", 9},        {"pillow", "sofa", 7},      {"pillow", "couch", 7},
    {"pillow", "table", 2},      {"pillow", "desk", 1},      {"pillow", "shelf", 2},
    {"cup", "counter", 9},       {"cup", "table", 8},        {"cup", "desk", 6},
    {"cup", "shelf", 4},         {"cup", "bed", 1},          {"cup", "sofa", 2},
    {"mug", "counter", 8},       {"mug", "table", 7},        {"mug", "desk", 6},
    {"mug", "bed", 1},           {"mug", "shelf", 3},
    {"book", "shelf", 9},        {"book", "desk", 8},        {"book", "table", 6},
    {"book", "bed", 3},          {"book", "counter", 2},     {"book", "sofa", 3},
    {"laptop", "desk", 9},       {"laptop", "table", 7},     {"laptop", "bed", 4},
    {"laptop", "sofa", 3},       {"laptop", "counter", 2},   {"laptop", "shelf", 2},
    {"stuffed toy", "bed", 9},   {"stuffed toy", "sofa", 6}, {"stuffed toy", "shelf", 4},
    {"stuffed toy", "table", 2}, {"stuffed toy", "desk", 2}, {"stuffed toy", "counter", 1},
    {"plate", "counter", 9},     {"plate", "table", 8},      {"plate", "shelf", 3},
    {"plate", "desk", 2},        {"plate", "bed", 0},
    {"spoon", "counter", 8},     {"spoon", "table", 7},      {"spoon", "desk", 2},
    {"spoon", "bed", 0},         {"spoon", "shelf", 2},
    {"dumbbell", "table", 8},    {"dumbbell", "desk", 9},    {"dumbbell", "dresser", 1},
    {"dumbbell", "bookshelf", 0},{"dumbbell", "shelf", 4},   {"dumbbell", "bed", 2},
    {"dumbbell", "sofa", 5},     {"dumbbell", "couch", 6},
    {"pen", "desk", 9},          {"pen", "table", 6},        {"pen", "shelf", 3},
    {"pen", "bed", 1},           {"pen", "counter", 3},
    {"bowl", "counter", 9},      {"bowl", "table", 8},       {"bowl", "shelf", 3},
    {"bowl", "desk", 2},         {"bowl", "bed", 0},
};

// object-given-region
constexpr CuratedEntry kRegionScores[] = {
    {"pillow", "bedroom", 9},      {"pillow", "living room", 5}, {"pillow", "kitchen", 1},
    {"pillow", "office", 1},
    {"cup", "kitchen", 9},         {"cup", "living room", 4},    {"cup", "office", 4},
    {"cup", "bedroom", 2},
    {"mug", "kitchen", 8},         {"mug", "office", 6},         {"mug", "living room", 4},
    {"mug", "bedroom", 2},
    {"book", "office", 8},         {"book", "bedroom", 5},       {"book", "living room", 5},
    {"book", "kitchen", 1},
    {"laptop", "office", 9},       {"laptop", "bedroom", 5},     {"laptop", "living room", 5},
    {"laptop", "kitchen", 1},
    {"stuffed toy", "bedroom", 9}, {"stuffed toy", "living room", 4},
    {"stuffed toy", "kitchen", 0}, {"stuffed toy", "office", 1},
    {"plate", "kitchen", 9},       {"plate", "living room", 3},  {"plate", "bedroom", 0},
    {"plate", "office", 1},
    {"spoon", "kitchen", 9},       {"spoon", "living room", 2},  {"spoon", "bedroom", 0},
    {"spoon", "office", 1},
    {"dumbbell", "bedroom", 8},    {"dumbbell", "living room", 6},
    {"dumbbell", "bathroom", 1},   {"dumbbell", "kitchen", 2},   {"dumbbell", "office", 4},
    {"pen", "office", 9},          {"pen", "bedroom", 4},        {"pen", "living room", 3},
    {"pen", "kitchen", 2},
    {"bowl", "kitchen", 9},        {"bowl", "living room", 3},   {"bowl", "bedroom", 1},
    {"bowl", "office", 1},
};

constexpr const char* kKnownReceptacles[] = {
    "bed",     "desk",    "table",  "shelf",       "book shelf", "bookshelf",
    "dresser", "counter", "sofa",   "couch",       "chair",      "nightstand",
    "coffee table"};

struct RegionSignature {
  const char* region;
  std::vector<const char*> objects;
};

const std::vector<RegionSignature>& region_signatures() {
  static const std::vector<RegionSignature> sigs = {
      {"bedroom",
       {"bed", "headboard", "pillow", "dresser", "nightstand", "stool", "carpet", "curtain",
        "stuffed toy", "wardrobe", "lamp"}},
      {"kitchen",
       {"counter", "cup", "mug", "plate", "spoon", "fork", "pot", "kettle", "sink", "fridge",
        "stove", "bowl"}},
      {"living room",
       {"sofa", "couch", "table", "coffee table", "tv", "cushion", "remote", "carpet",
        "bookshelf"}},
      {"office", {"desk", "laptop", "pen", "folder", "chair", "shelf", "book", "monitor"}},
      {"bathroom", {"toilet", "sink", "towel", "soap dispenser", "bathtub", "mirror"}},
  };
  return sigs;
}

double fallback_score(uint64_t seed, const std::string& object, const std::string& target,
                      RelevanceKind kind) {
  uint64_t h = combine_seed(seed, to_lower(object) + "|" + to_lower(target) + "|" +
                                      (kind == RelevanceKind::Region ? "rgn" : "rec"));
  return static_cast<double>(h % 1000) / 1000.0 * 0.3;  // weak, below curated scores
}

}  // namespace

double RelevanceTable::region_score(const std::string& obj, const std::string& region) const {
  auto it = obj_given_rgn.find({to_lower(obj), to_lower(region)});
  return it == obj_given_rgn.end() ? 0.0 : it->second;
}

double RelevanceTable::receptacle_score(const std::string& obj,
                                        const std::string& receptacle) const {
  auto it = obj_given_rec.find({to_lower(obj), to_lower(receptacle)});
  return it == obj_given_rec.end() ? 0.0 : it->second;
}

double joint_relevance(const RelevanceTable& table, const std::string& l_obj,
                       const std::string& l_rgn, const std::string& l_rec) {
  return table.region_score(l_obj, l_rgn) * table.receptacle_score(l_obj, l_rec);
}

OfflineRelevanceProvider::OfflineRelevanceProvider(uint64_t seed) : seed_(seed) {}

std::vector<std::string> OfflineRelevanceProvider::propose_receptacles(
    const std::vector<std::string>& object_labels) {
  std::set<std::string> known;
  for (const char* r : kKnownReceptacles) known.insert(r);
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& label : object_labels) {
    std::string lower = to_lower(label);
    if (known.count(lower) && seen.insert(lower).second) out.push_back(lower);
  }
  return out;
}

std::vector<std::string> OfflineRelevanceProvider::propose_regions(
    const std::vector<std::string>& object_labels) {
  std::set<std::string> objects;
  for (const auto& l : object_labels) objects.insert(to_lower(l));
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& sig : region_signatures()) {
    double hits = 0;
    for (const char* obj : sig.objects) {
      if (objects.count(obj)) hits += 1.0;
    }
    scored.emplace_back(hits, sig.region);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  for (const auto& [score, region] : scored) {
    if (score > 0) out.push_back(region);
  }
  if (out.empty()) return {"unknown"};
  // pad to five candidates the way the prompt asks for
  for (const auto& [score, region] : scored) {
    if (out.size() >= 5) break;
    if (std::find(out.begin(), out.end(), region) == out.end()) out.push_back(region);
  }
  return out;
}

std::map<std::string, double> OfflineRelevanceProvider::score(
    const std::string& object_label, const std::vector<std::string>& targets,
    RelevanceKind kind) {
  std::string obj = to_lower(object_label);
  std::map<std::string, double> out;
  for (const auto& target_raw : targets) {
    std::string target = to_lower(target_raw);
    const CuratedEntry* begin =
        kind == RelevanceKind::Region ? std::begin(kRegionScores) : std::begin(kReceptacleScores);
    const CuratedEntry* end =
        kind == RelevanceKind::Region ? std::end(kRegionScores) : std::end(kReceptacleScores);
    double value = -1.0;
    for (const CuratedEntry* e = begin; e != end; ++e) {
      if (obj == e->object && target == e->target) {
        value = e->score / 10.0;
        break;
      }
    }
    if (value < 0) value = fallback_score(seed_, obj, target, kind);
    out[target_raw] = value;
  }
  return out;
}

RegionMap sliding_window_regions(const std::vector<SemanticInstance>& instances,
                                 const NavGrid& grid, double radius, double step,
                                 RelevanceProviderInterface& provider) {
  if (radius <= 0 || step <= 0) throw std::invalid_argument("window radius/step must be positive");
  RegionMap map;
  map.width = grid.width();
  map.height = grid.height();
  map.vocabulary = {"unknown"};
  map.cells.assign(static_cast<size_t>(map.width) * map.height, 0);

  std::map<std::string, uint16_t> vocab_index = {{"unknown", 0}};
  auto label_id = [&](const std::string& label) {
    auto [it, inserted] = vocab_index.try_emplace(
        label, static_cast<uint16_t>(map.vocabulary.size()));
    if (inserted) map.vocabulary.push_back(label);
    return it->second;
  };

  // votes per cell per label
  std::vector<std::map<uint16_t, int>> votes(map.cells.size());

  const Vec2 lo = grid.origin();
  const Vec2 hi = lo + Vec2(grid.width() * grid.resolution(), grid.height() * grid.resolution());
  for (double yw = lo.y(); yw <= hi.y(); yw += step) {
    for (double xw = lo.x(); xw <= hi.x(); xw += step) {
      Vec2 center(xw, yw);
      std::vector<std::string> labels;
      std::set<std::string> seen;
      for (const auto& inst : instances) {
        Vec2 c(inst.centroid.x(), inst.centroid.y());
        if ((c - center).norm() <= radius && seen.insert(to_lower(inst.label)).second) {
          labels.push_back(inst.label);
        }
      }
      if (labels.empty()) continue;
      auto proposals = provider.propose_regions(labels);
      if (proposals.empty()) continue;
      uint16_t id = label_id(to_lower(proposals.front()));
      int r_cells = static_cast<int>(std::ceil(radius / grid.resolution()));
      GridIndex cc = grid.world_to_cell(center);
      for (int dy = -r_cells; dy <= r_cells; ++dy) {
        for (int dx = -r_cells; dx <= r_cells; ++dx) {
          GridIndex c{cc.x + dx, cc.y + dy};
          if (!grid.in_bounds(c)) continue;
          if ((grid.cell_center(c) - center).norm() > radius) continue;
          ++votes[static_cast<size_t>(c.y) * map.width + c.x][id];
        }
      }
    }
  }
  for (size_t i = 0; i < map.cells.size(); ++i) {
    int best_votes = 0;
    uint16_t best_id = 0;
    for (const auto& [id, n] : votes[i]) {
      if (n > best_votes) {
        best_votes = n;
        best_id = id;
      }
    }
    map.cells[i] = best_id;
  }
  return map;
}

RelevanceTable build_relevance_table(RelevanceProviderInterface& provider,
                                     const std::vector<std::string>& object_categories,
                                     const std::vector<std::string>& regions,
                                     const std::vector<std::string>& receptacles) {
  RelevanceTable table;
  for (const auto& obj : object_categories) {
    if (!regions.empty()) {
      auto scores = provider.score(obj, regions, RelevanceKind::Region);
      for (const auto& [region, value] : scores) {
        table.obj_given_rgn[{to_lower(obj), to_lower(region)}] = value;
      }
    }
    if (!receptacles.empty()) {
      auto scores = provider.score(obj, receptacles, RelevanceKind::Receptacle);
      for (const auto& [rec, value] : scores) {
        table.obj_given_rec[{to_lower(obj), to_lower(rec)}] = value;
      }
    }
  }
  return table;
}

}  // namespace scenevar
