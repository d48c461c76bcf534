#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scenevar/config.hpp"
#include "scenevar/navgrid.hpp"
#include "scenevar/types.hpp"

namespace scenevar {

// Per-cell region labels aligned to a NavGrid. Cells never touched by the
// sliding window stay "unknown".
struct RegionMap {
  int width = 0, height = 0;
  std::vector<std::string> vocabulary;  // index 0 is always "unknown"
  std::vector<uint16_t> cells;          // index into vocabulary

  const std::string& label_at(GridIndex c) const {
    return vocabulary[cells[static_cast<size_t>(c.y) * width + c.x]];
  }
};

struct RelevanceTable {
  std::map<std::pair<std::string, std::string>, double> obj_given_rgn;
  std::map<std::pair<std::string, std::string>, double> obj_given_rec;

  double region_score(const std::string& obj, const std::string& region) const;
  double receptacle_score(const std::string& obj, const std::string& receptacle) const;
};

// Joint object-region-receptacle relevance (region x receptacle
// product; missing entries score 0).
double joint_relevance(const RelevanceTable& table, const std::string& l_obj,
                       const std::string& l_rgn, const std::string& l_rec);

enum class RelevanceKind { Region, Receptacle };

class RelevanceProviderInterface {
 public:
  virtual ~RelevanceProviderInterface() = default;
  virtual std::vector<std::string> propose_receptacles(
      const std::vector<std::string>& object_labels) = 0;
  // Region candidates, most plausible first.
  virtual std::vector<std::string> propose_regions(
      const std::vector<std::string>& object_labels) = 0;
  // Normalized scores in [0,1] per target.
  virtual std::map<std::string, double> score(const std::string& object_label,
                                              const std::vector<std::string>& targets,
                                              RelevanceKind kind) = 0;
};

// Deterministic provider backed by a curated commonsense table for common
// household categories, with a seeded-hash fallback for unknown pairs.
class OfflineRelevanceProvider : public RelevanceProviderInterface {
 public:
  explicit OfflineRelevanceProvider(uint64_t seed = 0);
  std::vector<std::string> propose_receptacles(
      const std::vector<std::string>& object_labels) override;
  std::vector<std::string> propose_regions(
      const std::vector<std::string>& object_labels) override;
  std::map<std::string, double> score(const std::string& object_label,
                                      const std::vector<std::string>& targets,
                                      RelevanceKind kind) override;

 private:
  uint64_t seed_;
};

// Circular sliding window sweep (radius r, step dd): instances inside each
// window vote their top region proposal onto the covered cells; final label
// per cell is the majority vote.
RegionMap sliding_window_regions(const std::vector<SemanticInstance>& instances,
                                 const NavGrid& grid, double radius, double step,
                                 RelevanceProviderInterface& provider);

// Scores every (object, region) and (object, receptacle) pair through the
// provider.
RelevanceTable build_relevance_table(RelevanceProviderInterface& provider,
                                     const std::vector<std::string>& object_categories,
                                     const std::vector<std::string>& regions,
                                     const std::vector<std::string>& receptacles);

}  // namespace scenevar
