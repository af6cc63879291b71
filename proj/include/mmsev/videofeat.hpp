#pragma once

#include <string>
#include <vector>

#include "mmsev/types.hpp"

namespace mmsev::videofeat {

// The 46 landmarks kept for the polar block: brows, nose bridge, eyes and
// mouth; jaw (0-16) and nostril line (31-35) are excluded.
struct StablePointSet {
  std::vector<int> indices;

  static StablePointSet default_set();
  void validate() const;  // exactly 46 distinct indices in [0, 67]
};

// Regional groups used for the chain-distance block. Left/right are a
// 5-point brow chain followed by a 6-point eye loop; mouth is a 12-point
// outer lip loop, an 8-point inner lip loop, and the 62-66 opening pair.
struct RegionGroups {
  std::vector<int> left;   // 11 indices
  std::vector<int> right;  // 11 indices
  std::vector<int> mouth;  // 20 indices

  static RegionGroups default_groups();
  void validate() const;  // disjoint, sizes 11/11/20, indices in [0, 67]
};

// Per-landmark arithmetic mean of coordinates across frames.
Shape mean_shape(const LandmarkSeries& series);

// For each stable point, distance to the stable-point centroid followed by
// the atan2 angle in (-pi, pi]; a point on the centroid gets angle 0.
// 46 distances + 46 angles = 92 values.
std::vector<double> polar_features(const Shape& shape, const StablePointSet& stable);
std::vector<std::string> polar_feature_names(const StablePointSet& stable);

// Chain/loop Euclidean distances on the mean shape: 4+6 per eye-brow side,
// 12+8 for the lips, plus the mouth-opening distance. 41 values.
std::vector<double> group_features(const LandmarkSeries& series,
                                   const RegionGroups& groups);
std::vector<std::string> group_feature_names(const RegionGroups& groups);

// polar_features ++ group_features = 133 named features.
FeatureVector extract_video_features(const LandmarkSeries& series,
                                     const StablePointSet& stable,
                                     const RegionGroups& groups,
                                     std::string session_id = {});

}  // namespace mmsev::videofeat
