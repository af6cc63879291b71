#include "mmsev/videofeat.hpp"

#include <cmath>
#include <numeric>
#include <set>

namespace mmsev::videofeat {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double dist(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void check_index(int idx) {
  if (idx < 0 || idx >= static_cast<int>(kLandmarkCount))
    fail(Errc::out_of_range, "landmark index " + std::to_string(idx) +
                                 " outside [0, 67]");
}

// Segment list for one group: brow path then eye loop (left/right), or
// outer loop + inner loop + opening pair (mouth).
std::vector<std::pair<int, int>> group_segments(const RegionGroups& groups) {
  std::vector<std::pair<int, int>> seg;
  auto path = [&seg](const std::vector<int>& g, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i + 1 < e; ++i) seg.emplace_back(g[i], g[i + 1]);
  };
  auto loop = [&seg, &path](const std::vector<int>& g, std::size_t b, std::size_t e) {
    path(g, b, e);
    seg.emplace_back(g[e - 1], g[b]);
  };
  for (const auto* side : {&groups.left, &groups.right}) {
    path(*side, 0, 5);   // brow chain: 4 distances
    loop(*side, 5, 11);  // eye loop: 6 distances
  }
  loop(groups.mouth, 0, 12);   // outer lip loop: 12
  loop(groups.mouth, 12, 20);  // inner lip loop: 8
  seg.emplace_back(groups.mouth[14], groups.mouth[18]);  // mouth opening
  return seg;
}

}  // namespace

StablePointSet StablePointSet::default_set() {
  StablePointSet s;
  for (int i = 17; i <= 30; ++i) s.indices.push_back(i);  // brows + nose bridge
  for (int i = 36; i <= 67; ++i) s.indices.push_back(i);  // eyes + mouth
  return s;
}

void StablePointSet::validate() const {
  if (indices.size() != 46)
    fail(Errc::wrong_arity, "stable point set must have exactly 46 indices, got " +
                                std::to_string(indices.size()));
  std::set<int> seen;
  for (int idx : indices) {
    check_index(idx);
    if (!seen.insert(idx).second)
      fail(Errc::duplicate_id, "duplicate stable point index " + std::to_string(idx));
  }
}

RegionGroups RegionGroups::default_groups() {
  RegionGroups g;
  for (int i = 17; i <= 21; ++i) g.left.push_back(i);
  for (int i = 36; i <= 41; ++i) g.left.push_back(i);
  for (int i = 22; i <= 26; ++i) g.right.push_back(i);
  for (int i = 42; i <= 47; ++i) g.right.push_back(i);
  for (int i = 48; i <= 67; ++i) g.mouth.push_back(i);
  return g;
}

void RegionGroups::validate() const {
  if (left.size() != 11 || right.size() != 11 || mouth.size() != 20)
    fail(Errc::wrong_arity, "region groups must have sizes 11, 11, 20");
  std::set<int> seen;
  for (const auto* g : {&left, &right, &mouth}) {
    for (int idx : *g) {
      check_index(idx);
      if (!seen.insert(idx).second)
        fail(Errc::duplicate_id,
             "landmark " + std::to_string(idx) + " appears in two groups");
    }
  }
}

Shape mean_shape(const LandmarkSeries& series) {
  if (series.frames.empty())
    fail(Errc::empty_input, "landmark series has no frames");
  Shape mean{};
  for (const Shape& frame : series.frames) {
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
      mean[i].x += frame[i].x;
      mean[i].y += frame[i].y;
    }
  }
  const double n = static_cast<double>(series.frames.size());
  for (auto& p : mean) {
    p.x /= n;
    p.y /= n;
  }
  return mean;
}

std::vector<double> polar_features(const Shape& shape, const StablePointSet& stable) {
  stable.validate();
  Point2 c{};
  for (int idx : stable.indices) {
    c.x += shape[static_cast<std::size_t>(idx)].x;
    c.y += shape[static_cast<std::size_t>(idx)].y;
  }
  c.x /= static_cast<double>(stable.indices.size());
  c.y /= static_cast<double>(stable.indices.size());

  std::vector<double> out;
  out.reserve(stable.indices.size() * 2);
  for (int idx : stable.indices) {
    const Point2& p = shape[static_cast<std::size_t>(idx)];
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    out.push_back(std::hypot(dx, dy));
    double angle = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx);
    if (angle == -kPi) angle = kPi;  // pin to (-pi, pi]
    out.push_back(angle);
  }
  return out;
}

std::vector<std::string> polar_feature_names(const StablePointSet& stable) {
  std::vector<std::string> names;
  names.reserve(stable.indices.size() * 2);
  for (int idx : stable.indices) {
    names.push_back("polar.p" + std::to_string(idx) + ".dist");
    names.push_back("polar.p" + std::to_string(idx) + ".angle");
  }
  return names;
}

std::vector<double> group_features(const LandmarkSeries& series,
                                   const RegionGroups& groups) {
  groups.validate();
  const Shape shape = mean_shape(series);
  std::vector<double> out;
  for (const auto& [a, b] : group_segments(groups))
    out.push_back(dist(shape[static_cast<std::size_t>(a)],
                       shape[static_cast<std::size_t>(b)]));
  return out;
}

std::vector<std::string> group_feature_names(const RegionGroups& groups) {
  groups.validate();
  const auto segments = group_segments(groups);
  // Chain labels in emission order: 4, 6, 4, 6, 12, 8, 1 segments.
  struct Block { const char* label; std::size_t count; };
  const Block blocks[] = {{"left_brow", 4},  {"left_eye", 6},  {"right_brow", 4},
                          {"right_eye", 6},  {"outer_lip", 12}, {"inner_lip", 8},
                          {"mouth_open", 1}};
  std::vector<std::string> names;
  names.reserve(segments.size());
  std::size_t s = 0;
  for (const auto& block : blocks) {
    for (std::size_t i = 0; i < block.count; ++i, ++s) {
      names.push_back("group." + std::string(block.label) + ".d" +
                      std::to_string(segments[s].first) + "_" +
                      std::to_string(segments[s].second));
    }
  }
  return names;
}

FeatureVector extract_video_features(const LandmarkSeries& series,
                                     const StablePointSet& stable,
                                     const RegionGroups& groups,
                                     std::string session_id) {
  const Shape shape = mean_shape(series);

  FeatureVector out;
  out.session_id = std::move(session_id);
  out.modality = Modality::video;
  out.names = polar_feature_names(stable);
  out.values = polar_features(shape, stable);

  const auto group_names = group_feature_names(groups);
  const auto group_values = group_features(series, groups);
  out.names.insert(out.names.end(), group_names.begin(), group_names.end());
  out.values.insert(out.values.end(), group_values.begin(), group_values.end());

  out.validate();
  return out;
}

}  // namespace mmsev::videofeat
