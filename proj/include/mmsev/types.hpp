#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsev/error.hpp"

namespace mmsev {

enum class Split { train, development, test };
enum class Modality { audio, video, text };

std::string to_string(Split s);
std::string to_string(Modality m);
std::optional<Split> split_from_string(std::string_view s);
std::optional<Modality> modality_from_string(std::string_view s);

// PHQ-8 severity range. Predictions are clamped to it at the reporting
// layer only; model internals stay unclamped.
inline constexpr double kPhq8Min = 0.0;
inline constexpr double kPhq8Max = 24.0;
double clamp_phq8(double value);

struct SessionRecord {
  std::string session_id;
  int gender = 0;            // binary covariate, 0 or 1
  std::optional<int> phq8;   // integer in [0, 24] when present
  Split split = Split::train;

  void validate() const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Per-frame matrix of named acoustic descriptors (COVAREP-style input).
struct DescriptorSeries {
  std::vector<std::string> descriptor_names;
  std::vector<std::vector<double>> frames;  // one row per frame
  double frame_period = 0.01;               // seconds per frame

  std::size_t frame_count() const { return frames.size(); }
  std::size_t descriptor_count() const { return descriptor_names.size(); }
  std::vector<double> column(std::size_t d) const;
  std::optional<std::size_t> column_index(std::string_view name) const;
};

inline constexpr std::size_t kLandmarkCount = 68;
using Shape = std::array<Point2, kLandmarkCount>;

struct LandmarkSeries {
  std::vector<Shape> frames;
  std::vector<double> timestamps;  // non-decreasing, one per frame
};

struct Utterance {
  double start_time = 0.0;  // seconds
  double stop_time = 0.0;
  std::string speaker;
  std::string text;
};

struct Transcript {
  std::vector<Utterance> utterances;

  // last stop - first start; 0 when empty.
  double duration_seconds() const;
};

// Named, ordered real-valued features for one session and one modality.
struct FeatureVector {
  std::string session_id;
  Modality modality = Modality::audio;
  std::vector<std::string> names;
  std::vector<double> values;

  void validate() const;  // |names| == |values|, unique names, finite values
};

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }
};

// Session records plus per-(session, modality) feature vectors. Immutable
// once assembled; validation happens on insertion.
class Dataset {
 public:
  void add_record(SessionRecord record);
  void add_features(FeatureVector features);

  const std::vector<SessionRecord>& records() const { return records_; }
  const SessionRecord* find_record(std::string_view session_id) const;
  const FeatureVector* find_features(std::string_view session_id, Modality m) const;

 private:
  std::vector<SessionRecord> records_;
  std::map<std::pair<std::string, Modality>, FeatureVector> features_;
};

Dataset filter_split(const Dataset& dataset, Split split);

struct DesignMatrix {
  Matrix x;
  std::vector<double> targets;
  std::vector<std::string> row_ids;       // ascending session_id
  std::vector<std::string> column_names;  // "gender" appended last when included
};

// Rows ordered by ascending session_id; every session needs a label and a
// feature vector for the modality. include_gender appends one trailing
// 0/1 column so feature indices stay stable across the two ablations.
DesignMatrix assemble_design_matrix(const Dataset& dataset, Modality modality,
                                    bool include_gender);

}  // namespace mmsev
