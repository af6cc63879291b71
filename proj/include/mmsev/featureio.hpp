#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmsev/eval.hpp"
#include "mmsev/fusion.hpp"
#include "mmsev/types.hpp"

namespace mmsev::featureio {

inline constexpr const char* kToolVersion = "0.1.0";

// First line of every CSV artifact; ties outputs to (version, seed, config)
// so equal triples give byte-identical files.
struct RunStamp {
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  std::string render() const;
  static std::optional<RunStamp> parse(const std::string& line);
};

// Layout: stamp line, "session_id,<name>..." header, one row per session.
// All vectors must share one modality and one name list.
void write_feature_table(std::ostream& out,
                         const std::vector<FeatureVector>& features,
                         const RunStamp& stamp);
std::vector<FeatureVector> read_feature_table(std::istream& in, Modality modality);

struct PredictionRow {
  std::string session_id;
  double audio_mean = 0.0, audio_std = 0.0;
  double video_mean = 0.0, video_std = 0.0;
  double text_mean = 0.0, text_std = 0.0;
  std::string chosen;  // modality name, or "blend" for averaging strategies
  double fused_phq8 = 0.0;  // clamped to the score range
  double fused_raw = 0.0;
  fusion::Strategy strategy = fusion::Strategy::winner_take_all;
  bool include_gender = false;

  bool operator==(const PredictionRow&) const = default;
};

PredictionRow to_prediction_row(const eval::SessionPrediction& prediction,
                                bool include_gender);

void write_predictions(std::ostream& out, const std::vector<PredictionRow>& rows,
                       const RunStamp& stamp);
std::vector<PredictionRow> read_predictions(std::istream& in);

void write_metrics(std::ostream& out, const std::vector<eval::MetricsRow>& rows,
                   const RunStamp& stamp);
std::vector<eval::MetricsRow> read_metrics(std::istream& in);

// Fixed-width companion for terminals and logs.
std::string render_metrics_table(const std::vector<eval::MetricsRow>& rows);

void write_feature_file(const std::filesystem::path& path,
                        const std::vector<FeatureVector>& features,
                        const RunStamp& stamp);
std::vector<FeatureVector> read_feature_file(const std::filesystem::path& path,
                                             Modality modality);
void write_predictions_file(const std::filesystem::path& path,
                            const std::vector<PredictionRow>& rows,
                            const RunStamp& stamp);
std::vector<PredictionRow> read_predictions_file(const std::filesystem::path& path);
void write_metrics_file(const std::filesystem::path& path,
                        const std::vector<eval::MetricsRow>& rows,
                        const RunStamp& stamp);
std::vector<eval::MetricsRow> read_metrics_file(const std::filesystem::path& path);

}  // namespace mmsev::featureio
