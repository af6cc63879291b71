#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mmsev/audiofeat.hpp"
#include "mmsev/eval.hpp"
#include "mmsev/featureio.hpp"
#include "mmsev/forest.hpp"
#include "mmsev/fusion.hpp"
#include "mmsev/textfeat.hpp"

namespace mmsev::cli {

// One flat bag of settings shared by all subcommands. Tunables come from a
// key=value config file, then flags override; paths and job counts stay out
// of the config hash so artifacts compare equal across working directories.
struct RunConfig {
  audiofeat::AudioConfig audio;
  textfeat::TextConfig text;
  forest::ForestParams forest;
  fusion::Strategy strategy = fusion::Strategy::winner_take_all;
  bool include_gender = false;
  double frame_period = 0.01;
  eval::SynthConfig synth;  // synth.seed is overwritten by `seed` at run time

  std::uint64_t seed = 1;
  int jobs = 1;

  std::filesystem::path input_root;
  std::filesystem::path out;  // file for extract/predict/evaluate, dir otherwise
  std::filesystem::path labels_path;
  std::filesystem::path afinn_path;
  std::filesystem::path depression_path;
  std::filesystem::path models_dir;
  std::filesystem::path audio_csv;
  std::filesystem::path video_csv;
  std::filesystem::path text_csv;
  std::filesystem::path predictions_csv;

  void apply(const std::string& key, const std::string& value,
             std::optional<std::size_t> line = std::nullopt);
  void load_file(const std::filesystem::path& path);

  std::string canonical() const;       // tunables only, fixed key order
  std::uint64_t config_hash() const;   // fnv1a64 over canonical()
  featureio::RunStamp stamp() const;
};

// Exit codes: 0 success, 1 completed with skipped sessions, 2 fatal.
int cmd_extract(const RunConfig& config, Modality modality);
int cmd_train(const RunConfig& config);
int cmd_predict(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_synth(const RunConfig& config);

inline constexpr const char* kModelFilePrefix = "model_";
inline constexpr const char* kManifestFile = "manifest.json";

}  // namespace mmsev::cli
