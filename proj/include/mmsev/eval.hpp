#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mmsev/error.hpp"
#include "mmsev/forest.hpp"
#include "mmsev/fusion.hpp"
#include "mmsev/types.hpp"

namespace mmsev::eval {

double rmse(std::span<const double> pred, std::span<const double> truth);
double mae(std::span<const double> pred, std::span<const double> truth);

struct MetricsRow {
  std::string feature_used;  // "visual only", "audio only", "text only", "fusion"
  Split split = Split::development;
  double rmse = 0.0;
  double mae = 0.0;
  bool include_gender = false;

  bool operator==(const MetricsRow&) const = default;
};

std::string feature_used_label(Modality m);

struct ModalityDims {
  std::size_t audio = 0;
  std::size_t video = 0;
  std::size_t text = 0;

  std::size_t of(Modality m) const;
};

struct SessionPrediction {
  std::string session_id;
  fusion::FusionResult fused;   // raw value; inputs carry per-modality stats
  double clamped = 0.0;         // reported score, bounded to [0, 24]
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;  // development block then train block
  std::map<Split, fusion::DominanceReport> dominance;
  ModalityDims train_dims;
  std::map<Split, std::vector<SessionPrediction>> predictions;
  std::map<Modality, forest::Forest> models;
};

// Trains one forest per modality on the train split, then scores both
// splits per modality and fused. Reported metrics use clamped predictions.
ExperimentResult run_experiment(const Dataset& dataset,
                                const forest::ForestParams& params,
                                fusion::Strategy strategy, bool include_gender,
                                int n_jobs = 1);

// Per-modality forests need distinct streams from one run seed.
forest::ForestParams params_for_modality(const forest::ForestParams& base,
                                         Modality m);

struct SynthConfig {
  std::size_t n_sessions = 10;
  std::uint64_t seed = 1;
  Modality informative = Modality::audio;
  double noise_audio = 0.5;
  double noise_video = 0.5;
  double noise_text = 0.5;

  void validate() const;
};

// Writes <root>/<session>/{descriptors.csv,landmarks.csv,transcript.tsv},
// <root>/labels.csv and <root>/lexicons/{afinn.txt,depression.txt}. A latent
// integer severity drives the informative modality; the rest is independent
// noise. Byte-identical across reruns with the same config.
void synth_generate(const std::filesystem::path& root, const SynthConfig& config);

}  // namespace mmsev::eval
