#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmsev/error.hpp"
#include "mmsev/forest.hpp"
#include "mmsev/types.hpp"

namespace mmsev::fusion {

using forest::PredictionWithConfidence;

enum class Strategy { winner_take_all, average, confidence_weighted };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct FusionResult {
  double final_value = 0.0;  // unclamped; score range applied at reporting
  std::optional<Modality> chosen_modality;  // nullopt when blended
  std::vector<PredictionWithConfidence> inputs;
  Strategy strategy = Strategy::winner_take_all;
};

// Most confident first: ascending stddev, ties broken audio, text, video.
std::vector<PredictionWithConfidence> confidence_rank(
    std::vector<PredictionWithConfidence> inputs);

FusionResult fuse(const std::vector<PredictionWithConfidence>& inputs,
                  Strategy strategy);

struct DominanceReport {
  std::size_t total = 0;
  std::map<Modality, std::size_t> wins;
  double share(Modality m) const;
};

// Counts which modality each winner-take-all decision picked.
DominanceReport dominance_report(const std::vector<FusionResult>& results);

}  // namespace mmsev::fusion
