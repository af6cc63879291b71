#include "mmsev/fusion.hpp"

#include <algorithm>

namespace mmsev::fusion {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::winner_take_all: return "winner_take_all";
    case Strategy::average: return "average";
    case Strategy::confidence_weighted: return "confidence_weighted";
  }
  fail(Errc::invalid_config, "unknown fusion strategy");
}

Strategy strategy_from_string(const std::string& s) {
  if (s == "winner_take_all") return Strategy::winner_take_all;
  if (s == "average") return Strategy::average;
  if (s == "confidence_weighted") return Strategy::confidence_weighted;
  fail(Errc::invalid_config, "unknown fusion strategy '" + s + "'");
}

namespace {

int tie_priority(Modality m) {
  switch (m) {
    case Modality::audio: return 0;
    case Modality::text: return 1;
    case Modality::video: return 2;
  }
  return 3;
}

}  // namespace

std::vector<PredictionWithConfidence> confidence_rank(
    std::vector<PredictionWithConfidence> inputs) {
  if (inputs.empty())
    fail(Errc::empty_input, "confidence ranking needs at least one prediction");
  std::stable_sort(inputs.begin(), inputs.end(),
                   [](const PredictionWithConfidence& a,
                      const PredictionWithConfidence& b) {
                     if (a.stddev != b.stddev) return a.stddev < b.stddev;
                     return tie_priority(a.modality) < tie_priority(b.modality);
                   });
  return inputs;
}

FusionResult fuse(const std::vector<PredictionWithConfidence>& inputs,
                  Strategy strategy) {
  if (inputs.empty()) fail(Errc::empty_input, "fuse needs at least one prediction");

  FusionResult result;
  result.inputs = inputs;
  result.strategy = strategy;

  switch (strategy) {
    case Strategy::winner_take_all: {
      const auto ranked = confidence_rank(inputs);
      result.final_value = ranked.front().mean;
      result.chosen_modality = ranked.front().modality;
      break;
    }
    case Strategy::average: {
      double sum = 0.0;
      for (const auto& p : inputs) sum += p.mean;
      result.final_value = sum / static_cast<double>(inputs.size());
      break;
    }
    case Strategy::confidence_weighted: {
      constexpr double kEps = 1e-6;
      double wsum = 0.0, acc = 0.0;
      for (const auto& p : inputs) {
        const double w = 1.0 / (p.stddev + kEps);
        wsum += w;
        acc += w * p.mean;
      }
      result.final_value = acc / wsum;
      break;
    }
  }
  return result;
}

double DominanceReport::share(Modality m) const {
  if (total == 0) return 0.0;
  const auto it = wins.find(m);
  if (it == wins.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

DominanceReport dominance_report(const std::vector<FusionResult>& results) {
  DominanceReport report;
  for (const auto& r : results) {
    if (r.strategy != Strategy::winner_take_all)
      fail(Errc::strategy_mismatch,
           "dominance report only applies to winner_take_all results");
    if (!r.chosen_modality)
      fail(Errc::strategy_mismatch, "winner_take_all result without a winner");
    ++report.total;
    ++report.wins[*r.chosen_modality];
  }
  return report;
}

}  // namespace mmsev::fusion
