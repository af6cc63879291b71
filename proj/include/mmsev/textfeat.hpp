#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mmsev/ingest.hpp"
#include "mmsev/types.hpp"

namespace mmsev::textfeat {

// One summed lexicon score per participant utterance, in utterance order;
// zero-score utterances are kept.
struct SentimentSeries {
  std::vector<int> scores;
};

struct TextConfig {
  std::string participant_tag = "Participant";
  // Compared against normalized tokens, so "<laughter>" and "[laughter]"
  // are covered by the bare form.
  std::vector<std::string> laughter_markers = {"laughter"};
};

// Lowercased word tokens; splits on non-alphanumeric boundaries except
// apostrophes between alphanumerics ("i'm" stays one token).
std::vector<std::string> tokenize(std::string_view text);

bool is_laughter_token(const std::string& token, const TextConfig& config);

// sentences_per_minute, word_count, laughter_ratio, depression_word_ratio.
// Duration and counts cover participant utterances only; an empty
// participant side yields four zeros, a zero-length span is an error.
std::vector<double> basic_text_features(const Transcript& transcript,
                                        const TextConfig& config,
                                        const ingest::Lexicon& dep_lexicon);
std::vector<std::string> basic_feature_names();

SentimentSeries sentiment_series(const Transcript& transcript,
                                 const TextConfig& config,
                                 const ingest::Lexicon& sent_lexicon);

// mean, median, min, max, std, positive fraction, negative fraction, sum;
// all zeros for an empty series.
std::vector<double> sentiment_features(const SentimentSeries& series);
std::vector<std::string> sentiment_feature_names();

// 4 basic + 8 sentiment = 12 named features, fixed order.
FeatureVector extract_text_features(const Transcript& transcript,
                                    const TextConfig& config,
                                    const ingest::Lexicon& dep_lexicon,
                                    const ingest::Lexicon& sent_lexicon,
                                    std::string session_id = {});

}  // namespace mmsev::textfeat
