#include "mmsev/textfeat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mmsev/signalmath.hpp"
#include "mmsev/util.hpp"

namespace mmsev::textfeat {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::vector<const Utterance*> participant_utterances(const Transcript& t,
                                                     const TextConfig& config) {
  std::vector<const Utterance*> out;
  for (const auto& u : t.utterances)
    if (u.speaker == config.participant_tag) out.push_back(&u);
  return out;
}

// Non-overlapping occurrences of a multiword term in lowercased text,
// bounded by non-word characters on both sides.
std::size_t count_phrase(const std::string& text, const std::string& term) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(term, pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    const std::size_t end = pos + term.size();
    const bool right_ok = end >= text.size() || !is_word_char(text[end]);
    if (left_ok && right_ok) {
      ++count;
      pos = end;
    } else {
      ++pos;
    }
  }
  return count;
}

int lexicon_score(const std::string& raw_text,
                  const std::vector<std::string>& tokens,
                  const ingest::Lexicon& lexicon) {
  int score = 0;
  for (const auto& tok : tokens) {
    auto it = lexicon.entries.find(tok);
    if (it != lexicon.entries.end()) score += it->second;
  }
  // Multiword entries are matched against the raw lowercased utterance.
  const std::string lowered = util::to_lower(raw_text);
  for (const auto& [term, valence] : lexicon.entries) {
    if (term.find(' ') == std::string::npos) continue;
    score += static_cast<int>(count_phrase(lowered, term)) * valence;
  }
  return score;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    // Trim apostrophes that ended up at token boundaries.
    std::size_t b = 0, e = current.size();
    while (b < e && current[b] == '\'') ++b;
    while (e > b && current[e - 1] == '\'') --e;
    if (e > b) tokens.push_back(current.substr(b, e - b));
    current.clear();
  };
  for (char c : text) {
    if (is_word_char(c) || c == '\'') {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

bool is_laughter_token(const std::string& token, const TextConfig& config) {
  for (const auto& marker : config.laughter_markers) {
    const auto normalized = tokenize(marker);
    if (normalized.size() == 1 && normalized[0] == token) return true;
  }
  return false;
}

std::vector<std::string> basic_feature_names() {
  return {"sentences_per_minute", "word_count", "laughter_ratio",
          "depression_word_ratio"};
}

std::vector<double> basic_text_features(const Transcript& transcript,
                                        const TextConfig& config,
                                        const ingest::Lexicon& dep_lexicon) {
  const auto utterances = participant_utterances(transcript, config);
  if (utterances.empty()) return {0.0, 0.0, 0.0, 0.0};

  const double duration_s =
      utterances.back()->stop_time - utterances.front()->start_time;
  if (duration_s <= 0.0)
    fail(Errc::zero_duration, "participant speech spans zero duration");
  const double duration_min = duration_s / 60.0;

  std::size_t words = 0;
  std::size_t laughs = 0;
  std::size_t dep_words = 0;
  for (const Utterance* u : utterances) {
    const auto tokens = tokenize(u->text);
    words += tokens.size();
    for (const auto& tok : tokens) {
      if (is_laughter_token(tok, config)) ++laughs;
      if (dep_lexicon.entries.count(tok)) ++dep_words;
    }
    const std::string lowered = util::to_lower(u->text);
    for (const auto& [term, _] : dep_lexicon.entries)
      if (term.find(' ') != std::string::npos)
        dep_words += count_phrase(lowered, term);
  }

  const double word_count = static_cast<double>(words);
  const double denom = std::max(word_count, 1.0);
  return {
      static_cast<double>(utterances.size()) / duration_min,
      word_count,
      static_cast<double>(laughs) / denom,
      (static_cast<double>(dep_words) / denom) / duration_min,
  };
}

SentimentSeries sentiment_series(const Transcript& transcript,
                                 const TextConfig& config,
                                 const ingest::Lexicon& sent_lexicon) {
  SentimentSeries out;
  for (const Utterance* u : participant_utterances(transcript, config))
    out.scores.push_back(lexicon_score(u->text, tokenize(u->text), sent_lexicon));
  return out;
}

std::vector<std::string> sentiment_feature_names() {
  return {"sentiment.mean",     "sentiment.median",  "sentiment.min",
          "sentiment.max",      "sentiment.std",     "sentiment.pos_frac",
          "sentiment.neg_frac", "sentiment.sum"};
}

std::vector<double> sentiment_features(const SentimentSeries& series) {
  if (series.scores.empty())
    return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};

  std::vector<double> values(series.scores.begin(), series.scores.end());
  const auto stats = signalmath::stat_descriptors(values);
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  double positives = 0.0;
  double negatives = 0.0;
  for (int s : series.scores) {
    sum += s;
    if (s > 0) positives += 1.0;
    if (s < 0) negatives += 1.0;
  }
  return {stats.mean,
          stats.median,
          *std::min_element(values.begin(), values.end()),
          *std::max_element(values.begin(), values.end()),
          stats.std,
          positives / n,
          negatives / n,
          sum};
}

FeatureVector extract_text_features(const Transcript& transcript,
                                    const TextConfig& config,
                                    const ingest::Lexicon& dep_lexicon,
                                    const ingest::Lexicon& sent_lexicon,
                                    std::string session_id) {
  FeatureVector out;
  out.session_id = std::move(session_id);
  out.modality = Modality::text;
  out.names = basic_feature_names();
  out.values = basic_text_features(transcript, config, dep_lexicon);

  const auto sent_names = sentiment_feature_names();
  const auto sent_values =
      sentiment_features(sentiment_series(transcript, config, sent_lexicon));
  out.names.insert(out.names.end(), sent_names.begin(), sent_names.end());
  out.values.insert(out.values.end(), sent_values.begin(), sent_values.end());

  out.validate();
  return out;
}

}  // namespace mmsev::textfeat
