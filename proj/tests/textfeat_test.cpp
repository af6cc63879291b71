#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmsev/rng.hpp"
#include "mmsev/textfeat.hpp"
#include "test_support.hpp"

using namespace mmsev;
using textfeat::TextConfig;

namespace {

Utterance utt(double start, double stop, std::string speaker, std::string text) {
  return Utterance{start, stop, std::move(speaker), std::move(text)};
}

ingest::Lexicon dep_lexicon() {
  ingest::Lexicon lex;
  lex.kind = ingest::LexiconKind::depression;
  lex.entries = {{"sad", 1}, {"tired", 1}, {"hopeless", 1}, {"feeling down", 1}};
  return lex;
}

ingest::Lexicon sent_lexicon() {
  ingest::Lexicon lex;
  lex.kind = ingest::LexiconKind::sentiment;
  lex.entries = {{"good", 3}, {"bad", -3}, {"fine", 2}, {"awful", -4}};
  return lex;
}

}  // namespace

TEST_CASE("tokenize lowercases and keeps internal apostrophes") {
  CHECK(textfeat::tokenize("I'm fine, thanks.") ==
        std::vector<std::string>{"i'm", "fine", "thanks"});
  CHECK(textfeat::tokenize("") == std::vector<std::string>{});
  CHECK(textfeat::tokenize("<laughter>") == std::vector<std::string>{"laughter"});
  CHECK(textfeat::tokenize("don't stop") ==
        std::vector<std::string>{"don't", "stop"});
  CHECK(textfeat::tokenize("'quoted'") == std::vector<std::string>{"quoted"});
  CHECK(textfeat::tokenize("  --  ") == std::vector<std::string>{});
}

TEST_CASE("laughter markers match bracketed and bare forms") {
  const TextConfig config;
  CHECK(textfeat::is_laughter_token("laughter", config));
  CHECK_FALSE(textfeat::is_laughter_token("laugh", config));
  const auto toks = textfeat::tokenize("well [laughter] ok <laughter>");
  int laughs = 0;
  for (const auto& t : toks)
    if (textfeat::is_laughter_token(t, config)) ++laughs;
  CHECK(laughs == 2);
}

TEST_CASE("ten utterances over five minutes give two sentences per minute") {
  Transcript t;
  for (int i = 0; i < 10; ++i)
    t.utterances.push_back(
        utt(i * 30.0, i * 30.0 + (i == 9 ? 30.0 : 10.0), "Participant", "ok then"));
  REQUIRE(t.utterances.back().stop_time - t.utterances.front().start_time == 300.0);
  const auto basic = textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  CHECK(basic[0] == 2.0);
  CHECK(basic[1] == 20.0);
}

TEST_CASE("depression ratio divides the word share by the duration") {
  // 10 words with 2 lexicon matches over 5 minutes: (2/10)/5 = 0.04.
  Transcript t;
  t.utterances.push_back(utt(0.0, 100.0, "Participant", "i am so sad and very tired"));
  t.utterances.push_back(utt(200.0, 300.0, "Participant", "but ok today"));
  const auto basic = textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  CHECK(basic[1] == 10.0);
  CHECK(basic[3] == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("multiword lexicon entries match the raw utterance text") {
  Transcript t;
  t.utterances.push_back(
      utt(0.0, 60.0, "Participant", "I was feeling down, feeling DOWN again"));
  const auto basic = textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  // 7 single-word tokens plus 2 phrase matches over 1 minute.
  CHECK(basic[1] == 7.0);
  CHECK(basic[3] == doctest::Approx((2.0 / 7.0) / 1.0).epsilon(1e-12));
}

TEST_CASE("zero participant words leave the guarded ratios at zero") {
  Transcript t;
  t.utterances.push_back(utt(0.0, 30.0, "Participant", "..."));
  t.utterances.push_back(utt(40.0, 60.0, "Participant", ""));
  const auto basic = textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  CHECK(basic[1] == 0.0);
  CHECK(basic[2] == 0.0);
  CHECK(basic[3] == 0.0);
  CHECK(basic[0] == 2.0);  // 2 utterances over 1 minute
}

TEST_CASE("no participant utterances give four zeros") {
  Transcript t;
  t.utterances.push_back(utt(0.0, 10.0, "Ellie", "how are you"));
  const auto basic = textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  CHECK(basic == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("a zero-length participant span is an error") {
  Transcript t;
  t.utterances.push_back(utt(5.0, 5.0, "Participant", "hi"));
  testsup::expect_error(Errc::zero_duration, [&] {
    textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  });
}

TEST_CASE("laughter ratio counts marker tokens over words") {
  Transcript t;
  t.utterances.push_back(utt(0.0, 60.0, "Participant", "well <laughter> that is fine"));
  const auto basic = textfeat::basic_text_features(t, TextConfig{}, dep_lexicon());
  CHECK(basic[1] == 5.0);
  CHECK(basic[2] == doctest::Approx(1.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("sentiment series scores one entry per participant utterance") {
  Transcript t;
  t.utterances.push_back(utt(0.0, 5.0, "Ellie", "good good good"));
  t.utterances.push_back(utt(5.0, 10.0, "Participant", "good good"));
  t.utterances.push_back(utt(10.0, 15.0, "Participant", "nothing matches here"));
  t.utterances.push_back(utt(15.0, 20.0, "Participant", "bad awful"));
  const auto series = textfeat::sentiment_series(t, TextConfig{}, sent_lexicon());
  CHECK(series.scores == std::vector<int>{6, 0, -7});
}

TEST_CASE("sentiment features on a small hand-computed series") {
  textfeat::SentimentSeries s;
  s.scores = {3, -2, 0};
  const auto f = textfeat::sentiment_features(s);
  REQUIRE(f.size() == 8);
  CHECK(f[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f[1] == 0.0);
  CHECK(f[2] == -2.0);
  CHECK(f[3] == 3.0);
  CHECK(f[4] == doctest::Approx(2.0548046676563256).epsilon(1e-12));
  CHECK(f[5] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f[6] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(f[7] == 1.0);
}

TEST_CASE("an empty sentiment series yields eight zeros") {
  const auto f = textfeat::sentiment_features(textfeat::SentimentSeries{});
  CHECK(f == std::vector<double>(8, 0.0));
}

TEST_CASE("a constant positive series has zero spread and full pos fraction") {
  textfeat::SentimentSeries s;
  s.scores = {5, 5, 5};
  const auto f = textfeat::sentiment_features(s);
  CHECK(f[0] == 5.0);
  CHECK(f[4] == 0.0);
  CHECK(f[5] == 1.0);
  CHECK(f[6] == 0.0);
  CHECK(f[7] == 15.0);
}

TEST_CASE("extraction emits the 12 fixed feature names") {
  Transcript t;
  t.utterances.push_back(utt(0.0, 30.0, "Ellie", "hello"));
  t.utterances.push_back(utt(30.0, 90.0, "Participant", "i feel fine but tired"));
  const FeatureVector fv = textfeat::extract_text_features(
      t, TextConfig{}, dep_lexicon(), sent_lexicon(), "t1");
  const std::vector<std::string> expected = {
      "sentences_per_minute", "word_count",       "laughter_ratio",
      "depression_word_ratio", "sentiment.mean",  "sentiment.median",
      "sentiment.min",         "sentiment.max",   "sentiment.std",
      "sentiment.pos_frac",    "sentiment.neg_frac", "sentiment.sum"};
  CHECK(fv.names == expected);
  CHECK(fv.values.size() == 12);
  CHECK(fv.modality == Modality::text);
  CHECK(fv.session_id == "t1");
}

TEST_CASE("interviewer-only transcripts extract as all zeros") {
  Transcript t;
  t.utterances.push_back(utt(0.0, 10.0, "Ellie", "good good good"));
  const FeatureVector fv = textfeat::extract_text_features(
      t, TextConfig{}, dep_lexicon(), sent_lexicon());
  CHECK(fv.values == std::vector<double>(12, 0.0));
}

TEST_CASE("removing interviewer utterances changes nothing") {
  Transcript full;
  full.utterances.push_back(utt(0.0, 4.0, "Ellie", "how have you been"));
  full.utterances.push_back(utt(4.0, 64.0, "Participant", "pretty good but tired"));
  full.utterances.push_back(utt(64.0, 70.0, "Ellie", "tell me more bad awful"));
  full.utterances.push_back(utt(70.0, 124.0, "Participant", "i was sad <laughter>"));

  Transcript only;
  for (const auto& u : full.utterances)
    if (u.speaker == "Participant") only.utterances.push_back(u);

  const auto a = textfeat::extract_text_features(full, TextConfig{}, dep_lexicon(),
                                                 sent_lexicon());
  const auto b = textfeat::extract_text_features(only, TextConfig{}, dep_lexicon(),
                                                 sent_lexicon());
  CHECK(a.values == b.values);
}

TEST_CASE("token order within an utterance does not change the features") {
  Transcript a;
  a.utterances.push_back(utt(0.0, 60.0, "Participant", "good bad tired fine"));
  Transcript b;
  b.utterances.push_back(utt(0.0, 60.0, "Participant", "fine tired bad good"));
  const auto fa = textfeat::extract_text_features(a, TextConfig{}, dep_lexicon(),
                                                  sent_lexicon());
  const auto fb = textfeat::extract_text_features(b, TextConfig{}, dep_lexicon(),
                                                  sent_lexicon());
  CHECK(fa.values == fb.values);
}
