#include "mmsev/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "mmsev/ingest.hpp"
#include "mmsev/rng.hpp"
#include "mmsev/util.hpp"

namespace mmsev::eval {

namespace {

void check_pair(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size())
    fail(Errc::length_mismatch,
         "prediction length " + std::to_string(pred.size()) +
             " vs truth length " + std::to_string(truth.size()));
  if (pred.empty()) fail(Errc::empty_input, "metrics need at least one pair");
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    acc += std::abs(pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

std::string feature_used_label(Modality m) {
  switch (m) {
    case Modality::audio: return "audio only";
    case Modality::video: return "visual only";
    case Modality::text: return "text only";
  }
  fail(Errc::invalid_config, "unknown modality");
}

std::size_t ModalityDims::of(Modality m) const {
  switch (m) {
    case Modality::audio: return audio;
    case Modality::video: return video;
    case Modality::text: return text;
  }
  fail(Errc::invalid_config, "unknown modality");
}

forest::ForestParams params_for_modality(const forest::ForestParams& base,
                                         Modality m) {
  forest::ForestParams p = base;
  p.seed = mix_seed(base.seed, static_cast<std::uint64_t>(m) + 1);
  return p;
}

namespace {

constexpr Modality kModalities[] = {Modality::video, Modality::audio,
                                    Modality::text};

}  // namespace

ExperimentResult run_experiment(const Dataset& dataset,
                                const forest::ForestParams& params,
                                fusion::Strategy strategy, bool include_gender,
                                int n_jobs) {
  const Dataset train = filter_split(dataset, Split::train);
  const Dataset dev = filter_split(dataset, Split::development);
  if (train.records().empty())
    fail(Errc::missing_split, "train split has no sessions");
  if (dev.records().empty())
    fail(Errc::missing_split, "development split has no sessions");

  ExperimentResult result;

  std::map<Modality, DesignMatrix> train_dm;
  for (Modality m : kModalities)
    train_dm.emplace(m, assemble_design_matrix(train, m, include_gender));
  result.train_dims.audio = train_dm.at(Modality::audio).x.cols;
  result.train_dims.video = train_dm.at(Modality::video).x.cols;
  result.train_dims.text = train_dm.at(Modality::text).x.cols;

  for (Modality m : kModalities) {
    const DesignMatrix& dm = train_dm.at(m);
    result.models.emplace(
        m, forest::fit_forest(dm.x, dm.targets, params_for_modality(params, m),
                              m, include_gender, n_jobs));
  }

  const std::pair<Split, const Dataset*> passes[] = {
      {Split::development, &dev}, {Split::train, &train}};

  for (const auto& [split, ds] : passes) {
    std::map<Modality, DesignMatrix> dm;
    for (Modality m : kModalities)
      dm.emplace(m, assemble_design_matrix(*ds, m, include_gender));

    const auto& row_ids = dm.at(Modality::audio).row_ids;
    for (Modality m : kModalities)
      if (dm.at(m).row_ids != row_ids)
        fail(Errc::missing_features, "session sets differ across modalities");

    const std::vector<double>& truth = dm.at(Modality::audio).targets;
    const std::size_t n = row_ids.size();

    std::map<Modality, std::vector<double>> single;
    for (Modality m : kModalities) single[m].reserve(n);
    std::vector<double> fused_clamped;
    fused_clamped.reserve(n);
    std::vector<fusion::FusionResult> wta_results;
    wta_results.reserve(n);
    auto& preds = result.predictions[split];
    preds.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
      std::vector<forest::PredictionWithConfidence> inputs;
      for (Modality m : {Modality::audio, Modality::video, Modality::text})
        inputs.push_back(result.models.at(m).predict(dm.at(m).x.row(i)));
      for (const auto& p : inputs)
        single[p.modality].push_back(clamp_phq8(p.mean));

      fusion::FusionResult fused = fusion::fuse(inputs, strategy);
      fused_clamped.push_back(clamp_phq8(fused.final_value));
      wta_results.push_back(
          strategy == fusion::Strategy::winner_take_all
              ? fused
              : fusion::fuse(inputs, fusion::Strategy::winner_take_all));

      SessionPrediction sp;
      sp.session_id = row_ids[i];
      sp.fused = std::move(fused);
      sp.clamped = fused_clamped.back();
      preds.push_back(std::move(sp));
    }

    result.dominance[split] = fusion::dominance_report(wta_results);

    for (Modality m : kModalities)
      result.rows.push_back({feature_used_label(m), split,
                             rmse(single[m], truth), mae(single[m], truth),
                             include_gender});
    result.rows.push_back({"fusion", split, rmse(fused_clamped, truth),
                           mae(fused_clamped, truth), include_gender});
  }

  return result;
}

void SynthConfig::validate() const {
  if (n_sessions < 1) fail(Errc::invalid_config, "n_sessions must be >= 1");
  if (noise_audio < 0.0 || noise_video < 0.0 || noise_text < 0.0)
    fail(Errc::invalid_config, "noise levels must be >= 0");
}

namespace {

const char* const kNeutralWords[] = {
    "well",  "i",     "have",  "been",   "at",    "home",  "this",
    "week",  "and",   "the",   "days",   "kind",  "of",    "blur",
    "work",  "keeps", "me",    "busy",   "most",  "times", "though"};

struct SentWord {
  const char* word;
  int valence;
};

const SentWord kPositiveWords[] = {
    {"good", 3},    {"great", 3},   {"happy", 3},   {"fine", 2},
    {"calm", 2},    {"hopeful", 2}, {"better", 2},  {"nice", 3},
    {"relaxed", 2}, {"glad", 3},    {"alright", 1}, {"okay", 1}};

const SentWord kNegativeWords[] = {
    {"bad", -3},     {"awful", -3},   {"terrible", -3}, {"stressed", -2},
    {"anxious", -2}, {"worried", -3}, {"upset", -2},    {"miserable", -3},
    {"lonely", -2},  {"numb", -1},    {"drained", -2},  {"restless", -1}};

const char* const kDepressionWords[] = {
    "sad",       "tired",    "hopeless",  "empty",     "worthless",
    "exhausted", "insomnia", "crying",    "guilt",     "fatigue",
    "down",      "gloomy",   "sleepless", "helpless",  "isolated",
    "darkness",  "despair",  "listless",  "withdrawn", "aching",
    "heavy",     "weary",    "bleak",     "defeated"};

const char* const kInterviewerPrompts[] = {
    "how have you been feeling lately",
    "tell me about your week",
    "how are you sleeping these days",
    "what do you do to relax",
    "is there anything on your mind"};

std::string session_name(std::size_t i) {
  std::string digits = std::to_string(i);
  while (digits.size() < 4) digits.insert(digits.begin(), '0');
  return "S" + digits;
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  out << body;
  if (!out) fail(Errc::io_error, "failed writing " + path.string());
}

DescriptorSeries synth_descriptors(double driven, double noise, SplitMix64& rng) {
  DescriptorSeries series;
  series.descriptor_names = {"F0",     "VUV",    "NAQ",     "QOQ",
                             "MCEP_0", "MCEP_1", "HMPDM_0", "HMPDD_0"};
  series.frame_period = 0.01;
  const std::size_t n_frames = 280 + rng.next_below(41);

  // Session-level offsets for the undriven descriptors.
  double off[8];
  for (double& o : off) o = rng.next_double();

  series.frames.reserve(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    std::vector<double> row(8);
    row[0] = 110.0 + 4.0 * driven + 2.0 * noise * rng.next_gaussian();
    row[1] = rng.next_double() < 0.8 ? 1.0 : 0.0;
    row[2] = 0.10 + 0.10 * off[2] + 0.02 * noise * rng.next_gaussian();
    row[3] = 0.30 + 0.30 * off[3] + 0.05 * noise * rng.next_gaussian();
    row[4] = -5.0 + 10.0 * off[4] + 0.50 * noise * rng.next_gaussian();
    row[5] = -2.0 + 4.0 * off[5] + 0.30 * noise * rng.next_gaussian();
    row[6] = 0.50 * off[6] + 0.10 * noise * rng.next_gaussian();
    row[7] = 0.20 * off[7] + 0.05 * noise * rng.next_gaussian();
    series.frames.push_back(std::move(row));
  }
  return series;
}

// Plausible 68-point face; inner-lip vertical radius carries the signal.
Shape base_face(double mouth_ry) {
  Shape shape{};
  for (std::size_t i = 0; i <= 16; ++i) {
    const double t = static_cast<double>(i) / 16.0;
    shape[i] = {-1.0 + 2.0 * t,
                -0.25 - 1.05 * (1.0 - std::abs(t - 0.5) * 2.0)};
  }
  for (std::size_t k = 0; k < 5; ++k) {
    const double arch = 0.05 * std::sin(std::numbers::pi * k / 4.0);
    shape[17 + k] = {-0.75 + 0.1 * static_cast<double>(k), 0.55 + arch};
    shape[22 + k] = {0.35 + 0.1 * static_cast<double>(k), 0.55 + arch};
  }
  for (std::size_t k = 0; k < 4; ++k)
    shape[27 + k] = {0.0, 0.45 - 0.15 * static_cast<double>(k)};
  for (std::size_t k = 0; k < 5; ++k)
    shape[31 + k] = {-0.12 + 0.06 * static_cast<double>(k), -0.08};
  for (std::size_t k = 0; k < 6; ++k) {
    const double a = std::numbers::pi - std::numbers::pi * k / 3.0;
    shape[36 + k] = {-0.55 + 0.12 * std::cos(a), 0.35 + 0.06 * std::sin(a)};
    shape[42 + k] = {0.55 + 0.12 * std::cos(a), 0.35 + 0.06 * std::sin(a)};
  }
  for (std::size_t k = 0; k < 12; ++k) {
    const double a = std::numbers::pi - 2.0 * std::numbers::pi * k / 12.0;
    shape[48 + k] = {0.32 * std::cos(a), -0.5 + (mouth_ry + 0.08) * std::sin(a)};
  }
  for (std::size_t k = 0; k < 8; ++k) {
    const double a = std::numbers::pi - 2.0 * std::numbers::pi * k / 8.0;
    shape[60 + k] = {0.2 * std::cos(a), -0.5 + mouth_ry * std::sin(a)};
  }
  return shape;
}

LandmarkSeries synth_landmarks(double driven, double noise, SplitMix64& rng) {
  LandmarkSeries series;
  const std::size_t n_frames = 90 + rng.next_below(31);
  const double mouth_ry = 0.04 + 0.006 * driven;
  series.frames.reserve(n_frames);
  series.timestamps.reserve(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    Shape shape = base_face(mouth_ry);
    const double dx = 0.05 * noise * rng.next_gaussian();
    const double dy = 0.05 * noise * rng.next_gaussian();
    for (auto& p : shape) {
      p.x += dx + 0.004 * noise * rng.next_gaussian();
      p.y += dy + 0.004 * noise * rng.next_gaussian();
    }
    series.frames.push_back(shape);
    series.timestamps.push_back(static_cast<double>(f) / 30.0);
  }
  return series;
}

Transcript synth_transcript(double driven, double noise, SplitMix64& rng) {
  Transcript transcript;
  const std::size_t n_turns = 8 + rng.next_below(5);
  const std::size_t n_prompts = std::size(kInterviewerPrompts);
  const double p_neg = std::min(0.9, 0.10 + 0.03 * driven);
  const double p_laugh = std::max(0.05, 0.30 - 0.01 * driven);

  double t = 0.0;
  for (std::size_t turn = 0; turn < n_turns; ++turn) {
    Utterance ellie;
    ellie.start_time = t;
    ellie.stop_time = t + 2.5;
    ellie.speaker = "Ellie";
    ellie.text = kInterviewerPrompts[turn % n_prompts];
    transcript.utterances.push_back(ellie);
    t = ellie.stop_time + 0.5;

    std::vector<std::string> words;
    const std::size_t n_words = 10 + rng.next_below(6);
    for (std::size_t w = 0; w < n_words; ++w)
      words.push_back(kNeutralWords[rng.next_below(std::size(kNeutralWords))]);

    const double lambda = driven / 8.0 + noise * rng.next_gaussian() * 0.3;
    long n_dep = static_cast<long>(std::lround(std::max(0.0, lambda)));
    for (long d = 0; d < n_dep; ++d)
      words.push_back(
          kDepressionWords[rng.next_below(std::size(kDepressionWords))]);

    if (rng.next_double() < p_neg)
      words.push_back(
          kNegativeWords[rng.next_below(std::size(kNegativeWords))].word);
    else
      words.push_back(
          kPositiveWords[rng.next_below(std::size(kPositiveWords))].word);

    if (rng.next_double() < p_laugh) words.push_back("(laughter)");

    std::string text;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w) text += ' ';
      text += words[w];
    }

    Utterance reply;
    reply.start_time = t;
    reply.stop_time = t + 4.0 + 2.0 * rng.next_double();
    reply.speaker = "Participant";
    reply.text = text;
    transcript.utterances.push_back(reply);
    t = reply.stop_time + 1.0;
  }
  return transcript;
}

std::string render_lexicon_afinn() {
  std::ostringstream out;
  for (const auto& [word, valence] : kPositiveWords)
    out << word << '\t' << valence << '\n';
  for (const auto& [word, valence] : kNegativeWords)
    out << word << '\t' << valence << '\n';
  out << "feel better\t2\n";
  return out.str();
}

std::string render_lexicon_depression() {
  std::ostringstream out;
  for (const char* word : kDepressionWords) out << word << '\n';
  out << "feeling down\n";
  return out.str();
}

}  // namespace

void synth_generate(const std::filesystem::path& root, const SynthConfig& config) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(root / "lexicons", ec);
  if (ec) fail(Errc::io_error, "cannot create " + root.string());

  std::vector<SessionRecord> records;
  for (std::size_t i = 0; i < config.n_sessions; ++i) {
    const int severity = static_cast<int>(i % 25);
    SplitMix64 meta(mix_seed(config.seed, i, 0));
    SplitMix64 audio_rng(mix_seed(config.seed, i, 1));
    SplitMix64 video_rng(mix_seed(config.seed, i, 2));
    SplitMix64 text_rng(mix_seed(config.seed, i, 3));

    SessionRecord record;
    record.session_id = session_name(i);
    record.gender = static_cast<int>(meta.next_below(2));
    record.phq8 = severity;
    record.split = (i % 3 == 2) ? Split::development : Split::train;
    record.validate();

    const auto driven_or_noise = [&](Modality m, SplitMix64& rng) {
      if (config.informative == m) return static_cast<double>(severity);
      return 24.0 * rng.next_double();
    };

    const auto dir = root / record.session_id;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(Errc::io_error, "cannot create " + dir.string());

    {
      const double driven = driven_or_noise(Modality::audio, audio_rng);
      std::ostringstream body;
      ingest::write_descriptor_table(
          body, synth_descriptors(driven, config.noise_audio, audio_rng));
      write_text_file(dir / "descriptors.csv", body.str());
    }
    {
      const double driven = driven_or_noise(Modality::video, video_rng);
      std::ostringstream body;
      ingest::write_landmark_table(
          body, synth_landmarks(driven, config.noise_video, video_rng));
      write_text_file(dir / "landmarks.csv", body.str());
    }
    {
      const double driven = driven_or_noise(Modality::text, text_rng);
      std::ostringstream body;
      ingest::write_transcript(
          body, synth_transcript(driven, config.noise_text, text_rng));
      write_text_file(dir / "transcript.tsv", body.str());
    }
    records.push_back(std::move(record));
  }

  std::ostringstream labels;
  ingest::write_labels(labels, records);
  write_text_file(root / "labels.csv", labels.str());
  write_text_file(root / "lexicons" / "afinn.txt", render_lexicon_afinn());
  write_text_file(root / "lexicons" / "depression.txt",
                  render_lexicon_depression());
}

}  // namespace mmsev::eval
