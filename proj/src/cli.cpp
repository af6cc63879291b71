#include "mmsev/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "mmsev/ingest.hpp"
#include "mmsev/sessionio.hpp"
#include "mmsev/util.hpp"

namespace mmsev::cli {

using util::format_double;
using util::trim;

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            std::optional<std::size_t> line) {
  fail(Errc::invalid_config, "bad value '" + value + "' for key '" + key + "'",
       line);
}

bool parse_bool(const std::string& key, const std::string& value,
                std::optional<std::size_t> line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, line);
}

long long parse_integer(const std::string& key, const std::string& value,
                        std::optional<std::size_t> line) {
  const auto v = util::parse_int(value);
  if (!v) bad_value(key, value, line);
  return *v;
}

double parse_real(const std::string& key, const std::string& value,
                  std::optional<std::size_t> line) {
  const auto v = util::parse_double(value);
  if (!v) bad_value(key, value, line);
  return *v;
}

std::string selection_to_string(audiofeat::DctSelection s) {
  return s == audiofeat::DctSelection::largest_magnitude ? "largest_magnitude"
                                                         : "first_k";
}

audiofeat::DctSelection selection_from_string(const std::string& key,
                                              const std::string& value,
                                              std::optional<std::size_t> line) {
  if (value == "largest_magnitude")
    return audiofeat::DctSelection::largest_magnitude;
  if (value == "first_k") return audiofeat::DctSelection::first_k;
  bad_value(key, value, line);
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value,
                      std::optional<std::size_t> line) {
  const auto as_size = [&](std::size_t lo) {
    const long long v = parse_integer(key, value, line);
    if (v < static_cast<long long>(lo)) bad_value(key, value, line);
    return static_cast<std::size_t>(v);
  };

  if (key == "audio.dct_k") audio.dct_k = as_size(1);
  else if (key == "audio.dct_selection")
    audio.dct_selection = selection_from_string(key, value, line);
  else if (key == "audio.delta_window") audio.delta_window = as_size(1);
  else if (key == "audio.stats_base") audio.stats_base = parse_bool(key, value, line);
  else if (key == "audio.stats_delta") audio.stats_delta = parse_bool(key, value, line);
  else if (key == "audio.stats_delta_delta")
    audio.stats_delta_delta = parse_bool(key, value, line);
  else if (key == "audio.stream_base") audio.stream_base = parse_bool(key, value, line);
  else if (key == "audio.stream_delta") audio.stream_delta = parse_bool(key, value, line);
  else if (key == "audio.stream_delta_delta")
    audio.stream_delta_delta = parse_bool(key, value, line);
  else if (key == "audio.voiced_only") audio.voiced_only = parse_bool(key, value, line);
  else if (key == "forest.bootstrap") forest.bootstrap = parse_bool(key, value, line);
  else if (key == "forest.max_depth")
    forest.max_depth = static_cast<int>(parse_integer(key, value, line));
  else if (key == "forest.min_samples_leaf")
    forest.min_samples_leaf = static_cast<int>(parse_integer(key, value, line));
  else if (key == "forest.mtry")
    forest.mtry = static_cast<int>(parse_integer(key, value, line));
  else if (key == "forest.n_trees")
    forest.n_trees = static_cast<int>(parse_integer(key, value, line));
  else if (key == "frame_period") frame_period = parse_real(key, value, line);
  else if (key == "fusion.strategy") strategy = fusion::strategy_from_string(value);
  else if (key == "include_gender") include_gender = parse_bool(key, value, line);
  else if (key == "synth.informative") {
    const auto m = modality_from_string(value);
    if (!m) bad_value(key, value, line);
    synth.informative = *m;
  } else if (key == "synth.n_sessions") synth.n_sessions = as_size(1);
  else if (key == "synth.noise_audio") synth.noise_audio = parse_real(key, value, line);
  else if (key == "synth.noise_text") synth.noise_text = parse_real(key, value, line);
  else if (key == "synth.noise_video") synth.noise_video = parse_real(key, value, line);
  else if (key == "text.laughter_markers")
    text.laughter_markers = util::split(value, ',');
  else if (key == "text.participant_tag") text.participant_tag = value;
  else if (key == "seed") {
    const long long v = parse_integer(key, value, line);
    if (v < 0) bad_value(key, value, line);
    seed = static_cast<std::uint64_t>(v);
  } else if (key == "jobs") {
    jobs = static_cast<int>(parse_integer(key, value, line));
    if (jobs < 1) bad_value(key, value, line);
  }
  else if (key == "input") input_root = value;
  else if (key == "out") out = value;
  else if (key == "labels") labels_path = value;
  else if (key == "afinn") afinn_path = value;
  else if (key == "depression") depression_path = value;
  else if (key == "models") models_dir = value;
  else if (key == "features.audio") audio_csv = value;
  else if (key == "features.video") video_csv = value;
  else if (key == "features.text") text_csv = value;
  else if (key == "predictions") predictions_csv = value;
  else fail(Errc::invalid_config, "unknown config key '" + key + "'", line);
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open config " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(Errc::invalid_config, "expected key=value", line_no);
    apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)), line_no);
  }
}

std::string RunConfig::canonical() const {
  std::ostringstream out_str;
  const auto flag = [](bool b) { return b ? "1" : "0"; };
  out_str << "audio.dct_k=" << audio.dct_k << '\n'
          << "audio.dct_selection=" << selection_to_string(audio.dct_selection)
          << '\n'
          << "audio.delta_window=" << audio.delta_window << '\n'
          << "audio.stats_base=" << flag(audio.stats_base) << '\n'
          << "audio.stats_delta=" << flag(audio.stats_delta) << '\n'
          << "audio.stats_delta_delta=" << flag(audio.stats_delta_delta) << '\n'
          << "audio.stream_base=" << flag(audio.stream_base) << '\n'
          << "audio.stream_delta=" << flag(audio.stream_delta) << '\n'
          << "audio.stream_delta_delta=" << flag(audio.stream_delta_delta) << '\n'
          << "audio.voiced_only=" << flag(audio.voiced_only) << '\n'
          << "forest.bootstrap=" << flag(forest.bootstrap) << '\n'
          << "forest.max_depth=" << forest.max_depth << '\n'
          << "forest.min_samples_leaf=" << forest.min_samples_leaf << '\n'
          << "forest.mtry=" << forest.mtry << '\n'
          << "forest.n_trees=" << forest.n_trees << '\n'
          << "frame_period=" << format_double(frame_period) << '\n'
          << "fusion.strategy=" << fusion::to_string(strategy) << '\n'
          << "include_gender=" << flag(include_gender) << '\n'
          << "synth.informative=" << to_string(synth.informative) << '\n'
          << "synth.n_sessions=" << synth.n_sessions << '\n'
          << "synth.noise_audio=" << format_double(synth.noise_audio) << '\n'
          << "synth.noise_text=" << format_double(synth.noise_text) << '\n'
          << "synth.noise_video=" << format_double(synth.noise_video) << '\n'
          << "text.laughter_markers=" << join(text.laughter_markers, ',') << '\n'
          << "text.participant_tag=" << text.participant_tag << '\n';
  return out_str.str();
}

std::uint64_t RunConfig::config_hash() const {
  return util::fnv1a64(canonical());
}

featureio::RunStamp RunConfig::stamp() const {
  featureio::RunStamp s;
  s.seed = seed;
  s.config_hash = config_hash();
  return s;
}

namespace {

void require_path(const std::filesystem::path& p, const std::string& what) {
  if (p.empty()) fail(Errc::invalid_config, what + " path not set");
}

sessionio::ExtractorBundle make_bundle(const RunConfig& config, Modality modality) {
  sessionio::ExtractorBundle bundle;
  bundle.audio = config.audio;
  bundle.text = config.text;
  bundle.frame_period = config.frame_period;
  if (modality == Modality::text) {
    require_path(config.afinn_path, "sentiment lexicon");
    require_path(config.depression_path, "depression lexicon");
    bundle.sentiment_lexicon = ingest::load_lexicon_file(
        config.afinn_path, ingest::LexiconKind::sentiment);
    bundle.depression_lexicon = ingest::load_lexicon_file(
        config.depression_path, ingest::LexiconKind::depression);
  }
  return bundle;
}

}  // namespace

int cmd_extract(const RunConfig& config, Modality modality) {
  require_path(config.input_root, "input");
  require_path(config.out, "out");
  config.audio.validate();

  const auto sessions = sessionio::discover_sessions(config.input_root);
  if (sessions.empty())
    fail(Errc::no_sessions, "no sessions under " + config.input_root.string());

  const auto bundle = make_bundle(config, modality);
  std::vector<std::optional<FeatureVector>> results(sessions.size());
  std::vector<std::string> errors(sessions.size());
  util::parallel_for(sessions.size(), config.jobs, [&](std::size_t i) {
    try {
      results[i] = sessionio::extract_session(sessions[i], modality, bundle);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<FeatureVector> ok;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    if (results[i]) {
      ok.push_back(std::move(*results[i]));
    } else {
      ++skipped;
      std::cerr << "warning: skipping session " << sessions[i].session_id
                << ": " << errors[i] << '\n';
    }
  }
  if (ok.empty())
    fail(Errc::no_sessions, "all " + std::to_string(sessions.size()) +
                                " sessions failed extraction");

  featureio::write_feature_file(config.out, ok, config.stamp());
  std::cout << "extracted " << to_string(modality) << " features for "
            << ok.size() << " sessions (" << ok.front().values.size()
            << " columns) -> " << config.out.string() << '\n';
  if (skipped)
    std::cout << "skipped " << skipped << " of " << sessions.size()
              << " sessions\n";
  return skipped ? 1 : 0;
}

namespace {

constexpr Modality kModalities[] = {Modality::audio, Modality::video,
                                    Modality::text};

std::filesystem::path feature_csv_path(const RunConfig& config, Modality m) {
  switch (m) {
    case Modality::audio: return config.audio_csv;
    case Modality::video: return config.video_csv;
    case Modality::text: return config.text_csv;
  }
  fail(Errc::invalid_config, "unknown modality");
}

Dataset load_dataset(const RunConfig& config) {
  require_path(config.labels_path, "labels");
  Dataset dataset;
  for (auto& record : ingest::load_labels_file(config.labels_path))
    dataset.add_record(std::move(record));
  for (Modality m : kModalities) {
    const auto path = feature_csv_path(config, m);
    require_path(path, to_string(m) + " features");
    for (auto& features : featureio::read_feature_file(path, m)) {
      if (!dataset.find_record(features.session_id))
        fail(Errc::missing_label,
             "no label for session " + features.session_id);
      dataset.add_features(std::move(features));
    }
  }
  return dataset;
}

std::filesystem::path model_path(const std::filesystem::path& dir, Modality m) {
  return dir / (std::string(kModelFilePrefix) + to_string(m) + ".bin");
}

}  // namespace

int cmd_train(const RunConfig& config) {
  require_path(config.out, "out");
  const Dataset dataset = load_dataset(config);
  const Dataset train = filter_split(dataset, Split::train);
  if (train.records().empty())
    fail(Errc::missing_split, "train split has no sessions");

  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) fail(Errc::io_error, "cannot create " + config.out.string());

  forest::ForestParams base = config.forest;
  base.seed = config.seed;

  nlohmann::json manifest;
  manifest["version"] = featureio::kToolVersion;
  manifest["seed"] = config.seed;
  manifest["config"] = util::hex64(config.config_hash());
  manifest["include_gender"] = config.include_gender;
  manifest["train_sessions"] = train.records().size();

  for (Modality m : kModalities) {
    const auto dm = assemble_design_matrix(train, m, config.include_gender);
    const auto model = forest::fit_forest(
        dm.x, dm.targets, eval::params_for_modality(base, m), m,
        config.include_gender, config.jobs);
    const auto path = model_path(config.out, m);
    forest::save_model(path, model);
    manifest["dims"][to_string(m)] = dm.x.cols;
    manifest["models"][to_string(m)] = path.filename().string();
    std::cout << "trained " << to_string(m) << " forest on " << dm.x.rows
              << " sessions x " << dm.x.cols << " features\n";
  }

  std::ofstream manifest_out(config.out / kManifestFile, std::ios::binary);
  if (!manifest_out)
    fail(Errc::io_error, "cannot write " + (config.out / kManifestFile).string());
  manifest_out << manifest.dump(2) << '\n';
  std::cout << "wrote models and manifest to " << config.out.string() << '\n';
  return 0;
}

int cmd_predict(const RunConfig& config) {
  require_path(config.models_dir, "models");
  require_path(config.out, "out");

  std::map<Modality, forest::Forest> models;
  for (Modality m : kModalities) {
    auto model = forest::load_model(model_path(config.models_dir, m));
    if (model.modality != m)
      fail(Errc::corrupt_model, "model file for " + to_string(m) +
                                    " is tagged " + to_string(model.modality));
    models.emplace(m, std::move(model));
  }
  const bool with_gender = models.at(Modality::audio).includes_gender;
  for (Modality m : kModalities)
    if (models.at(m).includes_gender != with_gender)
      fail(Errc::invalid_config, "models disagree on gender usage");

  std::map<Modality, std::map<std::string, FeatureVector>> features;
  for (Modality m : kModalities) {
    const auto path = feature_csv_path(config, m);
    require_path(path, to_string(m) + " features");
    for (auto& f : featureio::read_feature_file(path, m))
      features[m].emplace(f.session_id, std::move(f));
  }

  std::map<std::string, int> gender;
  if (with_gender) {
    if (config.labels_path.empty())
      fail(Errc::invalid_config,
           "models were trained with the gender column; pass labels");
    for (const auto& r : ingest::load_labels_file(config.labels_path))
      gender[r.session_id] = r.gender;
  }

  std::vector<std::string> ids;
  for (const auto& [id, f] : features[Modality::audio]) ids.push_back(id);
  for (const auto& id : ids)
    for (Modality m : kModalities)
      if (!features[m].count(id))
        fail(Errc::missing_features,
             "session " + id + " has no " + to_string(m) + " features");
  for (Modality m : kModalities)
    for (const auto& [id, f] : features[m])
      if (!features[Modality::audio].count(id))
        fail(Errc::missing_features,
             "session " + id + " has no audio features");

  std::vector<featureio::PredictionRow> rows;
  for (const auto& id : ids) {
    std::vector<forest::PredictionWithConfidence> inputs;
    for (Modality m : kModalities) {
      std::vector<double> x = features[m].at(id).values;
      if (with_gender) {
        const auto it = gender.find(id);
        if (it == gender.end())
          fail(Errc::missing_label, "no gender label for session " + id);
        x.push_back(static_cast<double>(it->second));
      }
      inputs.push_back(models.at(m).predict(x));
    }
    const auto fused = fusion::fuse(inputs, config.strategy);

    eval::SessionPrediction sp;
    sp.session_id = id;
    sp.fused = fused;
    sp.clamped = clamp_phq8(fused.final_value);
    rows.push_back(featureio::to_prediction_row(sp, with_gender));
  }

  featureio::write_predictions_file(config.out, rows, config.stamp());
  std::cout << "wrote " << rows.size() << " predictions ("
            << fusion::to_string(config.strategy) << ") -> "
            << config.out.string() << '\n';
  return 0;
}

int cmd_evaluate(const RunConfig& config) {
  require_path(config.predictions_csv, "predictions");
  require_path(config.labels_path, "labels");
  require_path(config.out, "out");

  const auto rows = featureio::read_predictions_file(config.predictions_csv);
  std::map<std::string, SessionRecord> records;
  for (auto& r : ingest::load_labels_file(config.labels_path))
    records.emplace(r.session_id, std::move(r));

  const bool include_gender = rows.front().include_gender;
  for (const auto& r : rows)
    if (r.include_gender != include_gender)
      fail(Errc::invalid_config, "predictions mix gender settings");

  std::vector<eval::MetricsRow> metrics;
  std::ostringstream dominance_lines;

  for (Split split : {Split::development, Split::train, Split::test}) {
    std::vector<const featureio::PredictionRow*> in_split;
    std::vector<double> truth;
    for (const auto& r : rows) {
      const auto it = records.find(r.session_id);
      if (it == records.end())
        fail(Errc::missing_label, "no label for session " + r.session_id);
      if (it->second.split != split) continue;
      if (!it->second.phq8)
        fail(Errc::missing_label, "no phq8 for session " + r.session_id);
      in_split.push_back(&r);
      truth.push_back(static_cast<double>(*it->second.phq8));
    }
    if (in_split.empty()) continue;

    std::map<Modality, std::vector<double>> single;
    std::vector<double> fused;
    fusion::DominanceReport dominance;
    dominance.total = in_split.size();
    for (const auto* r : in_split) {
      single[Modality::audio].push_back(clamp_phq8(r->audio_mean));
      single[Modality::video].push_back(clamp_phq8(r->video_mean));
      single[Modality::text].push_back(clamp_phq8(r->text_mean));
      fused.push_back(r->fused_phq8);
      const auto ranked = fusion::confidence_rank(
          {{r->audio_mean, r->audio_std, Modality::audio},
           {r->video_mean, r->video_std, Modality::video},
           {r->text_mean, r->text_std, Modality::text}});
      ++dominance.wins[ranked.front().modality];
    }

    for (Modality m : {Modality::video, Modality::audio, Modality::text})
      metrics.push_back({eval::feature_used_label(m), split,
                         eval::rmse(single[m], truth), eval::mae(single[m], truth),
                         include_gender});
    metrics.push_back({"fusion", split, eval::rmse(fused, truth),
                       eval::mae(fused, truth), include_gender});

    dominance_lines << "dominance " << to_string(split) << ":";
    for (Modality m : kModalities)
      dominance_lines << ' ' << to_string(m) << '='
                      << dominance.wins[m] << '/' << dominance.total;
    dominance_lines << '\n';
  }

  if (metrics.empty())
    fail(Errc::missing_split, "no labeled split covers the predictions");

  featureio::write_metrics_file(config.out, metrics, config.stamp());
  std::cout << featureio::render_metrics_table(metrics);
  std::cout << dominance_lines.str();
  std::cout << "wrote metrics -> " << config.out.string() << '\n';
  return 0;
}

int cmd_synth(const RunConfig& config) {
  require_path(config.out, "out");
  eval::SynthConfig synth = config.synth;
  synth.seed = config.seed;
  eval::synth_generate(config.out, synth);
  std::cout << "generated " << synth.n_sessions << " sessions ("
            << to_string(synth.informative) << " informative) under "
            << config.out.string() << '\n';
  return 0;
}

}  // namespace mmsev::cli
