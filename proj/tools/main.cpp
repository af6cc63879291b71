#include <deque>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmsev/cli.hpp"

namespace {

struct Binding {
  CLI::Option* opt;
  const char* key;
  std::string* value;  // null for bare flags, which apply "true"
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multimodal depression severity pipeline (PHQ-8 regression)"};
  app.require_subcommand(1);

  std::deque<std::string> storage;
  std::vector<Binding> bindings;
  std::string config_file;

  const auto add = [&](CLI::App* sub, const char* flag, const char* key,
                       const char* desc, bool required = false) {
    storage.emplace_back();
    auto* opt = sub->add_option(flag, storage.back(), desc);
    if (required) opt->required();
    bindings.push_back({opt, key, &storage.back()});
    return opt;
  };
  const auto add_flag = [&](CLI::App* sub, const char* flag, const char* key,
                            const char* desc) {
    auto* opt = sub->add_flag(std::string(flag));
    opt->description(desc);
    bindings.push_back({opt, key, nullptr});
    return opt;
  };
  const auto add_common = [&](CLI::App* sub, bool out_is_dir) {
    sub->add_option("--config", config_file, "flat key=value settings file");
    add(sub, "--seed", "seed", "run seed, stamped into every artifact");
    add(sub, "--jobs", "jobs", "worker threads (outputs identical for any value)");
    add(sub, "--out", "out",
        out_is_dir ? "output directory" : "output file", true);
  };

  std::string modality_str;
  auto* extract =
      app.add_subcommand("extract", "compute per-session features for one modality");
  extract->add_option("--modality", modality_str, "audio, video or text")
      ->required()
      ->check(CLI::IsMember({"audio", "video", "text"}));
  add(extract, "--input", "input", "root directory of session folders", true);
  add(extract, "--afinn", "afinn", "sentiment lexicon (term<TAB>valence)");
  add(extract, "--depression", "depression", "depression word list, one per line");
  add(extract, "--participant-tag", "text.participant_tag",
      "speaker tag kept from transcripts");
  add(extract, "--frame-period", "frame_period", "descriptor frame period in seconds");
  add_flag(extract, "--voiced-only", "audio.voiced_only",
           "drop frames whose VUV descriptor is 0");
  add_common(extract, false);

  auto* train = app.add_subcommand("train", "fit one random forest per modality");
  add(train, "--audio", "features.audio", "audio feature CSV", true);
  add(train, "--video", "features.video", "video feature CSV", true);
  add(train, "--text", "features.text", "text feature CSV", true);
  add(train, "--labels", "labels", "labels CSV (session_id,phq8,gender,split)", true);
  add(train, "--trees", "forest.n_trees", "trees per forest");
  add(train, "--max-depth", "forest.max_depth", "tree depth cap, -1 for none");
  add(train, "--min-leaf", "forest.min_samples_leaf", "minimum samples per leaf");
  add(train, "--mtry", "forest.mtry", "features tried per split, 0 for cols/3");
  add(train, "--bootstrap", "forest.bootstrap", "true/false bootstrap resampling");
  add_flag(train, "--include-gender", "include_gender",
           "append the gender column to every design matrix");
  add_common(train, true);

  auto* predict =
      app.add_subcommand("predict", "score sessions and fuse the three modalities");
  add(predict, "--models", "models", "directory written by train", true);
  add(predict, "--audio", "features.audio", "audio feature CSV", true);
  add(predict, "--video", "features.video", "video feature CSV", true);
  add(predict, "--text", "features.text", "text feature CSV", true);
  add(predict, "--labels", "labels",
      "labels CSV, needed when models use the gender column");
  add(predict, "--strategy", "fusion.strategy",
      "winner_take_all, average or confidence_weighted");
  add_common(predict, false);

  auto* evaluate =
      app.add_subcommand("evaluate", "RMSE/MAE per modality and fused, by split");
  add(evaluate, "--predictions", "predictions", "predictions CSV", true);
  add(evaluate, "--labels", "labels", "labels CSV", true);
  add_common(evaluate, false);

  auto* synth =
      app.add_subcommand("synth", "generate a synthetic session tree with labels");
  add(synth, "--sessions", "synth.n_sessions", "number of sessions");
  add(synth, "--informative", "synth.informative",
      "modality carrying the severity signal");
  add(synth, "--noise-audio", "synth.noise_audio", "audio noise level");
  add(synth, "--noise-video", "synth.noise_video", "video noise level");
  add(synth, "--noise-text", "synth.noise_text", "text noise level");
  add_common(synth, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    mmsev::cli::RunConfig config;
    if (!config_file.empty()) config.load_file(config_file);
    for (const auto& b : bindings)
      if (b.opt->count()) config.apply(b.key, b.value ? *b.value : "true");

    if (extract->parsed())
      return mmsev::cli::cmd_extract(config, *mmsev::modality_from_string(modality_str));
    if (train->parsed()) return mmsev::cli::cmd_train(config);
    if (predict->parsed()) return mmsev::cli::cmd_predict(config);
    if (evaluate->parsed()) return mmsev::cli::cmd_evaluate(config);
    if (synth->parsed()) return mmsev::cli::cmd_synth(config);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
