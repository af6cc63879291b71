#include "mmsev/sessionio.hpp"

#include <algorithm>

namespace mmsev::sessionio {

std::vector<SessionPaths> discover_sessions(const std::filesystem::path& root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(root, ec) || ec)
    fail(Errc::io_error, "not a directory: " + root.string());

  std::vector<SessionPaths> sessions;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const auto dir = entry.path();
    SessionPaths paths;
    paths.session_id = dir.filename().string();
    paths.descriptors = dir / kDescriptorFile;
    paths.landmarks = dir / kLandmarkFile;
    paths.transcript = dir / kTranscriptFile;
    const bool known = std::filesystem::exists(paths.descriptors) ||
                       std::filesystem::exists(paths.landmarks) ||
                       std::filesystem::exists(paths.transcript);
    if (known) sessions.push_back(std::move(paths));
  }
  std::sort(sessions.begin(), sessions.end(),
            [](const SessionPaths& a, const SessionPaths& b) {
              return a.session_id < b.session_id;
            });
  return sessions;
}

FeatureVector extract_session(const SessionPaths& paths, Modality modality,
                              const ExtractorBundle& bundle) {
  switch (modality) {
    case Modality::audio: {
      const auto series = ingest::load_descriptor_file(
          paths.descriptors, bundle.column_map, nullptr, bundle.frame_period);
      return audiofeat::extract_audio_features(series, bundle.audio,
                                               paths.session_id);
    }
    case Modality::video: {
      const auto series =
          ingest::load_landmark_file(paths.landmarks, bundle.column_map);
      return videofeat::extract_video_features(series, bundle.stable_points,
                                               bundle.groups, paths.session_id);
    }
    case Modality::text: {
      const auto transcript = ingest::load_transcript_file(paths.transcript);
      return textfeat::extract_text_features(
          transcript, bundle.text, bundle.depression_lexicon,
          bundle.sentiment_lexicon, paths.session_id);
    }
  }
  fail(Errc::invalid_config, "unknown modality");
}

}  // namespace mmsev::sessionio
