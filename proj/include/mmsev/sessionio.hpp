#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mmsev/audiofeat.hpp"
#include "mmsev/ingest.hpp"
#include "mmsev/textfeat.hpp"
#include "mmsev/types.hpp"
#include "mmsev/videofeat.hpp"

namespace mmsev::sessionio {

struct SessionPaths {
  std::string session_id;
  std::filesystem::path descriptors;
  std::filesystem::path landmarks;
  std::filesystem::path transcript;
};

inline constexpr const char* kDescriptorFile = "descriptors.csv";
inline constexpr const char* kLandmarkFile = "landmarks.csv";
inline constexpr const char* kTranscriptFile = "transcript.tsv";

// Subdirectories of root holding at least one known session file, sorted
// by session id. The root itself must exist.
std::vector<SessionPaths> discover_sessions(const std::filesystem::path& root);

// Everything extraction needs beyond the session files themselves.
struct ExtractorBundle {
  audiofeat::AudioConfig audio;
  videofeat::StablePointSet stable_points = videofeat::StablePointSet::default_set();
  videofeat::RegionGroups groups = videofeat::RegionGroups::default_groups();
  textfeat::TextConfig text;
  ingest::Lexicon depression_lexicon;
  ingest::Lexicon sentiment_lexicon;
  ingest::ColumnMap column_map = ingest::ColumnMap::defaults();
  double frame_period = 0.01;
};

FeatureVector extract_session(const SessionPaths& paths, Modality modality,
                              const ExtractorBundle& bundle);

}  // namespace mmsev::sessionio
