#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmsev/types.hpp"

namespace mmsev::ingest {

enum class LexiconKind { sentiment, depression };

// Lowercase term -> integer valence (sentiment, in [-5, 5]) or 1
// (depression presence). Multiword terms are kept verbatim and matched
// against raw lowercased utterance text downstream.
struct Lexicon {
  LexiconKind kind = LexiconKind::sentiment;
  std::map<std::string, int> entries;
};

// Column bindings for the external table formats.
struct ColumnMap {
  // Landmark table: time column plus two contiguous 68-column blocks.
  int time_col = 1;
  int x0_col = 2;
  int y0_col = 70;
  int total_cols = 138;
  std::optional<int> confidence_col;  // ingested but unused by default
  std::optional<int> success_col;

  // Descriptor names assumed when the table ships without a header.
  std::vector<std::string> headerless_descriptor_names;

  static ColumnMap defaults();
  // "frame, timestamp, confidence, success, x0..x67, y0..y67"
  static ColumnMap with_landmark_confidence();
  // Canonical 74-column COVAREP layout.
  static const std::vector<std::string>& covarep74_names();
};

struct ParseReport {
  std::size_t rows = 0;
  std::size_t nan_replaced = 0;  // NaN or empty cells rewritten to 0.0
};

DescriptorSeries parse_descriptor_table(std::istream& in, const ColumnMap& map,
                                        ParseReport* report = nullptr,
                                        double frame_period = 0.01);
LandmarkSeries parse_landmark_table(std::istream& in, const ColumnMap& map);
Transcript parse_transcript(std::istream& in);
Lexicon load_lexicon(std::istream& in, LexiconKind kind);
std::vector<SessionRecord> load_labels(std::istream& in);

// Serializers; parse(write(x)) == x, and the synthetic generator emits
// through these so its trees always ingest cleanly.
void write_descriptor_table(std::ostream& out, const DescriptorSeries& series);
void write_landmark_table(std::ostream& out, const LandmarkSeries& series);
void write_transcript(std::ostream& out, const Transcript& transcript);
void write_labels(std::ostream& out, const std::vector<SessionRecord>& records);

// File-path conveniences; wrap stream errors as io_error with the path.
DescriptorSeries load_descriptor_file(const std::filesystem::path& path,
                                      const ColumnMap& map,
                                      ParseReport* report = nullptr,
                                      double frame_period = 0.01);
LandmarkSeries load_landmark_file(const std::filesystem::path& path,
                                  const ColumnMap& map);
Transcript load_transcript_file(const std::filesystem::path& path);
Lexicon load_lexicon_file(const std::filesystem::path& path, LexiconKind kind);
std::vector<SessionRecord> load_labels_file(const std::filesystem::path& path);

}  // namespace mmsev::ingest
