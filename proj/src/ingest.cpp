#include "mmsev/ingest.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mmsev/util.hpp"

namespace mmsev::ingest {

namespace {

using util::format_double;
using util::parse_double;
using util::split;
using util::to_lower;
using util::trim;

// Reads logical lines, tolerating CRLF; tracks 1-based line numbers.
struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  bool next(std::string& out) {
    if (!std::getline(in, out)) return false;
    ++line_no;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return true;
  }
};

bool all_cells_numeric(const std::vector<std::string>& cells) {
  for (const auto& c : cells) {
    const std::string t = trim(c);
    if (t.empty()) continue;  // empty cells do not make a row a header
    if (!parse_double(t)) return false;
  }
  return true;
}

// Descriptor cell rule: NaN or empty -> 0.0 (counted); non-numeric or
// infinite -> error.
double descriptor_cell(const std::string& cell, std::size_t line_no,
                       ParseReport& report) {
  const std::string t = trim(cell);
  if (t.empty()) {
    ++report.nan_replaced;
    return 0.0;
  }
  const auto v = parse_double(t);
  if (!v) fail(Errc::non_numeric, "non-numeric cell '" + t + "'", line_no);
  if (std::isnan(*v)) {
    ++report.nan_replaced;
    return 0.0;
  }
  if (std::isinf(*v)) fail(Errc::non_numeric, "infinite cell", line_no);
  return *v;
}

double strict_cell(const std::string& cell, std::size_t line_no) {
  const auto v = parse_double(cell);
  if (!v || !std::isfinite(*v))
    fail(Errc::non_numeric, "non-numeric cell '" + trim(cell) + "'", line_no);
  return *v;
}

std::string sanitize_name(std::string_view raw) {
  std::string out = trim(raw);
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

}  // namespace

ColumnMap ColumnMap::defaults() {
  ColumnMap m;
  m.headerless_descriptor_names = covarep74_names();
  return m;
}

ColumnMap ColumnMap::with_landmark_confidence() {
  ColumnMap m = defaults();
  m.confidence_col = 2;
  m.success_col = 3;
  m.x0_col = 4;
  m.y0_col = 72;
  m.total_cols = 140;
  return m;
}

const std::vector<std::string>& ColumnMap::covarep74_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"F0", "VUV", "NAQ",       "QOQ", "H1",
                                  "H2", "PSP", "MDQ",       "peakSlope",
                                  "Rd", "Rd_conf"};
    for (int i = 0; i <= 24; ++i) n.push_back("MCEP_" + std::to_string(i));
    for (int i = 0; i <= 24; ++i) n.push_back("HMPDM_" + std::to_string(i));
    for (int i = 0; i <= 12; ++i) n.push_back("HMPDD_" + std::to_string(i));
    return n;
  }();
  return names;
}

DescriptorSeries parse_descriptor_table(std::istream& in, const ColumnMap& map,
                                        ParseReport* report,
                                        double frame_period) {
  if (frame_period <= 0.0)
    fail(Errc::invalid_config, "frame_period must be > 0");

  ParseReport local;
  ParseReport& rep = report ? *report : local;
  DescriptorSeries series;
  series.frame_period = frame_period;

  LineReader reader{in};
  std::string line;
  std::size_t expected_cols = 0;
  bool saw_any_row = false;

  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (!saw_any_row) {
      saw_any_row = true;
      if (!all_cells_numeric(cells)) {
        // Header row carries the descriptor names.
        expected_cols = cells.size();
        for (const auto& c : cells)
          series.descriptor_names.push_back(sanitize_name(c));
        continue;
      }
      // Headerless: names come from the canonical layout.
      expected_cols = map.headerless_descriptor_names.size();
      if (cells.size() != expected_cols)
        fail(Errc::wrong_arity,
             "headerless descriptor row has " + std::to_string(cells.size()) +
                 " cells, canonical layout has " + std::to_string(expected_cols),
             reader.line_no);
      series.descriptor_names = map.headerless_descriptor_names;
    }
    if (cells.size() != expected_cols)
      fail(Errc::ragged_row,
           "row has " + std::to_string(cells.size()) + " cells, expected " +
               std::to_string(expected_cols),
           reader.line_no);
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      row[i] = descriptor_cell(cells[i], reader.line_no, rep);
    series.frames.push_back(std::move(row));
    ++rep.rows;
  }

  if (series.frames.empty())
    fail(Errc::empty_input, "descriptor table has no data rows");
  return series;
}

LandmarkSeries parse_landmark_table(std::istream& in, const ColumnMap& map) {
  LandmarkSeries series;
  LineReader reader{in};
  std::string line;
  bool first = true;

  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (first) {
      first = false;
      if (!all_cells_numeric(cells)) continue;  // header row
    }
    if (static_cast<int>(cells.size()) != map.total_cols)
      fail(Errc::wrong_arity,
           "landmark row has " + std::to_string(cells.size()) +
               " cells, expected " + std::to_string(map.total_cols),
           reader.line_no);

    const double t = strict_cell(cells[static_cast<std::size_t>(map.time_col)],
                                 reader.line_no);
    if (!series.timestamps.empty() && t < series.timestamps.back())
      fail(Errc::non_monotone_time,
           "timestamp " + format_double(t) + " decreases", reader.line_no);

    Shape shape;
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
      shape[i].x = strict_cell(cells[static_cast<std::size_t>(map.x0_col) + i],
                               reader.line_no);
      shape[i].y = strict_cell(cells[static_cast<std::size_t>(map.y0_col) + i],
                               reader.line_no);
    }
    series.frames.push_back(shape);
    series.timestamps.push_back(t);
  }

  if (series.frames.empty())
    fail(Errc::empty_input, "landmark table has no data rows");
  return series;
}

Transcript parse_transcript(std::istream& in) {
  Transcript transcript;
  LineReader reader{in};
  std::string line;
  bool first = true;

  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, '\t');
    if (first) {
      first = false;
      // Header detection: a first row whose times do not parse.
      if (cells.size() >= 2 && (!parse_double(cells[0]) || !parse_double(cells[1])))
        continue;
    }
    if (cells.size() < 4)
      fail(Errc::missing_field,
           "transcript row has " + std::to_string(cells.size()) +
               " fields, expected start_time, stop_time, speaker, value",
           reader.line_no);

    Utterance u;
    const auto start = parse_double(cells[0]);
    const auto stop = parse_double(cells[1]);
    if (!start || !stop)
      fail(Errc::malformed_time, "unparseable utterance time", reader.line_no);
    if (*stop < *start)
      fail(Errc::malformed_time,
           "stop_time " + format_double(*stop) + " precedes start_time " +
               format_double(*start),
           reader.line_no);
    u.start_time = *start;
    u.stop_time = *stop;
    u.speaker = trim(cells[2]);
    // The value field may itself contain tabs; rejoin the remainder.
    std::string text = cells[3];
    for (std::size_t i = 4; i < cells.size(); ++i) text += "\t" + cells[i];
    u.text = trim(text);
    transcript.utterances.push_back(std::move(u));
  }
  return transcript;
}

Lexicon load_lexicon(std::istream& in, LexiconKind kind) {
  Lexicon lex;
  lex.kind = kind;
  LineReader reader{in};
  std::string line;

  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    if (kind == LexiconKind::sentiment) {
      auto cells = split(line, '\t');
      if (cells.size() != 2)
        fail(Errc::missing_field, "sentiment lexicon line needs 'term<TAB>integer'",
             reader.line_no);
      const auto valence = util::parse_int(cells[1]);
      if (!valence)
        fail(Errc::non_numeric, "unparseable valence '" + trim(cells[1]) + "'",
             reader.line_no);
      if (*valence < -5 || *valence > 5)
        fail(Errc::out_of_range,
             "valence " + std::to_string(*valence) + " outside [-5, 5]",
             reader.line_no);
      lex.entries[to_lower(trim(cells[0]))] = static_cast<int>(*valence);
    } else {
      lex.entries[to_lower(trim(line))] = 1;
    }
  }

  if (lex.entries.empty()) fail(Errc::empty_input, "lexicon has no entries");
  return lex;
}

std::vector<SessionRecord> load_labels(std::istream& in) {
  std::vector<SessionRecord> records;
  std::set<std::string> ids;
  LineReader reader{in};
  std::string line;
  bool first = true;

  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (first) {
      first = false;
      if (!cells.empty() && to_lower(trim(cells[0])) == "session_id") continue;
    }
    if (cells.size() != 4)
      fail(Errc::missing_field,
           "label row needs session_id, phq8, gender, split", reader.line_no);

    SessionRecord r;
    r.session_id = trim(cells[0]);
    if (r.session_id.empty())
      fail(Errc::missing_field, "empty session_id", reader.line_no);
    if (!ids.insert(r.session_id).second)
      fail(Errc::duplicate_id, "duplicate session_id " + r.session_id,
           reader.line_no);

    const std::string phq8_cell = trim(cells[1]);
    if (!phq8_cell.empty()) {
      const auto v = util::parse_int(phq8_cell);
      if (!v) fail(Errc::non_numeric, "unparseable phq8 '" + phq8_cell + "'",
                   reader.line_no);
      if (*v < 0 || *v > 24)
        fail(Errc::out_of_range, "phq8 " + std::to_string(*v) + " outside [0, 24]",
             reader.line_no);
      r.phq8 = static_cast<int>(*v);
    }

    const auto gender = util::parse_int(trim(cells[2]));
    if (!gender || (*gender != 0 && *gender != 1))
      fail(Errc::out_of_range, "gender must be 0 or 1", reader.line_no);
    r.gender = static_cast<int>(*gender);

    const auto split_v = split_from_string(trim(cells[3]));
    if (!split_v)
      fail(Errc::out_of_range, "unknown split '" + trim(cells[3]) + "'",
           reader.line_no);
    r.split = *split_v;
    records.push_back(std::move(r));
  }

  if (records.empty()) fail(Errc::empty_input, "label manifest has no rows");
  return records;
}

void write_descriptor_table(std::ostream& out, const DescriptorSeries& series) {
  for (std::size_t i = 0; i < series.descriptor_names.size(); ++i) {
    if (i) out << ',';
    out << series.descriptor_names[i];
  }
  out << '\n';
  for (const auto& row : series.frames) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
}

void write_landmark_table(std::ostream& out, const LandmarkSeries& series) {
  out << "frame,timestamp";
  for (std::size_t i = 0; i < kLandmarkCount; ++i) out << ",x" << i;
  for (std::size_t i = 0; i < kLandmarkCount; ++i) out << ",y" << i;
  out << '\n';
  for (std::size_t f = 0; f < series.frames.size(); ++f) {
    out << f << ',' << format_double(series.timestamps[f]);
    for (std::size_t i = 0; i < kLandmarkCount; ++i)
      out << ',' << format_double(series.frames[f][i].x);
    for (std::size_t i = 0; i < kLandmarkCount; ++i)
      out << ',' << format_double(series.frames[f][i].y);
    out << '\n';
  }
}

void write_transcript(std::ostream& out, const Transcript& transcript) {
  out << "start_time\tstop_time\tspeaker\tvalue\n";
  for (const auto& u : transcript.utterances) {
    out << format_double(u.start_time) << '\t' << format_double(u.stop_time)
        << '\t' << u.speaker << '\t' << u.text << '\n';
  }
}

void write_labels(std::ostream& out, const std::vector<SessionRecord>& records) {
  out << "session_id,phq8,gender,split\n";
  for (const auto& r : records) {
    out << r.session_id << ',';
    if (r.phq8) out << *r.phq8;
    out << ',' << r.gender << ',' << to_string(r.split) << '\n';
  }
}

namespace {

std::ifstream open_or_fail(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  return in;
}

}  // namespace

DescriptorSeries load_descriptor_file(const std::filesystem::path& path,
                                      const ColumnMap& map, ParseReport* report,
                                      double frame_period) {
  auto in = open_or_fail(path);
  return parse_descriptor_table(in, map, report, frame_period);
}

LandmarkSeries load_landmark_file(const std::filesystem::path& path,
                                  const ColumnMap& map) {
  auto in = open_or_fail(path);
  return parse_landmark_table(in, map);
}

Transcript load_transcript_file(const std::filesystem::path& path) {
  auto in = open_or_fail(path);
  return parse_transcript(in);
}

Lexicon load_lexicon_file(const std::filesystem::path& path, LexiconKind kind) {
  auto in = open_or_fail(path);
  return load_lexicon(in, kind);
}

std::vector<SessionRecord> load_labels_file(const std::filesystem::path& path) {
  auto in = open_or_fail(path);
  return load_labels(in);
}

}  // namespace mmsev::ingest
