#include "mmsev/featureio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mmsev/util.hpp"

namespace mmsev::featureio {

using util::format_double;
using util::parse_double;
using util::split;
using util::trim;

namespace {

struct Lines {
  std::istream& in;
  std::size_t line_no = 0;

  bool next(std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    return true;
  }
};

// Reads the stamp line if present and returns the first content line.
bool first_content_line(Lines& reader, std::string& line) {
  while (reader.next(line)) {
    if (RunStamp::parse(line)) continue;
    if (trim(line).empty()) continue;
    return true;
  }
  return false;
}

double numeric_cell(const std::string& cell, std::size_t line_no) {
  const auto v = parse_double(cell);
  if (!v) fail(Errc::non_numeric, "non-numeric cell '" + trim(cell) + "'", line_no);
  return *v;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string RunStamp::render() const {
  return "# mmsev " + version + " seed=" + std::to_string(seed) +
         " config=" + util::hex64(config_hash);
}

std::optional<RunStamp> RunStamp::parse(const std::string& line) {
  const auto parts = split(trim(line), ' ');
  if (parts.size() != 5 || parts[0] != "#" || parts[1] != "mmsev")
    return std::nullopt;
  if (!parts[3].starts_with("seed=") || !parts[4].starts_with("config="))
    return std::nullopt;
  RunStamp stamp;
  stamp.version = parts[2];
  const std::string_view seed_str = std::string_view(parts[3]).substr(5);
  auto [p1, e1] = std::from_chars(seed_str.data(), seed_str.data() + seed_str.size(),
                                  stamp.seed);
  if (e1 != std::errc() || p1 != seed_str.data() + seed_str.size())
    return std::nullopt;
  const std::string_view hash_str = std::string_view(parts[4]).substr(7);
  auto [p2, e2] = std::from_chars(hash_str.data(), hash_str.data() + hash_str.size(),
                                  stamp.config_hash, 16);
  if (e2 != std::errc() || p2 != hash_str.data() + hash_str.size())
    return std::nullopt;
  return stamp;
}

void write_feature_table(std::ostream& out,
                         const std::vector<FeatureVector>& features,
                         const RunStamp& stamp) {
  if (features.empty()) fail(Errc::empty_input, "no feature vectors to write");
  const auto& names = features.front().names;
  for (const auto& f : features) {
    f.validate();
    if (f.names != names)
      fail(Errc::dimension_mismatch,
           "feature names differ across sessions (" + f.session_id + ")");
  }

  out << stamp.render() << '\n';
  out << "session_id";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (const auto& f : features) {
    out << f.session_id;
    for (double v : f.values) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<FeatureVector> read_feature_table(std::istream& in, Modality modality) {
  Lines reader{in};
  std::string line;
  if (!first_content_line(reader, line))
    fail(Errc::empty_input, "feature table has no header");
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "session_id")
    fail(Errc::missing_field, "feature header must start with session_id",
         reader.line_no);
  const std::vector<std::string> names(header.begin() + 1, header.end());

  std::vector<FeatureVector> out;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      fail(Errc::ragged_row,
           "row has " + std::to_string(cells.size()) + " cells, expected " +
               std::to_string(header.size()),
           reader.line_no);
    FeatureVector f;
    f.session_id = cells[0];
    f.modality = modality;
    f.names = names;
    f.values.reserve(names.size());
    for (std::size_t i = 1; i < cells.size(); ++i)
      f.values.push_back(numeric_cell(cells[i], reader.line_no));
    f.validate();
    out.push_back(std::move(f));
  }
  if (out.empty()) fail(Errc::empty_input, "feature table has no rows");
  return out;
}

PredictionRow to_prediction_row(const eval::SessionPrediction& prediction,
                                bool include_gender) {
  PredictionRow row;
  row.session_id = prediction.session_id;
  for (const auto& p : prediction.fused.inputs) {
    switch (p.modality) {
      case Modality::audio: row.audio_mean = p.mean; row.audio_std = p.stddev; break;
      case Modality::video: row.video_mean = p.mean; row.video_std = p.stddev; break;
      case Modality::text: row.text_mean = p.mean; row.text_std = p.stddev; break;
    }
  }
  row.chosen = prediction.fused.chosen_modality
                   ? to_string(*prediction.fused.chosen_modality)
                   : "blend";
  row.fused_phq8 = prediction.clamped;
  row.fused_raw = prediction.fused.final_value;
  row.strategy = prediction.fused.strategy;
  row.include_gender = include_gender;
  return row;
}

void write_predictions(std::ostream& out, const std::vector<PredictionRow>& rows,
                       const RunStamp& stamp) {
  out << stamp.render() << '\n';
  out << "session_id,audio_mean,audio_std,video_mean,video_std,text_mean,"
         "text_std,chosen_modality,fused_phq8,fused_raw,strategy,include_gender\n";
  for (const auto& r : rows) {
    out << r.session_id << ',' << format_double(r.audio_mean) << ','
        << format_double(r.audio_std) << ',' << format_double(r.video_mean)
        << ',' << format_double(r.video_std) << ',' << format_double(r.text_mean)
        << ',' << format_double(r.text_std) << ',' << r.chosen << ','
        << format_double(r.fused_phq8) << ',' << format_double(r.fused_raw)
        << ',' << fusion::to_string(r.strategy) << ','
        << (r.include_gender ? 1 : 0) << '\n';
  }
}

std::vector<PredictionRow> read_predictions(std::istream& in) {
  Lines reader{in};
  std::string line;
  if (!first_content_line(reader, line))
    fail(Errc::empty_input, "predictions file has no header");
  const auto header = split(line, ',');
  if (header.size() != 12 || header[0] != "session_id")
    fail(Errc::missing_field, "unexpected predictions header", reader.line_no);

  std::vector<PredictionRow> rows;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 12)
      fail(Errc::ragged_row,
           "row has " + std::to_string(cells.size()) + " cells, expected 12",
           reader.line_no);
    PredictionRow r;
    r.session_id = cells[0];
    r.audio_mean = numeric_cell(cells[1], reader.line_no);
    r.audio_std = numeric_cell(cells[2], reader.line_no);
    r.video_mean = numeric_cell(cells[3], reader.line_no);
    r.video_std = numeric_cell(cells[4], reader.line_no);
    r.text_mean = numeric_cell(cells[5], reader.line_no);
    r.text_std = numeric_cell(cells[6], reader.line_no);
    r.chosen = cells[7];
    r.fused_phq8 = numeric_cell(cells[8], reader.line_no);
    r.fused_raw = numeric_cell(cells[9], reader.line_no);
    r.strategy = fusion::strategy_from_string(cells[10]);
    if (cells[11] != "0" && cells[11] != "1")
      fail(Errc::out_of_range, "include_gender must be 0 or 1", reader.line_no);
    r.include_gender = cells[11] == "1";
    rows.push_back(std::move(r));
  }
  if (rows.empty()) fail(Errc::empty_input, "predictions file has no rows");
  return rows;
}

void write_metrics(std::ostream& out, const std::vector<eval::MetricsRow>& rows,
                   const RunStamp& stamp) {
  out << stamp.render() << '\n';
  out << "feature_used,split,rmse,mae,include_gender\n";
  for (const auto& r : rows) {
    out << r.feature_used << ',' << to_string(r.split) << ','
        << format_double(r.rmse) << ',' << format_double(r.mae) << ','
        << (r.include_gender ? 1 : 0) << '\n';
  }
}

std::vector<eval::MetricsRow> read_metrics(std::istream& in) {
  Lines reader{in};
  std::string line;
  if (!first_content_line(reader, line))
    fail(Errc::empty_input, "metrics file has no header");
  const auto header = split(line, ',');
  if (header.size() != 5 || header[0] != "feature_used")
    fail(Errc::missing_field, "unexpected metrics header", reader.line_no);

  std::vector<eval::MetricsRow> rows;
  while (reader.next(line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5)
      fail(Errc::ragged_row,
           "row has " + std::to_string(cells.size()) + " cells, expected 5",
           reader.line_no);
    eval::MetricsRow r;
    r.feature_used = cells[0];
    const auto split_value = split_from_string(cells[1]);
    if (!split_value)
      fail(Errc::out_of_range, "unknown split '" + cells[1] + "'", reader.line_no);
    r.split = *split_value;
    r.rmse = numeric_cell(cells[2], reader.line_no);
    r.mae = numeric_cell(cells[3], reader.line_no);
    if (cells[4] != "0" && cells[4] != "1")
      fail(Errc::out_of_range, "include_gender must be 0 or 1", reader.line_no);
    r.include_gender = cells[4] == "1";
    rows.push_back(std::move(r));
  }
  if (rows.empty()) fail(Errc::empty_input, "metrics file has no rows");
  return rows;
}

std::string render_metrics_table(const std::vector<eval::MetricsRow>& rows) {
  const char* headers[5] = {"feature_used", "split", "rmse", "mae", "gender"};
  std::vector<std::array<std::string, 5>> cells;
  for (const auto& r : rows)
    cells.push_back({r.feature_used, to_string(r.split), fixed4(r.rmse),
                     fixed4(r.mae), r.include_gender ? "yes" : "no"});

  std::size_t width[5];
  for (std::size_t c = 0; c < 5; ++c) {
    width[c] = std::string(headers[c]).size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }

  std::ostringstream out;
  auto emit = [&](const std::array<std::string, 5>& row) {
    for (std::size_t c = 0; c < 5; ++c) {
      if (c) out << "  ";
      out << row[c] << std::string(width[c] - row[c].size(), ' ');
    }
    out << '\n';
  };
  emit({headers[0], headers[1], headers[2], headers[3], headers[4]});
  for (const auto& row : cells) emit(row);
  return out.str();
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  return in;
}

}  // namespace

void write_feature_file(const std::filesystem::path& path,
                        const std::vector<FeatureVector>& features,
                        const RunStamp& stamp) {
  auto out = open_out(path);
  write_feature_table(out, features, stamp);
  if (!out) fail(Errc::io_error, "failed writing " + path.string());
}

std::vector<FeatureVector> read_feature_file(const std::filesystem::path& path,
                                             Modality modality) {
  auto in = open_in(path);
  return read_feature_table(in, modality);
}

void write_predictions_file(const std::filesystem::path& path,
                            const std::vector<PredictionRow>& rows,
                            const RunStamp& stamp) {
  auto out = open_out(path);
  write_predictions(out, rows, stamp);
  if (!out) fail(Errc::io_error, "failed writing " + path.string());
}

std::vector<PredictionRow> read_predictions_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_predictions(in);
}

void write_metrics_file(const std::filesystem::path& path,
                        const std::vector<eval::MetricsRow>& rows,
                        const RunStamp& stamp) {
  auto out = open_out(path);
  write_metrics(out, rows, stamp);
  if (!out) fail(Errc::io_error, "failed writing " + path.string());
}

std::vector<eval::MetricsRow> read_metrics_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_metrics(in);
}

}  // namespace mmsev::featureio
