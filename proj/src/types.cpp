#include "mmsev/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mmsev {

std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::development: return "development";
    case Split::test: return "test";
  }
  return "?";
}

std::string to_string(Modality m) {
  switch (m) {
    case Modality::audio: return "audio";
    case Modality::video: return "video";
    case Modality::text: return "text";
  }
  return "?";
}

std::optional<Split> split_from_string(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "development") return Split::development;
  if (s == "test") return Split::test;
  return std::nullopt;
}

std::optional<Modality> modality_from_string(std::string_view s) {
  if (s == "audio") return Modality::audio;
  if (s == "video") return Modality::video;
  if (s == "text") return Modality::text;
  return std::nullopt;
}

double clamp_phq8(double value) {
  return std::min(kPhq8Max, std::max(kPhq8Min, value));
}

void SessionRecord::validate() const {
  if (session_id.empty())
    fail(Errc::invalid_config, "session_id must be non-empty");
  if (gender != 0 && gender != 1)
    fail(Errc::out_of_range, "gender must be 0 or 1 for session " + session_id);
  if (phq8 && (*phq8 < 0 || *phq8 > 24))
    fail(Errc::out_of_range, "phq8 out of [0,24] for session " + session_id);
}

std::vector<double> DescriptorSeries::column(std::size_t d) const {
  std::vector<double> out;
  out.reserve(frames.size());
  for (const auto& row : frames) out.push_back(row[d]);
  return out;
}

std::optional<std::size_t> DescriptorSeries::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < descriptor_names.size(); ++i)
    if (descriptor_names[i] == name) return i;
  return std::nullopt;
}

double Transcript::duration_seconds() const {
  if (utterances.empty()) return 0.0;
  return utterances.back().stop_time - utterances.front().start_time;
}

void FeatureVector::validate() const {
  if (names.size() != values.size())
    fail(Errc::dimension_mismatch, "feature names/values length mismatch for session " + session_id);
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second)
      fail(Errc::duplicate_id, "duplicate feature name '" + n + "'");
  for (double v : values)
    if (!std::isfinite(v))
      fail(Errc::out_of_range, "non-finite feature value in session " + session_id);
}

void Dataset::add_record(SessionRecord record) {
  record.validate();
  if (find_record(record.session_id))
    fail(Errc::duplicate_id, "duplicate session_id " + record.session_id);
  records_.push_back(std::move(record));
}

void Dataset::add_features(FeatureVector features) {
  features.validate();
  if (!find_record(features.session_id))
    fail(Errc::missing_features,
         "features reference unknown session " + features.session_id);
  // All vectors of one modality must share an identical name list.
  for (const auto& [key, existing] : features_) {
    if (key.second == features.modality && existing.names != features.names)
      fail(Errc::dimension_mismatch,
           "feature name list for session " + features.session_id +
               " differs from previously added " + to_string(features.modality) +
               " vectors");
  }
  auto key = std::make_pair(features.session_id, features.modality);
  if (features_.count(key))
    fail(Errc::duplicate_id,
         "features already present for session " + features.session_id);
  features_.emplace(std::move(key), std::move(features));
}

const SessionRecord* Dataset::find_record(std::string_view session_id) const {
  for (const auto& r : records_)
    if (r.session_id == session_id) return &r;
  return nullptr;
}

const FeatureVector* Dataset::find_features(std::string_view session_id,
                                            Modality m) const {
  auto it = features_.find(std::make_pair(std::string(session_id), m));
  return it == features_.end() ? nullptr : &it->second;
}

Dataset filter_split(const Dataset& dataset, Split split) {
  Dataset out;
  for (const auto& r : dataset.records()) {
    if (r.split != split) continue;
    out.add_record(r);
    for (Modality m : {Modality::audio, Modality::video, Modality::text})
      if (const FeatureVector* fv = dataset.find_features(r.session_id, m))
        out.add_features(*fv);
  }
  return out;
}

DesignMatrix assemble_design_matrix(const Dataset& dataset, Modality modality,
                                    bool include_gender) {
  std::vector<const SessionRecord*> rows;
  rows.reserve(dataset.records().size());
  for (const auto& r : dataset.records()) rows.push_back(&r);
  std::sort(rows.begin(), rows.end(),
            [](const SessionRecord* a, const SessionRecord* b) {
              return a->session_id < b->session_id;
            });

  DesignMatrix out;
  if (rows.empty()) return out;

  const FeatureVector* first = nullptr;
  for (const SessionRecord* r : rows) {
    if (!r->phq8)
      fail(Errc::missing_label, "session " + r->session_id + " has no phq8 label");
    const FeatureVector* fv = dataset.find_features(r->session_id, modality);
    if (!fv)
      fail(Errc::missing_features, "session " + r->session_id + " has no " +
                                       to_string(modality) + " features");
    if (!first) first = fv;
  }

  const std::size_t base_cols = first->names.size();
  const std::size_t cols = base_cols + (include_gender ? 1 : 0);
  out.x = Matrix(rows.size(), cols);
  out.column_names = first->names;
  if (include_gender) out.column_names.push_back("gender");

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SessionRecord* r = rows[i];
    const FeatureVector* fv = dataset.find_features(r->session_id, modality);
    for (std::size_t j = 0; j < base_cols; ++j) out.x.at(i, j) = fv->values[j];
    if (include_gender) out.x.at(i, base_cols) = static_cast<double>(r->gender);
    out.targets.push_back(static_cast<double>(*r->phq8));
    out.row_ids.push_back(r->session_id);
  }
  return out;
}

}  // namespace mmsev
